#pragma once

#include "sdd/cube.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace sdd {

/// Grayscale image with raw integer sample values and the container maximum
/// (255 or 65535).
struct GrayImage {
  Mat pixels;
  int max_value = 255;
};

GrayImage read_gray_image(const std::filesystem::path& path);

/// Writes 8-bit PGM/PNG; values are clamped to [0,255]. Format chosen by
/// extension (.pgm or .png). Atomic: write to a temp file, then rename.
void write_gray8(const std::filesystem::path& path, const Mat& values);

/// Writes 16-bit PGM/PNG; values clamped to [0,65535].
void write_gray16(const std::filesystem::path& path, const Mat& values);

/// Binary cube file: magic "SDD1", u32 LE n1,n2,n3, float32 LE payload in
/// frame-major order (frame 0 first, row-major within a frame).
void write_raw_cube(const std::filesystem::path& path, const Cube& cube);
Cube read_raw_cube(const std::filesystem::path& path);

/// Loads a RawCubeFile or a directory of same-size 8/16-bit grayscale
/// PGM/PNG files in lexicographic order. Image samples are normalized to
/// [0,1] by the container maximum; raw-cube floats are passed through.
std::vector<Mat> load_sequence(const std::filesystem::path& path);

/// write-then-rename text file write.
void write_text_atomic(const std::filesystem::path& path,
                       const std::string& content);

}  // namespace sdd
