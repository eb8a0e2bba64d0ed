#include "sdd/io.hpp"

#include "sdd/errors.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>

namespace sdd {

namespace fs = std::filesystem;

namespace {

std::string lower_ext(const fs::path& path) {
  std::string e = path.extension().string();
  std::transform(e.begin(), e.end(), e.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return e;
}

// ---- PGM ----

int pgm_next_token(std::istream& in, std::string& tok) {
  tok.clear();
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {}
      continue;
    }
    if (!std::isspace(c)) break;
  }
  if (c == EOF) return -1;
  do {
    tok.push_back(static_cast<char>(c));
  } while ((c = in.get()) != EOF && !std::isspace(c));
  return 0;
}

GrayImage read_pgm(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string tok;
  if (pgm_next_token(in, tok) < 0 || tok != "P5")
    throw IoError("not a binary PGM: " + path.string());
  long vals[3];
  for (int i = 0; i < 3; ++i) {
    if (pgm_next_token(in, tok) < 0)
      throw IoError("truncated PGM header: " + path.string());
    vals[i] = std::stol(tok);
  }
  const long cols = vals[0], rows = vals[1], maxval = vals[2];
  if (cols < 1 || rows < 1 || maxval < 1 || maxval > 65535)
    throw IoError("bad PGM header: " + path.string());
  GrayImage img;
  img.max_value = maxval > 255 ? 65535 : 255;
  img.pixels.resize(rows, cols);
  if (maxval > 255) {
    std::vector<unsigned char> buf(static_cast<std::size_t>(rows) * cols * 2);
    in.read(reinterpret_cast<char*>(buf.data()), buf.size());
    if (!in) throw IoError("truncated PGM payload: " + path.string());
    for (long r = 0; r < rows; ++r)
      for (long c = 0; c < cols; ++c) {
        const std::size_t o = 2 * (static_cast<std::size_t>(r) * cols + c);
        img.pixels(r, c) = 256.0 * buf[o] + buf[o + 1];  // big-endian
      }
  } else {
    std::vector<unsigned char> buf(static_cast<std::size_t>(rows) * cols);
    in.read(reinterpret_cast<char*>(buf.data()), buf.size());
    if (!in) throw IoError("truncated PGM payload: " + path.string());
    for (long r = 0; r < rows; ++r)
      for (long c = 0; c < cols; ++c)
        img.pixels(r, c) = buf[static_cast<std::size_t>(r) * cols + c];
  }
  return img;
}

void write_pgm(const fs::path& path, const Mat& values, int maxval) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << "P5\n" << values.cols() << " " << values.rows() << "\n"
        << maxval << "\n";
    for (Eigen::Index r = 0; r < values.rows(); ++r)
      for (Eigen::Index c = 0; c < values.cols(); ++c) {
        const long v = std::lround(
            std::clamp(values(r, c), 0.0, static_cast<double>(maxval)));
        if (maxval > 255) {
          out.put(static_cast<char>((v >> 8) & 0xff));
          out.put(static_cast<char>(v & 0xff));
        } else {
          out.put(static_cast<char>(v & 0xff));
        }
      }
    if (!out) throw IoError("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

// ---- PNG ----

GrayImage read_png(const fs::path& path) {
  FILE* fp = std::fopen(path.string().c_str(), "rb");
  if (!fp) throw IoError("cannot open " + path.string());
  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    if (fp) std::fclose(fp);
    throw IoError("libpng init failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(fp);
    throw IoError("failed to decode PNG: " + path.string());
  }
  png_init_io(png, fp);
  png_read_info(png, info);
  const png_uint_32 cols = png_get_image_width(png, info);
  const png_uint_32 rows = png_get_image_height(png, info);
  int depth = png_get_bit_depth(png, info);
  int color = png_get_color_type(png, info);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color & PNG_COLOR_MASK_COLOR) png_set_rgb_to_gray_fixed(png, 1, -1, -1);
  if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  if (depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  png_read_update_info(png, info);
  depth = png_get_bit_depth(png, info);

  GrayImage img;
  img.max_value = depth == 16 ? 65535 : 255;
  img.pixels.resize(rows, cols);
  const std::size_t rowbytes = png_get_rowbytes(png, info);
  std::vector<unsigned char> row(rowbytes);
  for (png_uint_32 r = 0; r < rows; ++r) {
    png_read_row(png, row.data(), nullptr);
    for (png_uint_32 c = 0; c < cols; ++c)
      img.pixels(r, c) = depth == 16
                             ? 256.0 * row[2 * c] + row[2 * c + 1]
                             : static_cast<double>(row[c]);
  }
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  std::fclose(fp);
  return img;
}

void write_png(const fs::path& path, const Mat& values, int maxval) {
  const fs::path tmp = path.string() + ".tmp";
  FILE* fp = std::fopen(tmp.string().c_str(), "wb");
  if (!fp) throw IoError("cannot write " + tmp.string());
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    std::fclose(fp);
    throw IoError("libpng init failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
    throw IoError("failed to encode PNG: " + path.string());
  }
  const int depth = maxval > 255 ? 16 : 8;
  png_init_io(png, fp);
  png_set_IHDR(png, info, static_cast<png_uint_32>(values.cols()),
               static_cast<png_uint_32>(values.rows()), depth,
               PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  std::vector<unsigned char> row(static_cast<std::size_t>(values.cols()) *
                                 (depth / 8));
  for (Eigen::Index r = 0; r < values.rows(); ++r) {
    for (Eigen::Index c = 0; c < values.cols(); ++c) {
      const long v = std::lround(
          std::clamp(values(r, c), 0.0, static_cast<double>(maxval)));
      if (depth == 16) {
        row[2 * c] = static_cast<unsigned char>((v >> 8) & 0xff);
        row[2 * c + 1] = static_cast<unsigned char>(v & 0xff);
      } else {
        row[c] = static_cast<unsigned char>(v & 0xff);
      }
    }
    png_write_row(png, row.data());
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  std::fclose(fp);
  fs::rename(tmp, path);
}

void put_u32le(std::ostream& out, std::uint32_t v) {
  char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
               static_cast<char>((v >> 16) & 0xff),
               static_cast<char>((v >> 24) & 0xff)};
  out.write(b, 4);
}

std::uint32_t get_u32le(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) |
         (static_cast<std::uint32_t>(b[3]) << 24);
}

}  // namespace

GrayImage read_gray_image(const fs::path& path) {
  const std::string ext = lower_ext(path);
  if (ext == ".pgm") return read_pgm(path);
  if (ext == ".png") return read_png(path);
  throw IoError("unsupported image format: " + path.string());
}

void write_gray8(const fs::path& path, const Mat& values) {
  const std::string ext = lower_ext(path);
  if (ext == ".pgm")
    write_pgm(path, values, 255);
  else if (ext == ".png")
    write_png(path, values, 255);
  else
    throw IoError("unsupported image format: " + path.string());
}

void write_gray16(const fs::path& path, const Mat& values) {
  const std::string ext = lower_ext(path);
  if (ext == ".pgm")
    write_pgm(path, values, 65535);
  else if (ext == ".png")
    write_png(path, values, 65535);
  else
    throw IoError("unsupported image format: " + path.string());
}

void write_raw_cube(const fs::path& path, const Cube& cube) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw IoError("cannot write " + tmp.string());
    out.write("SDD1", 4);
    put_u32le(out, static_cast<std::uint32_t>(cube.n1()));
    put_u32le(out, static_cast<std::uint32_t>(cube.n2()));
    put_u32le(out, static_cast<std::uint32_t>(cube.n3()));
    // frame-major, row-major within a frame
    for (int k = 0; k < cube.n3(); ++k)
      for (int i = 0; i < cube.n1(); ++i)
        for (int j = 0; j < cube.n2(); ++j) {
          const float f = static_cast<float>(cube(i, j, k));
          std::uint32_t bits;
          std::memcpy(&bits, &f, 4);
          put_u32le(out, bits);
        }
    if (!out) throw IoError("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

Cube read_raw_cube(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "SDD1", 4) != 0)
    throw IoError("bad magic in " + path.string());
  const std::uint32_t n1 = get_u32le(in), n2 = get_u32le(in), n3 = get_u32le(in);
  if (!in || n1 < 1 || n2 < 1 || n3 < 1)
    throw IoError("bad header in " + path.string());
  Cube cube(static_cast<int>(n1), static_cast<int>(n2), static_cast<int>(n3));
  for (std::uint32_t k = 0; k < n3; ++k)
    for (std::uint32_t i = 0; i < n1; ++i)
      for (std::uint32_t j = 0; j < n2; ++j) {
        const std::uint32_t bits = get_u32le(in);
        float f;
        std::memcpy(&f, &bits, 4);
        cube(static_cast<int>(i), static_cast<int>(j), static_cast<int>(k)) = f;
      }
  if (!in) throw IoError("truncated payload in " + path.string());
  return cube;
}

std::vector<Mat> load_sequence(const fs::path& path) {
  std::vector<Mat> frames;
  if (fs::is_directory(path)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(path)) {
      const std::string ext = lower_ext(entry.path());
      if (entry.is_regular_file() && (ext == ".pgm" || ext == ".png"))
        files.push_back(entry.path());
    }
    if (files.empty())
      throw IoError("no PGM/PNG frames in " + path.string());
    std::sort(files.begin(), files.end());
    Eigen::Index rows = -1, cols = -1;
    for (const auto& f : files) {
      GrayImage img = read_gray_image(f);
      if (rows < 0) {
        rows = img.pixels.rows();
        cols = img.pixels.cols();
      } else if (img.pixels.rows() != rows || img.pixels.cols() != cols) {
        throw IoError("frame size mismatch: " + f.string());
      }
      frames.push_back(img.pixels / static_cast<double>(img.max_value));
    }
  } else if (fs::is_regular_file(path)) {
    Cube cube = read_raw_cube(path);
    for (int k = 0; k < cube.n3(); ++k) frames.emplace_back(cube.slice(k));
  } else {
    throw IoError("no such input: " + path.string());
  }
  return frames;
}

void write_text_atomic(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << content;
    if (!out) throw IoError("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

}  // namespace sdd
