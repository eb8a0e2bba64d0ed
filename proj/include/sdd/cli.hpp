#pragma once

namespace sdd::cli {

/// Batch tool entry point. Exit codes: 0 success, 1 I/O or runtime error,
/// 2 configuration/usage error, 3 solver failure.
int run(int argc, const char* const* argv);

}  // namespace sdd::cli
