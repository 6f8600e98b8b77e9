#pragma once

namespace calign::cli {

/// Entry point of the `calign` tool. Returns the process exit code:
/// 0 success, 2 usage error, 3 data error, 4 numeric failure.
int run(int argc, const char* const* argv);

} // namespace calign::cli
