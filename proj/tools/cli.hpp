#pragma once

namespace demontape::cli {

/// Full command-line front end. Returns the process exit code:
/// 0 success, 1 validation/runtime failure, 2 usage error.
int run(int argc, const char* const* argv);

}  // namespace demontape::cli
