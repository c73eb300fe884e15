#pragma once

namespace cmod {

// Full command-line front end. Returns the process exit code:
// 0 success, 2 usage error, 3 runtime error.
int run_cli(int argc, char** argv);

}  // namespace cmod
