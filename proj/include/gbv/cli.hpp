#pragma once

namespace gbv::cli {

// Full command-line entry point. Exit codes: 0 success, 1 data/validation
// failure, 2 usage error.
int run(int argc, const char* const* argv);

} // namespace gbv::cli
