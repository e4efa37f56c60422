#pragma once

#include <ostream>

namespace kqmolsa {

/// Exit codes: 0 success, 1 fatal, 2 partial (some molecules rejected or
/// some screening rows skipped).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace kqmolsa
