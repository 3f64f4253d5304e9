#pragma once

// `gherkin-hdl generate|run|emit-tb|validate`.
//
// Exit codes: 0 success, 1 verification failure, 2 usage, I/O, parse,
// compile or provider error.

#include <ostream>
#include <string>
#include <vector>

namespace hwbdd::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitError = 2;

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Convenience overload; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hwbdd::cli
