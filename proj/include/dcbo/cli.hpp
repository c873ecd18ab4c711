#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace dcbo {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitRuntimeError = 2;

/// Entry point of dcbo_cli. args[0] is the program name. Results go to
/// files named by --output or to `out`; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "0.5,1,0.4,0.7" -> {0.5, 1, 0.4, 0.7}. Throws ConfigError on bad numbers.
std::vector<double> parse_number_list(const std::string& text);

}  // namespace dcbo
