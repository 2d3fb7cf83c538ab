#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace kmcert {

/** Exit codes: 0 success, 2 input error, 3 fixed-B test failed to reject. */
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitNoRejection = 3;

/**
 * Run the command-line interface (subcommands: gen, cluster, baseline,
 * certify, seminorm-check, bench, theorem2) against the given argument
 * vector, writing reports to `out` and diagnostics to `err`.
 */
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kmcert
