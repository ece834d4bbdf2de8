// Bridge to an external FOF prover: writes the printed problem to a
// temporary file, runs the executable named by POLYENC_PROVER (or an
// explicit path), and parses the SZS status line.

#ifndef POLYENC_PROVER_HPP
#define POLYENC_PROVER_HPP

#include <optional>
#include <string>

#include "polyenc/ast.hpp"

namespace polyenc {

enum class SzsStatus { theorem, unsatisfiable, satisfiable, counter_satisfiable, timeout, unknown };

std::string szs_name(SzsStatus s);

struct ExternalProverResult {
  SzsStatus status = SzsStatus::unknown;
  int exit_code = 0;
  std::string output;
};

// Returns nothing when no prover is configured (POLYENC_PROVER unset and no
// explicit path given). Throws std::runtime_error when the prover cannot be
// spawned.
std::optional<ExternalProverResult> run_external_prover(const Problem& p,
                                                        const std::string& executable = "");

} // namespace polyenc

#endif
