// Heuristic monomorphisation: bounded instantiation of type variables driven
// by the monomorphic symbol instances already present, followed by symbol
// mangling into a monomorphic signature.

#ifndef POLYENC_MONOMORPH_HPP
#define POLYENC_MONOMORPH_HPP

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "polyenc/ast.hpp"

namespace polyenc {

struct MonoConfig {
  std::size_t iterations = 3; // K
  std::size_t budget = 200;   // Delta
};

struct MonoResult {
  Problem problem; // monomorphic, mangled
  std::vector<std::string> dropped;       // sentences that stayed polymorphic
  std::map<std::string, std::string> type_map;   // ground type -> nullary ctor
  std::map<std::string, std::string> symbol_map; // "sym<tys>" -> mangled symbol
  std::size_t rounds_used = 0;
  std::size_t new_formulas = 0; // kept beyond the initially monomorphic ones
};

MonoResult monomorphise(const Problem& p, const MonoConfig& cfg = {});

// The mangling half alone: every sentence must already be free of type
// variables. Throws InternalError on a residual type variable.
MonoResult mangle_ground(const Problem& p);

} // namespace polyenc

#endif
