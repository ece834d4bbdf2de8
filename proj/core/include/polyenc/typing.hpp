// Typing rules: well-typedness checks for problems at any logic level.

#ifndef POLYENC_TYPING_HPP
#define POLYENC_TYPING_HPP

#include <string>
#include <vector>

#include "polyenc/ast.hpp"

namespace polyenc {

struct TypeError {
  std::string formula; // name of the offending sentence ("" for signature errors)
  std::string where;   // printed subterm or subformula
  std::string message;
};

// Empty result means every sentence derives phi : o under the typing rules
// and the signature is internally consistent for its level.
std::vector<TypeError> check_well_typed(const Problem& p);

// Type of a well-typed term under sig: the declared result type with the
// symbol's type variables instantiated by the application's type arguments.
// Throws InternalError on ill-typed input; use check_well_typed first.
TypePtr term_type(const Signature& sig, const TermPtr& t);

} // namespace polyenc

#endif
