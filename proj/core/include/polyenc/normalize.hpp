// Sugared input formulas (with negation, implication, equivalence, nested
// type quantifiers) and their normalization into the NNF core language with
// all type quantifiers hoisted to the top.

#ifndef POLYENC_NORMALIZE_HPP
#define POLYENC_NORMALIZE_HPP

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "polyenc/ast.hpp"

namespace polyenc {

struct UnsupportedInput : std::runtime_error {
  explicit UnsupportedInput(const std::string& what) : std::runtime_error(what) {}
};

enum class SugarKind {
  pred,
  eq,      // args[0] = args[1]; field positive distinguishes = and !=
  not_op,
  and_op,
  or_op,
  implies, // sub[0] => sub[1]
  iff,
  xor_op,
  forall,
  exists,
  forall_ty,
  exists_ty,
};

class Sugar;
using SugarPtr = std::shared_ptr<const Sugar>;

class Sugar {
public:
  static SugarPtr pred(std::string sym, std::vector<TypePtr> ty_args,
                       std::vector<TermPtr> args);
  static SugarPtr eq(bool positive, TermPtr lhs, TermPtr rhs);
  static SugarPtr negate(SugarPtr f);
  static SugarPtr binary(SugarKind kind, SugarPtr lhs, SugarPtr rhs);
  static SugarPtr quant(SugarKind kind, std::string var, TypePtr ty, SugarPtr body);
  static SugarPtr ty_quant(SugarKind kind, std::string ty_var, SugarPtr body);

  SugarKind kind;
  bool positive = true;
  std::string sym;
  TypePtr var_ty;
  std::vector<TypePtr> ty_args;
  std::vector<TermPtr> args;
  std::vector<SugarPtr> sub;
};

// NNF + hoisted type quantifiers + variables renamed apart with kinds
// assigned from their binding quantifier. Throws UnsupportedInput on
// existential type quantification (including one arising from negation) and
// on type quantifiers inside an existential term quantifier's scope.
FormulaPtr normalize(const SugarPtr& f);

// Convenience for tests and the conjecture handling in the parser.
FormulaPtr normalize_negated(const SugarPtr& f);

} // namespace polyenc

#endif
