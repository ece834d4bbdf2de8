// Variable analyses the encodings depend on: naked variables (the source of
// nonmonotonicity), undercover variables (cover-based protection), and the
// term encoding of types.

#ifndef POLYENC_VARS_HPP
#define POLYENC_VARS_HPP

#include <map>
#include <set>

#include "polyenc/ast.hpp"

namespace polyenc {

struct TypedVar {
  std::string name;
  TypePtr ty;
};

struct TypedVarLess {
  bool operator()(const TypedVar& a, const TypedVar& b) const {
    if (a.name != b.name) return a.name < b.name;
    return a.ty->str() < b.ty->str();
  }
};
using TypedVarSet = std::set<TypedVar, TypedVarLess>;

// Symbol -> set of 1-based term-argument indices. Cover(=) is fixed to {1,2}
// and never stored.
using CoverAssignment = std::map<std::string, std::set<std::size_t>>;

// Universal variables appearing as a whole side of a positive equality.
TypedVarSet naked_vars(const FormulaPtr& f);
TypedVarSet naked_vars(const Problem& p);

// Variables occurring at a cover position of their enclosing symbol or as a
// side of an equality literal, minus existentially rebound ones.
TypedVarSet undercover_vars(const FormulaPtr& f, const CoverAssignment& covers);

// Term encoding of a type over the theta signature: constructor applications
// become function applications, type variables become reserved universal
// term variables of type theta. ctor_syms maps constructor names to the
// function-symbol names minted for them (empty entries default to the
// constructor's own name).
TermPtr type_to_term(const TypePtr& ty,
                     const std::map<std::string, std::string>& ctor_syms = {});

// The reserved term variable standing for a type variable.
std::string type_var_term_name(const std::string& ty_var);

TypePtr theta_type();

} // namespace polyenc

#endif
