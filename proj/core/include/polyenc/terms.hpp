// Term-level substitution and first-order unification. Unification is
// sort-respecting: a variable only binds terms of its own type, which the
// signature decides for applications. Untyped problems use the single sort,
// where the discipline is vacuous.

#ifndef POLYENC_TERMS_HPP
#define POLYENC_TERMS_HPP

#include <map>
#include <optional>
#include <string>

#include "polyenc/ast.hpp"

namespace polyenc {

using TermSubst = std::map<std::string, TermPtr>;

TermPtr subst_term(const TermPtr& t, const TermSubst& sub);

// Idempotent-by-walking most general unifier; extends `sub` on success and
// may leave partial bindings behind on failure (callers pass a copy).
bool unify_terms(const Signature& sig, const TermPtr& a, const TermPtr& b, TermSubst& sub);

bool occurs_in(const std::string& var, const TermPtr& t, const TermSubst& sub);

// Renames every variable with the given suffix (for clause renaming apart).
TermPtr rename_term_vars(const TermPtr& t, const std::string& suffix);

std::size_t term_size(const TermPtr& t); // symbol occurrences incl. variables

} // namespace polyenc

#endif
