// First-order unification and matching on types (rank 1: types are plain
// first-order terms over constructors and variables).

#ifndef POLYENC_UNIFY_HPP
#define POLYENC_UNIFY_HPP

#include <optional>

#include "polyenc/ast.hpp"

namespace polyenc {

// One-sided: substitution rho with pattern.rho == target, if any. Variables
// of the target are rigid.
std::optional<TypeSubst> match_type(const TypePtr& pattern, const TypePtr& target);

// Most general unifier of two types sharing a variable namespace.
std::optional<TypeSubst> unify_types(const TypePtr& a, const TypePtr& b);

// Most general common instance. The two sides are renamed apart internally,
// so callers may pass types that happen to share variable names. Returns
// nothing when no common instance exists.
std::optional<TypePtr> mgi(const TypePtr& sigma, const TypePtr& tau);

// tau <= sigma: tau is an instance of sigma.
bool is_instance_of(const TypePtr& tau, const TypePtr& sigma);

// Whether two types (with namespaces considered disjoint) share an instance.
bool have_common_instance(const TypePtr& a, const TypePtr& b);

// Renames every variable of ty with the given prefix (injectively).
TypePtr rename_vars_apart(const TypePtr& ty, const std::string& prefix);

} // namespace polyenc

#endif
