#include "polyenc/unify.hpp"

namespace polyenc {

namespace {

bool occurs(const std::string& var, const TypePtr& ty) {
  if (ty->is_var()) return ty->name() == var;
  for (const auto& a : ty->args())
    if (occurs(var, a)) return true;
  return false;
}

bool match_rec(const TypePtr& pattern, const TypePtr& target, TypeSubst& rho) {
  if (pattern->is_var()) {
    auto it = rho.find(pattern->name());
    if (it != rho.end()) return equal(it->second, target);
    rho.emplace(pattern->name(), target);
    return true;
  }
  if (target->is_var()) return false;
  if (pattern->name() != target->name() ||
      pattern->args().size() != target->args().size())
    return false;
  for (std::size_t i = 0; i < pattern->args().size(); ++i)
    if (!match_rec(pattern->args()[i], target->args()[i], rho)) return false;
  return true;
}

bool unify_rec(TypePtr a, TypePtr b, TypeSubst& mgu) {
  a = apply_type_subst(a, mgu);
  b = apply_type_subst(b, mgu);
  if (a->is_var()) {
    if (b->is_var() && b->name() == a->name()) return true;
    if (occurs(a->name(), b)) return false;
    // Apply the new binding to the accumulated substitution.
    TypeSubst step{{a->name(), b}};
    for (auto& [v, t] : mgu) t = apply_type_subst(t, step);
    mgu.emplace(a->name(), b);
    return true;
  }
  if (b->is_var()) return unify_rec(b, a, mgu);
  if (a->name() != b->name() || a->args().size() != b->args().size()) return false;
  for (std::size_t i = 0; i < a->args().size(); ++i)
    if (!unify_rec(a->args()[i], b->args()[i], mgu)) return false;
  return true;
}

} // namespace

std::optional<TypeSubst> match_type(const TypePtr& pattern, const TypePtr& target) {
  TypeSubst rho;
  if (!match_rec(pattern, target, rho)) return std::nullopt;
  return rho;
}

std::optional<TypeSubst> unify_types(const TypePtr& a, const TypePtr& b) {
  TypeSubst mgu;
  if (!unify_rec(a, b, mgu)) return std::nullopt;
  return mgu;
}

TypePtr rename_vars_apart(const TypePtr& ty, const std::string& prefix) {
  if (ty->is_var()) return Type::var(prefix + ty->name());
  std::vector<TypePtr> args;
  args.reserve(ty->args().size());
  for (const auto& a : ty->args()) args.push_back(rename_vars_apart(a, prefix));
  return Type::app(ty->name(), std::move(args));
}

std::optional<TypePtr> mgi(const TypePtr& sigma, const TypePtr& tau) {
  TypePtr s = rename_vars_apart(sigma, "l#");
  TypePtr t = rename_vars_apart(tau, "r#");
  auto mgu = unify_types(s, t);
  if (!mgu) return std::nullopt;
  return apply_type_subst(s, *mgu);
}

bool is_instance_of(const TypePtr& tau, const TypePtr& sigma) {
  return match_type(sigma, tau).has_value();
}

bool have_common_instance(const TypePtr& a, const TypePtr& b) {
  return mgi(a, b).has_value();
}

} // namespace polyenc
