#include "polyenc/terms.hpp"

#include "polyenc/typing.hpp"

namespace polyenc {

TermPtr subst_term(const TermPtr& t, const TermSubst& sub) {
  if (t->is_var()) {
    auto it = sub.find(t->name());
    if (it == sub.end()) return t;
    // Triangular substitutions: follow bindings through.
    return subst_term(it->second, sub);
  }
  if (t->args().empty()) return t;
  std::vector<TermPtr> args;
  args.reserve(t->args().size());
  for (const auto& a : t->args()) args.push_back(subst_term(a, sub));
  std::vector<TypePtr> tys = t->ty_args();
  return Term::app(t->name(), std::move(tys), std::move(args));
}

namespace {

TermPtr walk(TermPtr t, const TermSubst& sub) {
  while (t->is_var()) {
    auto it = sub.find(t->name());
    if (it == sub.end()) return t;
    t = it->second;
  }
  return t;
}

} // namespace

bool occurs_in(const std::string& var, const TermPtr& t, const TermSubst& sub) {
  TermPtr u = walk(t, sub);
  if (u->is_var()) return u->name() == var;
  for (const auto& a : u->args())
    if (occurs_in(var, a, sub)) return true;
  return false;
}

bool unify_terms(const Signature& sig, const TermPtr& a, const TermPtr& b, TermSubst& sub) {
  TermPtr x = walk(a, sub);
  TermPtr y = walk(b, sub);
  if (x->is_var() && y->is_var() && x->name() == y->name()) return true;
  if (x->is_var() || y->is_var()) {
    if (!x->is_var()) std::swap(x, y);
    TypePtr y_type = y->is_var() ? y->var_type() : term_type(sig, y);
    if (!equal(x->var_type(), y_type)) return false;
    if (occurs_in(x->name(), y, sub)) return false;
    sub.emplace(x->name(), y);
    return true;
  }
  if (x->name() != y->name() || x->args().size() != y->args().size()) return false;
  if (x->ty_args().size() != y->ty_args().size()) return false;
  for (std::size_t i = 0; i < x->ty_args().size(); ++i)
    if (!equal(x->ty_args()[i], y->ty_args()[i])) return false;
  for (std::size_t i = 0; i < x->args().size(); ++i)
    if (!unify_terms(sig, x->args()[i], y->args()[i], sub)) return false;
  return true;
}

TermPtr rename_term_vars(const TermPtr& t, const std::string& suffix) {
  if (t->is_var()) return Term::var(t->name() + suffix, t->var_type(), t->kind());
  if (t->args().empty()) return t;
  std::vector<TermPtr> args;
  args.reserve(t->args().size());
  for (const auto& a : t->args()) args.push_back(rename_term_vars(a, suffix));
  std::vector<TypePtr> tys = t->ty_args();
  return Term::app(t->name(), std::move(tys), std::move(args));
}

std::size_t term_size(const TermPtr& t) {
  if (t->is_var()) return 1;
  std::size_t n = 1;
  for (const auto& a : t->args()) n += term_size(a);
  return n;
}

} // namespace polyenc
