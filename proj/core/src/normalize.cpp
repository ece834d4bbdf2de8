#include "polyenc/normalize.hpp"

#include <map>
#include <set>

namespace polyenc {

SugarPtr Sugar::pred(std::string sym, std::vector<TypePtr> ty_args,
                     std::vector<TermPtr> args) {
  auto s = std::make_shared<Sugar>();
  s->kind = SugarKind::pred;
  s->sym = std::move(sym);
  s->ty_args = std::move(ty_args);
  s->args = std::move(args);
  return s;
}

SugarPtr Sugar::eq(bool positive, TermPtr lhs, TermPtr rhs) {
  auto s = std::make_shared<Sugar>();
  s->kind = SugarKind::eq;
  s->positive = positive;
  s->args = {std::move(lhs), std::move(rhs)};
  return s;
}

SugarPtr Sugar::negate(SugarPtr f) {
  auto s = std::make_shared<Sugar>();
  s->kind = SugarKind::not_op;
  s->sub = {std::move(f)};
  return s;
}

SugarPtr Sugar::binary(SugarKind kind, SugarPtr lhs, SugarPtr rhs) {
  auto s = std::make_shared<Sugar>();
  s->kind = kind;
  s->sub = {std::move(lhs), std::move(rhs)};
  return s;
}

SugarPtr Sugar::quant(SugarKind kind, std::string var, TypePtr ty, SugarPtr body) {
  auto s = std::make_shared<Sugar>();
  s->kind = kind;
  s->sym = std::move(var);
  s->var_ty = std::move(ty);
  s->sub = {std::move(body)};
  return s;
}

SugarPtr Sugar::ty_quant(SugarKind kind, std::string ty_var, SugarPtr body) {
  auto s = std::make_shared<Sugar>();
  s->kind = kind;
  s->sym = std::move(ty_var);
  s->sub = {std::move(body)};
  return s;
}

namespace {

// Negation normal form. `pos` is the polarity of the node.
FormulaPtr nnf(const SugarPtr& f, bool pos) {
  switch (f->kind) {
    case SugarKind::pred: {
      auto tys = f->ty_args;
      auto args = f->args;
      return Formula::pred_lit(pos, f->sym, std::move(tys), std::move(args));
    }
    case SugarKind::eq:
      return Formula::eq_lit(pos == f->positive, f->args[0], f->args[1]);
    case SugarKind::not_op:
      return nnf(f->sub[0], !pos);
    case SugarKind::and_op:
      return pos ? Formula::conj(nnf(f->sub[0], true), nnf(f->sub[1], true))
                 : Formula::disj(nnf(f->sub[0], false), nnf(f->sub[1], false));
    case SugarKind::or_op:
      return pos ? Formula::disj(nnf(f->sub[0], true), nnf(f->sub[1], true))
                 : Formula::conj(nnf(f->sub[0], false), nnf(f->sub[1], false));
    case SugarKind::implies:
      return pos ? Formula::disj(nnf(f->sub[0], false), nnf(f->sub[1], true))
                 : Formula::conj(nnf(f->sub[0], true), nnf(f->sub[1], false));
    case SugarKind::iff:
      // (a -> b) & (b -> a); negation: (a | b) & (~a | ~b).
      return pos ? Formula::conj(Formula::disj(nnf(f->sub[0], false), nnf(f->sub[1], true)),
                                 Formula::disj(nnf(f->sub[1], false), nnf(f->sub[0], true)))
                 : Formula::conj(Formula::disj(nnf(f->sub[0], true), nnf(f->sub[1], true)),
                                 Formula::disj(nnf(f->sub[0], false), nnf(f->sub[1], false)));
    case SugarKind::xor_op:
      return nnf(Sugar::binary(SugarKind::iff, f->sub[0], f->sub[1]), !pos);
    case SugarKind::forall:
      return pos ? Formula::forall(f->sym, f->var_ty, nnf(f->sub[0], true))
                 : Formula::exists(f->sym, f->var_ty, nnf(f->sub[0], false));
    case SugarKind::exists:
      return pos ? Formula::exists(f->sym, f->var_ty, nnf(f->sub[0], true))
                 : Formula::forall(f->sym, f->var_ty, nnf(f->sub[0], false));
    case SugarKind::forall_ty:
      if (!pos)
        throw UnsupportedInput("negated type quantifier amounts to existential type "
                               "quantification, which is not supported");
      return Formula::forall_ty(f->sym, nnf(f->sub[0], true));
    case SugarKind::exists_ty:
      if (pos) throw UnsupportedInput("existential type quantification is not supported");
      return Formula::forall_ty(f->sym, nnf(f->sub[0], false));
  }
  throw InternalError("nnf: unreachable");
}

// Renames term and type variables apart, assigns variable kinds from the
// binding quantifier, and stamps the binder's type on every occurrence.
struct Renamer {
  std::set<std::string> used_vars;
  std::set<std::string> used_ty_vars;
  std::map<std::string, std::string> ty_env;
  struct Binding {
    std::string fresh;
    TypePtr ty;
    VarKind kind;
  };
  std::map<std::string, Binding> var_env;

  std::string fresh_name(const std::string& base, std::set<std::string>& used) {
    std::string name = base;
    int i = 0;
    while (!used.insert(name).second) name = base + "_" + std::to_string(++i);
    return name;
  }

  TypePtr rename_type(const TypePtr& ty) {
    if (ty->is_var()) {
      auto it = ty_env.find(ty->name());
      return it == ty_env.end() ? ty : Type::var(it->second);
    }
    if (ty->args().empty()) return ty;
    std::vector<TypePtr> args;
    args.reserve(ty->args().size());
    for (const auto& a : ty->args()) args.push_back(rename_type(a));
    return Type::app(ty->name(), std::move(args));
  }

  TermPtr rename_term(const TermPtr& t) {
    if (t->is_var()) {
      auto it = var_env.find(t->name());
      if (it == var_env.end())
        // Free variable; keep it (well-typedness checks flag it later).
        return Term::var(t->name(), rename_type(t->var_type()), t->kind());
      return Term::var(it->second.fresh, it->second.ty, it->second.kind);
    }
    std::vector<TypePtr> tys;
    tys.reserve(t->ty_args().size());
    for (const auto& ty : t->ty_args()) tys.push_back(rename_type(ty));
    std::vector<TermPtr> args;
    args.reserve(t->args().size());
    for (const auto& a : t->args()) args.push_back(rename_term(a));
    return Term::app(t->name(), std::move(tys), std::move(args));
  }

  FormulaPtr rename(const FormulaPtr& f) {
    switch (f->kind()) {
      case FormulaKind::pred_lit: {
        std::vector<TypePtr> tys;
        tys.reserve(f->ty_args().size());
        for (const auto& ty : f->ty_args()) tys.push_back(rename_type(ty));
        std::vector<TermPtr> args;
        args.reserve(f->args().size());
        for (const auto& a : f->args()) args.push_back(rename_term(a));
        return Formula::pred_lit(f->positive(), f->sym(), std::move(tys), std::move(args));
      }
      case FormulaKind::eq_lit:
        return Formula::eq_lit(f->positive(), rename_term(f->lhs_term()),
                               rename_term(f->rhs_term()));
      case FormulaKind::conj:
        return Formula::conj(rename(f->lhs()), rename(f->rhs()));
      case FormulaKind::disj:
        return Formula::disj(rename(f->lhs()), rename(f->rhs()));
      case FormulaKind::forall_term:
      case FormulaKind::exists_term: {
        VarKind kind = f->kind() == FormulaKind::forall_term ? VarKind::universal
                                                             : VarKind::existential;
        std::string fresh = fresh_name(f->var(), used_vars);
        TypePtr ty = rename_type(f->var_type());
        auto saved = var_env.find(f->var()) != var_env.end()
                         ? std::optional(var_env.at(f->var()))
                         : std::nullopt;
        var_env[f->var()] = {fresh, ty, kind};
        FormulaPtr body = rename(f->body());
        if (saved)
          var_env[f->var()] = *saved;
        else
          var_env.erase(f->var());
        return kind == VarKind::universal ? Formula::forall(fresh, ty, body)
                                          : Formula::exists(fresh, ty, body);
      }
      case FormulaKind::forall_type: {
        std::string fresh = fresh_name(f->var(), used_ty_vars);
        auto saved = ty_env.find(f->var()) != ty_env.end()
                         ? std::optional(ty_env.at(f->var()))
                         : std::nullopt;
        ty_env[f->var()] = fresh;
        FormulaPtr body = rename(f->body());
        if (saved)
          ty_env[f->var()] = *saved;
        else
          ty_env.erase(f->var());
        return Formula::forall_ty(fresh, body);
      }
    }
    throw InternalError("rename: unreachable");
  }
};

// Pulls every type quantifier to the front. Sound across conjunction,
// disjunction, and universal term quantifiers because binders are unique;
// crossing an existential term quantifier would weaken the formula.
FormulaPtr hoist(const FormulaPtr& f, bool in_exists, std::vector<std::string>& prefix) {
  switch (f->kind()) {
    case FormulaKind::pred_lit:
    case FormulaKind::eq_lit:
      return f;
    case FormulaKind::conj: {
      FormulaPtr l = hoist(f->lhs(), in_exists, prefix);
      FormulaPtr r = hoist(f->rhs(), in_exists, prefix);
      return Formula::conj(l, r);
    }
    case FormulaKind::disj: {
      FormulaPtr l = hoist(f->lhs(), in_exists, prefix);
      FormulaPtr r = hoist(f->rhs(), in_exists, prefix);
      return Formula::disj(l, r);
    }
    case FormulaKind::forall_term:
      return Formula::forall(f->var(), f->var_type(), hoist(f->body(), in_exists, prefix));
    case FormulaKind::exists_term:
      return Formula::exists(f->var(), f->var_type(), hoist(f->body(), true, prefix));
    case FormulaKind::forall_type: {
      if (in_exists)
        throw UnsupportedInput(
            "type quantifier in the scope of an existential term quantifier");
      prefix.push_back(f->var());
      return hoist(f->body(), in_exists, prefix);
    }
  }
  throw InternalError("hoist: unreachable");
}

} // namespace

FormulaPtr normalize(const SugarPtr& f) {
  FormulaPtr g = nnf(f, true);
  Renamer renamer;
  g = renamer.rename(g);
  std::vector<std::string> prefix;
  g = hoist(g, false, prefix);
  for (auto it = prefix.rbegin(); it != prefix.rend(); ++it)
    g = Formula::forall_ty(*it, g);
  return g;
}

FormulaPtr normalize_negated(const SugarPtr& f) { return normalize(Sugar::negate(f)); }

} // namespace polyenc
