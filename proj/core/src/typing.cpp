#include "polyenc/typing.hpp"

namespace polyenc {

namespace {

struct Checker {
  const Problem& problem;
  std::vector<TypeError> errors = {};
  std::string current = {};

  void err(const std::string& where, const std::string& message) {
    errors.push_back({current, where, message});
  }

  void check_type(const TypePtr& ty) {
    if (ty->is_var()) {
      if (problem.sig.level != Level::polymorphic)
        err(ty->str(), "type variable in a non-polymorphic problem");
      return;
    }
    auto it = problem.sig.type_ctors.find(ty->name());
    if (it == problem.sig.type_ctors.end()) {
      err(ty->str(), "unknown type constructor '" + ty->name() + "'");
    } else if (it->second != ty->args().size()) {
      err(ty->str(), "type constructor '" + ty->name() + "' expects " +
                         std::to_string(it->second) + " arguments, got " +
                         std::to_string(ty->args().size()));
    }
    for (const auto& a : ty->args()) check_type(a);
  }

  // Environment: bound term variables to (type, kind).
  using Env = std::map<std::string, std::pair<TypePtr, VarKind>>;

  TypePtr check_term(const TermPtr& t, const Env& env) {
    if (t->is_var()) {
      auto it = env.find(t->name());
      if (it == env.end()) {
        err(t->str(), "free term variable '" + t->name() + "'");
        return t->var_type();
      }
      if (!equal(it->second.first, t->var_type()))
        err(t->str(), "variable occurrence typed " + t->var_type()->str() +
                          " but bound at " + it->second.first->str());
      if (it->second.second != t->kind())
        err(t->str(), "variable kind disagrees with its binder");
      return it->second.first;
    }
    auto fit = problem.sig.funs.find(t->name());
    if (fit == problem.sig.funs.end()) {
      if (problem.sig.preds.count(t->name()))
        err(t->str(), "predicate symbol '" + t->name() + "' used as a function");
      else
        err(t->str(), "unknown symbol '" + t->name() + "'");
      return untyped_sort();
    }
    const FunSig& sig = fit->second;
    return check_application(t->str(), t->name(), sig.ty_vars, sig.arg_types,
                             sig.result, t->ty_args(), t->args(), env);
  }

  TypePtr check_application(const std::string& where, const std::string& sym,
                            const std::vector<std::string>& ty_vars,
                            const std::vector<TypePtr>& arg_types, const TypePtr& result,
                            const std::vector<TypePtr>& ty_args,
                            const std::vector<TermPtr>& args, const Env& env) {
    if (ty_args.size() != ty_vars.size())
      err(where, "'" + sym + "' expects " + std::to_string(ty_vars.size()) +
                     " type arguments, got " + std::to_string(ty_args.size()));
    if (args.size() != arg_types.size())
      err(where, "arity mismatch: '" + sym + "' expects " +
                     std::to_string(arg_types.size()) + " arguments, got " +
                     std::to_string(args.size()));
    for (const auto& ty : ty_args) check_type(ty);
    TypeSubst rho;
    for (std::size_t i = 0; i < ty_vars.size() && i < ty_args.size(); ++i)
      rho.emplace(ty_vars[i], ty_args[i]);
    for (std::size_t i = 0; i < args.size() && i < arg_types.size(); ++i) {
      TypePtr actual = check_term(args[i], env);
      TypePtr expected = apply_type_subst(arg_types[i], rho);
      if (!equal(actual, expected))
        err(args[i]->str(), "argument " + std::to_string(i + 1) + " of '" + sym +
                                "' has type " + actual->str() + ", expected " +
                                expected->str());
    }
    return result ? apply_type_subst(result, rho) : nullptr;
  }

  void check_formula(const FormulaPtr& f, Env& env, std::set<std::string>& bound_tys,
                     std::set<std::string>& seen_vars, bool top) {
    switch (f->kind()) {
      case FormulaKind::pred_lit: {
        auto pit = problem.sig.preds.find(f->sym());
        if (pit == problem.sig.preds.end()) {
          if (problem.sig.funs.count(f->sym()))
            err(f->str(), "function symbol '" + f->sym() + "' used as a predicate");
          else
            err(f->str(), "unknown symbol '" + f->sym() + "'");
          return;
        }
        check_application(f->str(), f->sym(), pit->second.ty_vars,
                          pit->second.arg_types, nullptr, f->ty_args(), f->args(), env);
        return;
      }
      case FormulaKind::eq_lit: {
        TypePtr a = check_term(f->lhs_term(), env);
        TypePtr b = check_term(f->rhs_term(), env);
        if (!equal(a, b))
          err(f->str(), "equality sides differ: " + a->str() + " vs " + b->str());
        return;
      }
      case FormulaKind::conj:
      case FormulaKind::disj:
        check_formula(f->lhs(), env, bound_tys, seen_vars, false);
        check_formula(f->rhs(), env, bound_tys, seen_vars, false);
        return;
      case FormulaKind::forall_term:
      case FormulaKind::exists_term: {
        check_type(f->var_type());
        // Types mentioned in binders must be closed by the type prefix.
        for (const auto& tv : type_vars(f->var_type()))
          if (!bound_tys.count(tv))
            err(f->str(), "free type variable '" + tv + "' in binder type");
        if (!seen_vars.insert(f->var()).second)
          err(f->str(), "variable '" + f->var() + "' bound more than once");
        VarKind kind = f->kind() == FormulaKind::forall_term ? VarKind::universal
                                                             : VarKind::existential;
        auto saved = env.find(f->var()) != env.end()
                         ? std::optional(env.at(f->var()))
                         : std::nullopt;
        env[f->var()] = {f->var_type(), kind};
        check_formula(f->body(), env, bound_tys, seen_vars, false);
        if (saved)
          env[f->var()] = *saved;
        else
          env.erase(f->var());
        return;
      }
      case FormulaKind::forall_type: {
        if (problem.sig.level != Level::polymorphic)
          err(f->str(), "type quantifier in a non-polymorphic problem");
        if (!top) err(f->str(), "type quantifier below a connective or term quantifier");
        if (!bound_tys.insert(f->var()).second)
          err(f->str(), "type variable '" + f->var() + "' bound more than once");
        check_formula(f->body(), env, bound_tys, seen_vars, top);
        bound_tys.erase(f->var());
        return;
      }
    }
  }

  void check_signature() {
    current.clear();
    for (const auto& [name, fs] : problem.sig.funs) {
      if (problem.sig.preds.count(name))
        err(name, "symbol is both a function and a predicate");
      check_symbol_sig(name, fs.ty_vars, fs.arg_types, fs.result);
    }
    for (const auto& [name, ps] : problem.sig.preds)
      check_symbol_sig(name, ps.ty_vars, ps.arg_types, nullptr);
    if (problem.sig.level != Level::polymorphic) {
      for (const auto& [name, arity] : problem.sig.type_ctors)
        if (arity != 0) err(name, "non-nullary type constructor in a monomorphic signature");
    }
  }

  void check_symbol_sig(const std::string& name, const std::vector<std::string>& ty_vars,
                        const std::vector<TypePtr>& arg_types, const TypePtr& result) {
    if (problem.sig.level != Level::polymorphic && !ty_vars.empty())
      err(name, "type variables in a non-polymorphic declaration");
    std::set<std::string> declared(ty_vars.begin(), ty_vars.end());
    if (declared.size() != ty_vars.size()) err(name, "duplicate type variable in declaration");
    auto check_sig_type = [&](const TypePtr& ty) {
      check_type(ty);
      for (const auto& v : type_vars(ty))
        if (!declared.count(v))
          err(name, "type variable '" + v + "' not among the declared binders");
    };
    for (const auto& ty : arg_types) check_sig_type(ty);
    if (result) check_sig_type(result);
  }

  void run() {
    check_signature();
    for (const auto& nf : problem.sentences) {
      current = nf.name;
      Env env;
      std::set<std::string> bound_tys, seen_vars;
      check_formula(nf.formula, env, bound_tys, seen_vars, true);
      for (const auto& [v, ty] : free_term_vars(nf.formula))
        err(v, "sentence has free term variable '" + v + "'");
      for (const auto& tv : free_type_vars(nf.formula))
        err(tv, "sentence has free type variable '" + tv + "'");
    }
  }
};

} // namespace

std::vector<TypeError> check_well_typed(const Problem& p) {
  Checker c{p};
  c.run();
  return c.errors;
}

TypePtr term_type(const Signature& sig, const TermPtr& t) {
  if (t->is_var()) return t->var_type();
  auto it = sig.funs.find(t->name());
  if (it == sig.funs.end())
    throw InternalError("term_type: unknown function symbol " + t->name());
  const FunSig& fs = it->second;
  if (fs.ty_vars.size() != t->ty_args().size())
    throw InternalError("term_type: type argument count mismatch for " + t->name());
  TypeSubst rho;
  for (std::size_t i = 0; i < fs.ty_vars.size(); ++i)
    rho.emplace(fs.ty_vars[i], t->ty_args()[i]);
  return apply_type_subst(fs.result, rho);
}

} // namespace polyenc
