#include "polyenc/monomorph.hpp"

#include <algorithm>
#include <set>

#include "polyenc/analysis.hpp"
#include "polyenc/encode.hpp"
#include "polyenc/unify.hpp"

namespace polyenc {

namespace {

struct SymbolInstance {
  std::string sym;
  std::vector<TypePtr> ty_args;

  std::string key() const {
    std::string out = sym + "<";
    for (std::size_t i = 0; i < ty_args.size(); ++i) {
      if (i) out += ",";
      out += ty_args[i]->str();
    }
    return out + ">";
  }
};

void collect_instances(const TermPtr& t, std::vector<SymbolInstance>& out) {
  if (t->is_var()) return;
  if (!t->ty_args().empty()) out.push_back({t->name(), t->ty_args()});
  for (const auto& a : t->args()) collect_instances(a, out);
}

void collect_instances(const FormulaPtr& f, std::vector<SymbolInstance>& out) {
  switch (f->kind()) {
    case FormulaKind::pred_lit:
      if (!f->ty_args().empty()) out.push_back({f->sym(), f->ty_args()});
      for (const auto& a : f->args()) collect_instances(a, out);
      return;
    case FormulaKind::eq_lit:
      for (const auto& a : f->args()) collect_instances(a, out);
      return;
    case FormulaKind::conj:
    case FormulaKind::disj:
      collect_instances(f->lhs(), out);
      collect_instances(f->rhs(), out);
      return;
    case FormulaKind::forall_term:
    case FormulaKind::exists_term:
    case FormulaKind::forall_type:
      collect_instances(f->body(), out);
      return;
  }
}

void collect_ground_types(const TypePtr& ty, std::map<std::string, TypePtr>& out) {
  if (ty->ground()) out.emplace(ty->str(), ty);
  for (const auto& a : ty->args()) collect_ground_types(a, out);
}

bool all_ground(const std::vector<TypePtr>& tys) {
  for (const auto& ty : tys)
    if (!ty->ground()) return false;
  return true;
}

std::string subst_key(const TypeSubst& rho) {
  std::string out;
  for (const auto& [v, ty] : rho) out += v + ":=" + ty->str() + ";";
  return out;
}

// Matches the (partially instantiated) occurrence type arguments against a
// ground instance, extending delta.
bool match_vectors(const std::vector<TypePtr>& patterns, const std::vector<TypePtr>& targets,
                   TypeSubst& delta) {
  if (patterns.size() != targets.size()) return false;
  for (std::size_t i = 0; i < patterns.size(); ++i) {
    auto step = match_type(apply_type_subst(patterns[i], delta), targets[i]);
    if (!step) return false;
    for (const auto& [v, ty] : *step) delta.emplace(v, ty);
  }
  return true;
}

TypeSubst compose(const TypeSubst& first, const TypeSubst& then) {
  TypeSubst out;
  for (const auto& [v, ty] : first) out.emplace(v, apply_type_subst(ty, then));
  for (const auto& [v, ty] : then) out.emplace(v, ty);
  return out;
}

// Strips the top-level type-quantifier prefix; instances re-close nothing
// because the substitution grounds every prefix variable.
FormulaPtr strip_type_prefix(const FormulaPtr& f, std::vector<std::string>& prefix) {
  FormulaPtr body = f;
  while (body->kind() == FormulaKind::forall_type) {
    prefix.push_back(body->var());
    body = body->body();
  }
  return body;
}

} // namespace

MonoResult monomorphise(const Problem& p, const MonoConfig& cfg) {
  if (p.sig.level != Level::polymorphic)
    throw InternalError("monomorphise requires polymorphic input");

  // Stage 1: split sentences and seed the pool of monomorphic instances.
  std::vector<const NamedFormula*> mono_in, poly_in;
  for (const auto& nf : p.sentences) {
    std::set<std::string> tvs;
    collect_type_vars(nf.formula, tvs);
    (tvs.empty() ? mono_in : poly_in).push_back(&nf);
  }

  std::map<std::string, SymbolInstance> pool;
  std::map<std::string, TypePtr> ground_types;
  auto add_to_pool = [&](const SymbolInstance& inst) {
    bool fresh = pool.emplace(inst.key(), inst).second;
    if (fresh)
      for (const auto& ty : inst.ty_args) collect_ground_types(ty, ground_types);
    return fresh;
  };
  for (const NamedFormula* nf : mono_in) {
    std::vector<SymbolInstance> insts;
    collect_instances(nf->formula, insts);
    for (const auto& inst : insts) add_to_pool(inst);
  }
  // Ground types occurring anywhere in the monomorphic sentences also feed
  // the pool (they are what phantom-like residual variables range over).
  {
    Problem mono_part;
    mono_part.sig = p.sig;
    for (const NamedFormula* nf : mono_in) mono_part.sentences.push_back(*nf);
    for (const auto& ty : types_of(mono_part)) collect_ground_types(ty, ground_types);
  }

  // Per-axiom occurrences (with type variables) and substitution sets.
  struct AxiomState {
    const NamedFormula* source;
    std::vector<SymbolInstance> occurrences; // deduplicated
    std::map<std::string, TypeSubst> substs; // keyed for deduplication
  };
  std::vector<AxiomState> axioms;
  for (const NamedFormula* nf : poly_in) {
    AxiomState st;
    st.source = nf;
    std::vector<SymbolInstance> raw;
    collect_instances(nf->formula, raw);
    std::set<std::string> seen;
    for (auto& inst : raw)
      if (seen.insert(inst.key()).second) st.occurrences.push_back(std::move(inst));
    st.substs.emplace("", TypeSubst{});
    axioms.push_back(std::move(st));
  }

  // Stage 2: refine substitution sets; repeat while new instances emerge.
  MonoResult result;
  for (std::size_t round = 0; round < cfg.iterations; ++round) {
    bool new_instances = false;
    std::map<std::string, std::vector<const SymbolInstance*>> pool_by_sym;
    for (const auto& [key, inst] : pool) pool_by_sym[inst.sym].push_back(&inst);
    for (auto& ax : axioms) {
      std::map<std::string, TypeSubst> additions;
      for (const auto& [rkey, rho] : ax.substs) {
        for (const auto& occ : ax.occurrences) {
          auto bucket = pool_by_sym.find(occ.sym);
          if (bucket == pool_by_sym.end()) continue;
          std::vector<TypePtr> patterns;
          patterns.reserve(occ.ty_args.size());
          for (const auto& ty : occ.ty_args) patterns.push_back(apply_type_subst(ty, rho));
          if (all_ground(patterns)) continue; // nothing left to refine
          for (const SymbolInstance* inst : bucket->second) {
            if (inst->ty_args.size() != patterns.size()) continue;
            TypeSubst delta;
            if (!match_vectors(patterns, inst->ty_args, delta)) continue;
            if (delta.empty()) continue;
            TypeSubst refined = compose(rho, delta);
            additions.emplace(subst_key(refined), std::move(refined));
          }
        }
      }
      for (auto& [key, rho] : additions) {
        if (!ax.substs.emplace(key, rho).second) continue;
        // Newly ground instances feed the next round.
        for (const auto& occ : ax.occurrences) {
          std::vector<TypePtr> tys;
          tys.reserve(occ.ty_args.size());
          for (const auto& ty : occ.ty_args) tys.push_back(apply_type_subst(ty, rho));
          if (all_ground(tys) && add_to_pool({occ.sym, tys})) new_instances = true;
        }
      }
    }
    result.rounds_used = round + 1;
    if (!new_instances) break;
  }

  // Stage 3: apply the substitutions, fill residual (phantom-like) type
  // variables from the ground-type pool, and keep ground results only.
  std::vector<TypePtr> fill_types;
  for (const auto& [key, ty] : ground_types) fill_types.push_back(ty);

  struct Candidate {
    const NamedFormula* source;
    TypeSubst rho;
  };
  std::vector<std::vector<Candidate>> per_axiom;
  for (const auto& ax : axioms) {
    std::vector<Candidate> cands;
    std::set<std::string> dedup;
    auto add_candidate = [&](TypeSubst rho) {
      if (dedup.insert(subst_key(rho)).second) cands.push_back({ax.source, std::move(rho)});
    };
    std::set<std::string> tvs;
    collect_type_vars(ax.source->formula, tvs);

    // A residual variable may be filled from the ground-type pool only when
    // occurrence matching could never determine it: no occurrence of a
    // symbol with known monomorphic instances mentions it.
    auto fillable = [&](const std::string& v, const TypeSubst& rho) {
      for (const auto& occ : ax.occurrences) {
        if (!pool.count(occ.key()) &&
            std::none_of(pool.begin(), pool.end(), [&](const auto& entry) {
              return entry.second.sym == occ.sym;
            }))
          continue;
        for (const auto& ty : occ.ty_args) {
          std::set<std::string> vars = type_vars(apply_type_subst(ty, rho));
          if (vars.count(v)) return false;
        }
      }
      return true;
    };

    for (const auto& [key, rho] : ax.substs) {
      std::vector<std::string> residual;
      for (const auto& v : tvs)
        if (!rho.count(v)) residual.push_back(v);
      if (residual.empty()) {
        add_candidate(rho);
        continue;
      }
      bool all_fillable = true;
      for (const auto& v : residual)
        if (!fillable(v, rho)) all_fillable = false;
      if (!all_fillable) continue;
      if (fill_types.empty() || residual.size() > 3) continue;
      // Residual (phantom-like) variables range over the pool's ground
      // types; admission is capped by the budget anyway.
      std::size_t combos = 1;
      for (std::size_t i = 0; i < residual.size(); ++i) {
        combos *= fill_types.size();
        if (combos > cfg.budget + 1) {
          combos = cfg.budget + 1;
          break;
        }
      }
      for (std::size_t code = 0; code < combos; ++code) {
        TypeSubst filled = rho;
        std::size_t rest = code;
        for (const auto& v : residual) {
          filled.emplace(v, fill_types[rest % fill_types.size()]);
          rest /= fill_types.size();
        }
        add_candidate(std::move(filled));
      }
    }
    per_axiom.push_back(std::move(cands));
  }

  // Round-robin admission across source axioms up to the budget.
  Problem staged;
  staged.sig = p.sig;
  for (const NamedFormula* nf : mono_in) staged.sentences.push_back(*nf);
  std::vector<std::size_t> cursor(per_axiom.size(), 0);
  std::vector<std::size_t> emitted(per_axiom.size(), 0);
  bool progress = true;
  while (progress && result.new_formulas < cfg.budget) {
    progress = false;
    for (std::size_t i = 0; i < per_axiom.size() && result.new_formulas < cfg.budget; ++i) {
      if (cursor[i] >= per_axiom[i].size()) continue;
      const Candidate& cand = per_axiom[i][cursor[i]++];
      std::vector<std::string> prefix;
      FormulaPtr body = strip_type_prefix(cand.source->formula, prefix);
      FormulaPtr inst = apply_type_subst(body, cand.rho);
      std::set<std::string> leftover;
      collect_type_vars(inst, leftover);
      if (!leftover.empty()) continue;
      std::string name = cand.source->name;
      if (emitted[i] > 0 || per_axiom[i].size() > 1)
        name += "_m" + std::to_string(emitted[i]);
      ++emitted[i];
      staged.sentences.push_back({name, cand.source->role, inst});
      ++result.new_formulas;
      progress = true;
    }
  }
  for (std::size_t i = 0; i < per_axiom.size(); ++i)
    if (emitted[i] == 0) result.dropped.push_back(axioms[i].source->name);

  MonoResult mangled = mangle_ground(staged);
  mangled.dropped = std::move(result.dropped);
  mangled.rounds_used = result.rounds_used;
  mangled.new_formulas = result.new_formulas;
  return mangled;
}

namespace {

struct Mangler {
  const Signature& src;
  NameMint mint;
  std::map<std::string, std::string> type_names;   // ground type str -> ctor
  std::map<std::string, std::string> symbol_names; // instance key -> symbol
  Signature out_sig;

  explicit Mangler(const Signature& src, std::set<std::string> taken)
      : src(src), mint(std::move(taken)) {
    out_sig.level = Level::monomorphic;
    // Symbols without type arguments and nullary type constructors keep
    // their own names; claiming them up front stops a mangled instance from
    // stealing one.
    for (const auto& [name, arity] : src.type_ctors)
      if (arity == 0) mint.mint("ty:" + name, name);
    for (const auto& [name, fs] : src.funs)
      if (fs.ty_vars.empty()) mint.mint("sym:" + name, name);
    for (const auto& [name, ps] : src.preds)
      if (ps.ty_vars.empty()) mint.mint("sym:" + name, name);
  }

  TypePtr map_type(const TypePtr& ty) {
    if (!ty->ground())
      throw InternalError("mangle: residual type variable in " + ty->str());
    auto it = type_names.find(ty->str());
    if (it == type_names.end()) {
      std::string name = mint.mint("ty:" + ty->str(), mangle_type_base(ty));
      it = type_names.emplace(ty->str(), name).first;
      out_sig.type_ctors.emplace(name, 0);
    }
    return Type::app(it->second, {});
  }

  std::string map_symbol(const std::string& sym, const std::vector<TypePtr>& ty_args) {
    SymbolDecl decl = lookup(sym);
    if (decl.ty_vars->size() != ty_args.size())
      throw InternalError("mangle: type-argument count mismatch for " + sym);
    std::string key = sym;
    for (const auto& ty : ty_args) key += "<" + ty->str() + ">";
    auto it = symbol_names.find(key);
    if (it != symbol_names.end()) return it->second;
    std::string base = sym;
    for (const auto& ty : ty_args) base += "_" + mangle_type_base(ty);
    std::string name = mint.mint("sym:" + key, base);
    symbol_names.emplace(key, name);
    TypeSubst rho;
    for (std::size_t i = 0; i < decl.ty_vars->size(); ++i)
      rho.emplace((*decl.ty_vars)[i], ty_args[i]);
    std::vector<TypePtr> arg_types;
    for (const auto& ty : *decl.arg_types)
      arg_types.push_back(map_type(apply_type_subst(ty, rho)));
    if (decl.result) {
      FunSig fs;
      fs.arg_types = std::move(arg_types);
      fs.result = map_type(apply_type_subst(decl.result, rho));
      out_sig.funs.emplace(name, std::move(fs));
    } else {
      PredSig ps;
      ps.arg_types = std::move(arg_types);
      out_sig.preds.emplace(name, std::move(ps));
    }
    return name;
  }

  struct SymbolDecl {
    const std::vector<std::string>* ty_vars;
    const std::vector<TypePtr>* arg_types;
    TypePtr result;
  };

  SymbolDecl lookup(const std::string& sym) const {
    auto fit = src.funs.find(sym);
    if (fit != src.funs.end())
      return {&fit->second.ty_vars, &fit->second.arg_types, fit->second.result};
    auto pit = src.preds.find(sym);
    if (pit == src.preds.end()) throw InternalError("mangle: unknown symbol " + sym);
    return {&pit->second.ty_vars, &pit->second.arg_types, nullptr};
  }

  TermPtr map_term(const TermPtr& t) {
    if (t->is_var()) return Term::var(t->name(), map_type(t->var_type()), t->kind());
    std::string name = map_symbol(t->name(), t->ty_args());
    std::vector<TermPtr> args;
    args.reserve(t->args().size());
    for (const auto& a : t->args()) args.push_back(map_term(a));
    return Term::app(name, {}, std::move(args));
  }

  FormulaPtr map_formula(const FormulaPtr& f) {
    switch (f->kind()) {
      case FormulaKind::pred_lit: {
        std::string name = map_symbol(f->sym(), f->ty_args());
        std::vector<TermPtr> args;
        args.reserve(f->args().size());
        for (const auto& a : f->args()) args.push_back(map_term(a));
        return Formula::pred_lit(f->positive(), name, {}, std::move(args));
      }
      case FormulaKind::eq_lit:
        return Formula::eq_lit(f->positive(), map_term(f->lhs_term()),
                               map_term(f->rhs_term()));
      case FormulaKind::conj:
        return Formula::conj(map_formula(f->lhs()), map_formula(f->rhs()));
      case FormulaKind::disj:
        return Formula::disj(map_formula(f->lhs()), map_formula(f->rhs()));
      case FormulaKind::forall_term:
        return Formula::forall(f->var(), map_type(f->var_type()), map_formula(f->body()));
      case FormulaKind::exists_term:
        return Formula::exists(f->var(), map_type(f->var_type()), map_formula(f->body()));
      case FormulaKind::forall_type:
        throw InternalError("mangle: residual type quantifier");
    }
    throw InternalError("mangle: unreachable");
  }
};

} // namespace

MonoResult mangle_ground(const Problem& p) {
  MonoResult out;
  Mangler mangler(p.sig, {});
  for (const auto& nf : p.sentences)
    out.problem.sentences.push_back({nf.name, nf.role, mangler.map_formula(nf.formula)});
  out.problem.sig = std::move(mangler.out_sig);
  out.problem.sig.ensure_nullary_ctor();
  out.type_map = std::move(mangler.type_names);
  out.symbol_map = std::move(mangler.symbol_names);
  return out;
}

} // namespace polyenc
