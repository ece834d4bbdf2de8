#include "polyenc/oracle.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "polyenc/analysis.hpp"
#include "polyenc/monomorph.hpp"
#include "polyenc/terms.hpp"
#include "polyenc/typing.hpp"

namespace polyenc {

// ---------------------------------------------------------------------------
// FiniteModel helpers

std::size_t FiniteModel::domain_of(const TypePtr& ground_ty) const {
  auto it = domain_index.find(ground_ty->str());
  if (it == domain_index.end())
    throw InternalError("no domain for type " + ground_ty->str());
  return it->second;
}

std::string FiniteModel::instance_key(const std::string& sym,
                                      const std::vector<TypePtr>& ty_args) {
  std::string out = sym;
  for (const auto& ty : ty_args) out += "<" + ty->str() + ">";
  return out;
}

namespace {

std::size_t flatten_index(const FiniteModel& model, const std::vector<std::size_t>& arg_domains,
                          const std::vector<std::size_t>& elems) {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < elems.size(); ++i)
    idx = idx * model.domains[arg_domains[i]].second + elems[i];
  return idx;
}

// ---------------------------------------------------------------------------
// Evaluation (the semantics of all three logics over one structure type)

struct Evaluator {
  const FiniteModel& model;

  TypePtr ground_type(const TypePtr& ty, const TypeValuation& theta) const {
    if (ty->ground()) return ty;
    TypeSubst rho;
    for (const auto& [v, t] : theta) rho.emplace(v, t);
    TypePtr g = apply_type_subst(ty, rho);
    if (!g->ground()) throw InternalError("type valuation does not cover " + ty->str());
    return g;
  }

  std::size_t eval_term(const TermPtr& t, const TypeValuation& theta,
                        const TermValuation& xi) const {
    if (t->is_var()) {
      auto it = xi.find(t->name());
      if (it == xi.end()) throw InternalError("unbound variable " + t->name());
      return it->second;
    }
    std::vector<TypePtr> ground_tys;
    ground_tys.reserve(t->ty_args().size());
    for (const auto& ty : t->ty_args()) ground_tys.push_back(ground_type(ty, theta));
    auto table = model.funs.find(FiniteModel::instance_key(t->name(), ground_tys));
    if (table == model.funs.end())
      throw InternalError("missing function table for " + t->name());
    std::vector<std::size_t> elems;
    elems.reserve(t->args().size());
    for (const auto& a : t->args()) elems.push_back(eval_term(a, theta, xi));
    return table->second.values[flatten_index(model, table->second.arg_domains, elems)];
  }

  bool eval(const FormulaPtr& f, const TypeValuation& theta, const TermValuation& xi) const {
    switch (f->kind()) {
      case FormulaKind::pred_lit: {
        std::vector<TypePtr> ground_tys;
        for (const auto& ty : f->ty_args()) ground_tys.push_back(ground_type(ty, theta));
        auto table = model.preds.find(FiniteModel::instance_key(f->sym(), ground_tys));
        if (table == model.preds.end())
          throw InternalError("missing predicate table for " + f->sym());
        std::vector<std::size_t> elems;
        for (const auto& a : f->args()) elems.push_back(eval_term(a, theta, xi));
        bool value =
            table->second.values[flatten_index(model, table->second.arg_domains, elems)];
        return f->positive() ? value : !value;
      }
      case FormulaKind::eq_lit: {
        bool value = eval_term(f->lhs_term(), theta, xi) == eval_term(f->rhs_term(), theta, xi);
        return f->positive() ? value : !value;
      }
      case FormulaKind::conj:
        return eval(f->lhs(), theta, xi) && eval(f->rhs(), theta, xi);
      case FormulaKind::disj:
        return eval(f->lhs(), theta, xi) || eval(f->rhs(), theta, xi);
      case FormulaKind::forall_term: {
        std::size_t d = model.domain_of(ground_type(f->var_type(), theta));
        TermValuation xi2 = xi;
        for (std::size_t e = 0; e < model.domains[d].second; ++e) {
          xi2[f->var()] = e;
          if (!eval(f->body(), theta, xi2)) return false;
        }
        return true;
      }
      case FormulaKind::exists_term: {
        std::size_t d = model.domain_of(ground_type(f->var_type(), theta));
        TermValuation xi2 = xi;
        for (std::size_t e = 0; e < model.domains[d].second; ++e) {
          xi2[f->var()] = e;
          if (eval(f->body(), theta, xi2)) return true;
        }
        return false;
      }
      case FormulaKind::forall_type: {
        TypeValuation theta2 = theta;
        for (const auto& [ty, size] : model.domains) {
          theta2[f->var()] = ty;
          if (!eval(f->body(), theta2, xi)) return false;
        }
        return true;
      }
    }
    throw InternalError("evaluate: unreachable");
  }
};

} // namespace

bool evaluate(const FiniteModel& model, const Signature& sig, const FormulaPtr& phi,
              const TypeValuation& theta, const TermValuation& xi) {
  (void)sig;
  Evaluator ev{model};
  return ev.eval(phi, theta, xi);
}

bool evaluate(const FiniteModel& model, const Problem& p) {
  for (const auto& nf : p.sentences)
    if (!evaluate(model, p.sig, nf.formula)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Clausification

std::string Literal::str() const {
  if (is_eq) return args[0]->str() + (positive ? " = " : " != ") + args[1]->str();
  std::string out = positive ? "" : "~";
  std::vector<TypePtr> tys = ty_args;
  out += Term::app(sym, std::move(tys), args)->str();
  return out;
}

std::string Clause::str() const {
  if (literals.empty()) return "$false";
  std::string out;
  for (std::size_t i = 0; i < literals.size(); ++i) {
    if (i) out += " | ";
    out += literals[i].str();
  }
  return out;
}

namespace {

struct Clausifier {
  ClauseSet out;
  std::size_t skolem_count = 0;

  using Matrix = std::vector<std::vector<Literal>>; // CNF under construction

  TermPtr skolem_term(const TypePtr& result, const std::vector<TermPtr>& univ) {
    std::string name = std::string(kSkolemPrefix) + std::to_string(skolem_count++);
    FunSig fs;
    for (const auto& v : univ) fs.arg_types.push_back(v->var_type());
    fs.result = result;
    out.sig.funs.emplace(name, std::move(fs));
    std::vector<TermPtr> args = univ;
    return Term::app(name, {}, std::move(args));
  }

  Matrix walk(const FormulaPtr& f, std::vector<TermPtr>& univ, TermSubst& sk) {
    switch (f->kind()) {
      case FormulaKind::pred_lit: {
        Literal lit;
        lit.positive = f->positive();
        lit.sym = f->sym();
        lit.ty_args = f->ty_args();
        for (const auto& a : f->args()) lit.args.push_back(subst_term(a, sk));
        return {{lit}};
      }
      case FormulaKind::eq_lit: {
        Literal lit;
        lit.positive = f->positive();
        lit.is_eq = true;
        lit.args = {subst_term(f->lhs_term(), sk), subst_term(f->rhs_term(), sk)};
        return {{lit}};
      }
      case FormulaKind::conj: {
        Matrix l = walk(f->lhs(), univ, sk);
        Matrix r = walk(f->rhs(), univ, sk);
        l.insert(l.end(), r.begin(), r.end());
        return l;
      }
      case FormulaKind::disj: {
        Matrix l = walk(f->lhs(), univ, sk);
        Matrix r = walk(f->rhs(), univ, sk);
        Matrix product;
        product.reserve(l.size() * r.size());
        for (const auto& cl : l)
          for (const auto& cr : r) {
            std::vector<Literal> merged = cl;
            merged.insert(merged.end(), cr.begin(), cr.end());
            product.push_back(std::move(merged));
          }
        return product;
      }
      case FormulaKind::forall_term: {
        univ.push_back(Term::var(f->var(), f->var_type(), VarKind::universal));
        Matrix m = walk(f->body(), univ, sk);
        univ.pop_back();
        return m;
      }
      case FormulaKind::exists_term: {
        sk.emplace(f->var(), skolem_term(f->var_type(), univ));
        return walk(f->body(), univ, sk);
      }
      case FormulaKind::forall_type:
        throw InternalError("clausify: type quantifier in input");
    }
    throw InternalError("clausify: unreachable");
  }
};

std::string literal_key(const Literal& lit) {
  return (lit.positive ? "+" : "-") + lit.str();
}

bool tautology(const std::vector<Literal>& lits) {
  std::set<std::string> seen;
  for (const auto& lit : lits) {
    if (lit.is_eq && lit.positive && equal(lit.args[0], lit.args[1])) return true;
    seen.insert(literal_key(lit));
  }
  for (const auto& lit : lits) {
    Literal flipped = lit;
    flipped.positive = !flipped.positive;
    if (seen.count(literal_key(flipped))) return true;
  }
  return false;
}

} // namespace

ClauseSet clausify(const Problem& p) {
  Clausifier cl;
  cl.out.sig = p.sig;
  for (const auto& nf : p.sentences) {
    std::set<std::string> tvs;
    collect_type_vars(nf.formula, tvs);
    if (!tvs.empty())
      throw InternalError("clausify: sentence " + nf.name +
                          " has type variables (monomorphise or ground first)");
    std::vector<TermPtr> univ;
    TermSubst sk;
    for (auto& lits : cl.walk(nf.formula, univ, sk)) {
      std::set<std::string> seen;
      std::vector<Literal> unique;
      for (auto& lit : lits)
        if (seen.insert(literal_key(lit)).second) unique.push_back(std::move(lit));
      if (tautology(unique)) continue;
      cl.out.clauses.push_back({std::move(unique)});
    }
  }
  return cl.out;
}

// ---------------------------------------------------------------------------
// DPLL satisfiability for the grounded model search

namespace {

class DpllSolver {
public:
  explicit DpllSolver(std::size_t n_vars) : assignment_(n_vars, 0) {}

  // Literal encoding: var v -> positive 2v, negative 2v+1.
  static int pos(std::size_t v) { return static_cast<int>(2 * v); }
  static int neg(std::size_t v) { return static_cast<int>(2 * v + 1); }

  void add_clause(std::vector<int> lits) {
    std::sort(lits.begin(), lits.end());
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
    for (std::size_t i = 0; i + 1 < lits.size(); ++i)
      if ((lits[i] ^ lits[i + 1]) == 1) return; // tautology
    if (lits.empty()) {
      contradiction_ = true;
      return;
    }
    clauses_.push_back(std::move(lits));
  }

  bool solve() {
    if (contradiction_) return false;
    watches_.assign(assignment_.size() * 2, {});
    for (std::size_t ci = 0; ci < clauses_.size(); ++ci) {
      auto& c = clauses_[ci];
      if (c.size() == 1) {
        if (!enqueue(c[0])) return false;
        continue;
      }
      watches_[c[0]].push_back(ci);
      watches_[c[1]].push_back(ci);
    }
    if (!propagate()) return false;
    return search();
  }

  bool value_of(std::size_t var) const { return assignment_[var] == 1; }

private:
  std::vector<int8_t> assignment_; // 0 unknown, 1 true, -1 false
  std::vector<std::vector<int>> clauses_;
  std::vector<std::vector<std::size_t>> watches_; // literal -> clause indices
  std::vector<int> trail_;
  std::size_t qhead_ = 0;
  bool contradiction_ = false;

  int lit_value(int lit) const {
    int8_t v = assignment_[lit >> 1];
    if (v == 0) return 0;
    bool truthy = (v == 1) == ((lit & 1) == 0);
    return truthy ? 1 : -1;
  }

  bool enqueue(int lit) {
    int v = lit_value(lit);
    if (v == 1) return true;
    if (v == -1) return false;
    assignment_[lit >> 1] = (lit & 1) ? -1 : 1;
    trail_.push_back(lit);
    return true;
  }

  bool propagate() {
    while (qhead_ < trail_.size()) {
      int lit = trail_[qhead_++];
      int falsified = lit ^ 1;
      auto watching = std::move(watches_[falsified]);
      watches_[falsified].clear();
      for (std::size_t i = 0; i < watching.size(); ++i) {
        std::size_t ci = watching[i];
        auto& c = clauses_[ci];
        if (c[0] == falsified) std::swap(c[0], c[1]);
        if (lit_value(c[0]) == 1) {
          watches_[falsified].push_back(ci);
          continue;
        }
        bool moved = false;
        for (std::size_t k = 2; k < c.size(); ++k) {
          if (lit_value(c[k]) != -1) {
            std::swap(c[1], c[k]);
            watches_[c[1]].push_back(ci);
            moved = true;
            break;
          }
        }
        if (moved) continue;
        watches_[falsified].push_back(ci);
        if (!enqueue(c[0])) {
          for (std::size_t k = i + 1; k < watching.size(); ++k)
            watches_[falsified].push_back(watching[k]);
          return false;
        }
      }
    }
    return true;
  }

  bool search() {
    std::size_t var = assignment_.size();
    for (std::size_t v = 0; v < assignment_.size(); ++v)
      if (assignment_[v] == 0) {
        var = v;
        break;
      }
    if (var == assignment_.size()) return true;
    for (int lit : {pos(var), neg(var)}) {
      std::size_t mark = trail_.size();
      if (enqueue(lit) && propagate() && search()) return true;
      while (trail_.size() > mark) {
        assignment_[trail_.back() >> 1] = 0;
        trail_.pop_back();
      }
      qhead_ = trail_.size();
    }
    return false;
  }
};

// ---------------------------------------------------------------------------
// Model search

// Flattens a clause so every literal is shallow: p(vars), f(vars) = var (or
// negated), or var = var. Nested applications are pulled out through fresh
// variables V with a t != V side literal, which preserves satisfiability
// over total function tables. Grounding a shallow literal is then a single
// table lookup.
Clause flatten_clause(const Signature& sig, const Clause& clause) {
  Clause out = clause;
  std::size_t fresh = 0;
  auto fresh_var = [&](const TypePtr& ty) {
    return Term::var("FL" + std::to_string(fresh++), ty, VarKind::universal);
  };

  auto is_shallow_app = [](const TermPtr& t) {
    if (!t->is_app()) return false;
    for (const auto& a : t->args())
      if (!a->is_var()) return false;
    return true;
  };

  for (;;) {
    // Find an innermost nested application: an app argument that is an app
    // of variables, or (for equalities) a second app side.
    TermPtr candidate;
    auto consider = [&](const TermPtr& t) {
      if (!candidate && is_shallow_app(t)) candidate = t;
    };
    std::function<void(const TermPtr&)> scan_args = [&](const TermPtr& t) {
      if (t->is_var()) return;
      for (const auto& a : t->args()) {
        scan_args(a);
        if (a->is_app()) consider(a);
      }
    };
    for (const auto& lit : out.literals) {
      if (lit.is_eq) {
        scan_args(lit.args[0]);
        scan_args(lit.args[1]);
        // Keep at most one application side on an equality.
        if (!candidate && lit.args[0]->is_app() && lit.args[1]->is_app())
          consider(lit.args[1]);
      } else {
        for (const auto& a : lit.args) {
          scan_args(a);
          if (a->is_app()) consider(a);
        }
      }
    }
    if (!candidate) return out;

    TermPtr v = fresh_var(term_type(sig, candidate));
    auto replace = [&](const TermPtr& t) {
      std::function<TermPtr(const TermPtr&)> rec = [&](const TermPtr& u) -> TermPtr {
        if (equal(u, candidate)) return v;
        if (u->is_var() || u->args().empty()) return u;
        std::vector<TermPtr> args;
        args.reserve(u->args().size());
        for (const auto& a : u->args()) args.push_back(rec(a));
        std::vector<TypePtr> tys = u->ty_args();
        return Term::app(u->name(), std::move(tys), std::move(args));
      };
      return rec(t);
    };
    for (auto& lit : out.literals)
      for (auto& a : lit.args) a = replace(a);
    Literal defining;
    defining.positive = false;
    defining.is_eq = true;
    defining.args = {candidate, v};
    out.literals.push_back(std::move(defining));
  }
}

// Size vectors with entries >= 1 and total <= cap, ordered by total then
// lexicographically.
std::vector<std::vector<std::size_t>> size_vectors(std::size_t k, std::size_t cap) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur(k, 1);
  std::function<void(std::size_t, std::size_t, std::size_t)> rec =
      [&](std::size_t idx, std::size_t total, std::size_t budget) {
        if (idx == k) {
          if (total > 0) out.push_back(cur);
          return;
        }
        for (std::size_t s = 1; s + (k - idx - 1) <= budget; ++s) {
          cur[idx] = s;
          rec(idx + 1, total + s, budget - s);
        }
      };
  if (k > 0 && k <= cap) rec(0, 0, cap);
  std::stable_sort(out.begin(), out.end(),
                   [](const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
                     std::size_t ta = std::accumulate(a.begin(), a.end(), std::size_t{0});
                     std::size_t tb = std::accumulate(b.begin(), b.end(), std::size_t{0});
                     if (ta != tb) return ta < tb;
                     return a < b;
                   });
  return out;
}

struct SymbolLayout {
  bool is_fun = false;
  std::vector<std::size_t> arg_domains;
  std::size_t result_domain = 0;
  std::size_t base = 0;
  std::size_t result_size = 1;
};

struct SatInstance {
  FiniteModel skeleton;
  std::map<std::string, SymbolLayout> layouts;
  std::size_t n_vars = 0;

  std::size_t fun_var(const SymbolLayout& ly, const std::vector<std::size_t>& elems,
                      std::size_t value) const {
    return ly.base + flatten_index(skeleton, ly.arg_domains, elems) * ly.result_size + value;
  }

  std::size_t pred_var(const SymbolLayout& ly, const std::vector<std::size_t>& elems) const {
    return ly.base + flatten_index(skeleton, ly.arg_domains, elems);
  }
};

struct ModelSearch {
  SatInstance inst;

  // Literals of flattened clauses are shallow, so each ground literal is a
  // single SAT literal or a truth constant.
  // kind: 0 = sat literal, 1 = constant true, 2 = constant false.
  struct GroundLit {
    int kind = 0;
    int sat_lit = 0;
  };

  GroundLit shallow_literal(const Literal& lit,
                            const std::map<std::string, std::size_t>& env) const {
    GroundLit out;
    if (lit.is_eq) {
      const TermPtr& l = lit.args[0];
      const TermPtr& r = lit.args[1];
      if (l->is_var() && r->is_var()) {
        bool truth = (env.at(l->name()) == env.at(r->name())) == lit.positive;
        out.kind = truth ? 1 : 2;
        return out;
      }
      const TermPtr& app = l->is_app() ? l : r;
      const TermPtr& var = l->is_app() ? r : l;
      if (!var->is_var() || !app->is_app())
        throw InternalError("model search: literal not flattened: " + lit.str());
      const SymbolLayout& ly =
          inst.layouts.at(FiniteModel::instance_key(app->name(), app->ty_args()));
      std::vector<std::size_t> elems;
      for (const auto& a : app->args()) {
        if (!a->is_var()) throw InternalError("model search: nested term survived flattening");
        elems.push_back(env.at(a->name()));
      }
      std::size_t v = inst.fun_var(ly, elems, env.at(var->name()));
      out.sat_lit = lit.positive ? DpllSolver::pos(v) : DpllSolver::neg(v);
      return out;
    }
    const SymbolLayout& ly = inst.layouts.at(FiniteModel::instance_key(lit.sym, lit.ty_args));
    std::vector<std::size_t> elems;
    for (const auto& a : lit.args) {
      if (!a->is_var()) throw InternalError("model search: nested term survived flattening");
      elems.push_back(env.at(a->name()));
    }
    std::size_t v = inst.pred_var(ly, elems);
    out.sat_lit = lit.positive ? DpllSolver::pos(v) : DpllSolver::neg(v);
    return out;
  }

  void expand_clause(const Clause& clause, const std::map<std::string, std::size_t>& env,
                     DpllSolver& solver) const {
    std::vector<int> sat_clause;
    for (const auto& lit : clause.literals) {
      GroundLit g = shallow_literal(lit, env);
      if (g.kind == 1) return; // satisfied outright
      if (g.kind == 2) continue;
      sat_clause.push_back(g.sat_lit);
    }
    solver.add_clause(std::move(sat_clause));
  }
};

} // namespace

std::optional<FiniteModel> find_model(const Problem& p, std::size_t max_total_size) {
  ClauseSet cs = clausify(p);

  std::vector<TypePtr> ground_types;
  for (const auto& ty : types_of(p)) {
    if (!ty->ground())
      throw InternalError("find_model: non-ground type " + ty->str() +
                          " (monomorphise or ground first)");
    ground_types.push_back(ty);
  }
  if (ground_types.empty()) {
    std::string iota = cs.sig.some_nullary_ctor().value_or(std::string(kUntypedSort));
    ground_types.push_back(Type::app(iota, {}));
  }

  // Symbol instances appearing in the clause set or the original sentences
  // (per ground type-argument tuple, so polymorphic ground applications get
  // separate tables; the sentences matter because simplification can drop
  // clauses whose symbols evaluate still visits).
  std::map<std::string, std::pair<std::string, std::vector<TypePtr>>> fun_insts, pred_insts;
  std::function<void(const TermPtr&)> scan_term = [&](const TermPtr& t) {
    if (t->is_var()) return;
    fun_insts.emplace(FiniteModel::instance_key(t->name(), t->ty_args()),
                      std::make_pair(t->name(), t->ty_args()));
    for (const auto& a : t->args()) scan_term(a);
  };
  for (const auto& clause : cs.clauses)
    for (const auto& lit : clause.literals) {
      if (!lit.is_eq)
        pred_insts.emplace(FiniteModel::instance_key(lit.sym, lit.ty_args),
                           std::make_pair(lit.sym, lit.ty_args));
      for (const auto& a : lit.args) scan_term(a);
    }
  std::function<void(const FormulaPtr&)> scan_formula = [&](const FormulaPtr& f) {
    switch (f->kind()) {
      case FormulaKind::pred_lit:
        pred_insts.emplace(FiniteModel::instance_key(f->sym(), f->ty_args()),
                           std::make_pair(f->sym(), f->ty_args()));
        [[fallthrough]];
      case FormulaKind::eq_lit:
        for (const auto& a : f->args()) scan_term(a);
        return;
      case FormulaKind::conj:
      case FormulaKind::disj:
        scan_formula(f->lhs());
        scan_formula(f->rhs());
        return;
      case FormulaKind::forall_term:
      case FormulaKind::exists_term:
      case FormulaKind::forall_type:
        scan_formula(f->body());
        return;
    }
  };
  for (const auto& nf : p.sentences) scan_formula(nf.formula);

  auto instance_types = [&](const std::string& sym, const std::vector<TypePtr>& ty_args,
                            bool pred) -> std::pair<std::vector<TypePtr>, TypePtr> {
    TypeSubst rho;
    std::vector<TypePtr> args;
    if (pred) {
      const PredSig& ps = cs.sig.preds.at(sym);
      for (std::size_t i = 0; i < ps.ty_vars.size(); ++i) rho.emplace(ps.ty_vars[i], ty_args[i]);
      for (const auto& ty : ps.arg_types) args.push_back(apply_type_subst(ty, rho));
      return {args, nullptr};
    }
    const FunSig& fs = cs.sig.funs.at(sym);
    for (std::size_t i = 0; i < fs.ty_vars.size(); ++i) rho.emplace(fs.ty_vars[i], ty_args[i]);
    for (const auto& ty : fs.arg_types) args.push_back(apply_type_subst(ty, rho));
    return {args, apply_type_subst(fs.result, rho)};
  };

  std::vector<Clause> flat;
  flat.reserve(cs.clauses.size());
  for (const auto& clause : cs.clauses) flat.push_back(flatten_clause(cs.sig, clause));

  for (const auto& sizes : size_vectors(ground_types.size(), max_total_size)) {
    ModelSearch search;
    FiniteModel& model = search.inst.skeleton;
    for (std::size_t i = 0; i < ground_types.size(); ++i) {
      model.domain_index.emplace(ground_types[i]->str(), i);
      model.domains.emplace_back(ground_types[i], sizes[i]);
    }

    std::size_t next_var = 0;
    auto add_layout = [&](const std::string& key, const std::string& sym,
                          const std::vector<TypePtr>& ty_args, bool pred) {
      auto [arg_tys, result_ty] = instance_types(sym, ty_args, pred);
      SymbolLayout ly;
      ly.is_fun = !pred;
      std::size_t entries = 1;
      for (const auto& ty : arg_tys) {
        std::size_t d = model.domain_of(ty);
        ly.arg_domains.push_back(d);
        entries *= model.domains[d].second;
      }
      if (!pred) {
        ly.result_domain = model.domain_of(result_ty);
        ly.result_size = model.domains[ly.result_domain].second;
      }
      ly.base = next_var;
      next_var += entries * ly.result_size;
      search.inst.layouts.emplace(key, ly);
    };
    for (const auto& [key, inst] : fun_insts) add_layout(key, inst.first, inst.second, false);
    for (const auto& [key, inst] : pred_insts) add_layout(key, inst.first, inst.second, true);
    search.inst.n_vars = next_var;

    DpllSolver solver(next_var);

    // Totality and functionality of the function tables.
    for (const auto& [key, ly] : search.inst.layouts) {
      if (!ly.is_fun) continue;
      std::size_t entries = 1;
      for (std::size_t d : ly.arg_domains) entries *= model.domains[d].second;
      for (std::size_t row = 0; row < entries; ++row) {
        std::vector<int> alo;
        for (std::size_t e = 0; e < ly.result_size; ++e)
          alo.push_back(DpllSolver::pos(ly.base + row * ly.result_size + e));
        solver.add_clause(alo);
        for (std::size_t e1 = 0; e1 < ly.result_size; ++e1)
          for (std::size_t e2 = e1 + 1; e2 < ly.result_size; ++e2)
            solver.add_clause({DpllSolver::neg(ly.base + row * ly.result_size + e1),
                               DpllSolver::neg(ly.base + row * ly.result_size + e2)});
      }
    }

    // Ground every clause over its variables' domains.
    for (const auto& clause : flat) {
      std::map<std::string, std::size_t> var_domains;
      std::function<void(const TermPtr&)> scan = [&](const TermPtr& t) {
        if (t->is_var()) {
          var_domains.emplace(t->name(), model.domain_of(t->var_type()));
          return;
        }
        for (const auto& a : t->args()) scan(a);
      };
      for (const auto& lit : clause.literals)
        for (const auto& a : lit.args) scan(a);

      std::vector<std::string> vars;
      for (const auto& [v, d] : var_domains) vars.push_back(v);
      std::map<std::string, std::size_t> env;
      std::function<void(std::size_t)> ground = [&](std::size_t idx) {
        if (idx == vars.size()) {
          search.expand_clause(clause, env, solver);
          return;
        }
        std::size_t d = var_domains.at(vars[idx]);
        for (std::size_t e = 0; e < model.domains[d].second; ++e) {
          env[vars[idx]] = e;
          ground(idx + 1);
        }
      };
      ground(0);
    }

    if (!solver.solve()) continue;

    for (const auto& [key, ly] : search.inst.layouts) {
      std::size_t entries = 1;
      for (std::size_t d : ly.arg_domains) entries *= model.domains[d].second;
      if (ly.is_fun) {
        FiniteModel::FunTable table;
        table.arg_domains = ly.arg_domains;
        table.result_domain = ly.result_domain;
        table.values.resize(entries, 0);
        for (std::size_t row = 0; row < entries; ++row)
          for (std::size_t e = 0; e < ly.result_size; ++e)
            if (solver.value_of(ly.base + row * ly.result_size + e)) {
              table.values[row] = e;
              break;
            }
        model.funs.emplace(key, std::move(table));
      } else {
        FiniteModel::PredTable table;
        table.arg_domains = ly.arg_domains;
        table.values.resize(entries, false);
        for (std::size_t row = 0; row < entries; ++row)
          table.values[row] = solver.value_of(ly.base + row);
        model.preds.emplace(key, std::move(table));
      }
    }

    if (!evaluate(model, p))
      throw InternalError("find_model: decoded model failed verification");
    return model;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// check_status

namespace {

bool ground_problem(const Problem& p) {
  for (const auto& nf : p.sentences) {
    std::set<std::string> tvs;
    collect_type_vars(nf.formula, tvs);
    if (!tvs.empty()) return false;
  }
  return true;
}

// A form refute/clausify accept: ground problems are mangled (collapsing
// ground polymorphic applications into plain symbols), polymorphic ones are
// heuristically monomorphised (sound for the unsat direction: the instances
// are consequences of the original).
Problem refutable_form(const Problem& p) {
  if (p.sig.level != Level::polymorphic) return p;
  if (ground_problem(p)) return mangle_ground(p).problem;
  return monomorphise(p).problem;
}

} // namespace

CheckOutcome check_status(const Problem& p, const Expectation& expected,
                          const CheckBudget& budget) {
  if (expected.sat) {
    if (p.sig.level == Level::polymorphic && !ground_problem(p))
      return CheckOutcome::inconclusive; // no finite certificate exists here
    auto model = find_model(p, expected.bound);
    if (model) return CheckOutcome::pass;
    RefuteResult r = refute(clausify(refutable_form(p)), budget.steps);
    return r.outcome == RefuteOutcome::refutation_found ? CheckOutcome::fail
                                                        : CheckOutcome::inconclusive;
  }
  RefuteResult r = refute(clausify(refutable_form(p)), budget.steps);
  if (r.outcome == RefuteOutcome::refutation_found) return CheckOutcome::pass;
  if (p.sig.level != Level::polymorphic || ground_problem(p)) {
    auto model = find_model(p, budget.cross_model_bound);
    if (model) return CheckOutcome::fail;
  }
  return CheckOutcome::inconclusive;
}

// ---------------------------------------------------------------------------
// Statistics

namespace {

std::size_t formula_symbols(const FormulaPtr& f, std::size_t& atoms, std::size_t& literals) {
  switch (f->kind()) {
    case FormulaKind::pred_lit: {
      ++atoms;
      ++literals;
      std::size_t n = 1;
      for (const auto& a : f->args()) n += term_size(a);
      return n;
    }
    case FormulaKind::eq_lit:
      ++atoms;
      ++literals;
      return term_size(f->lhs_term()) + term_size(f->rhs_term());
    case FormulaKind::conj:
    case FormulaKind::disj:
      return formula_symbols(f->lhs(), atoms, literals) +
             formula_symbols(f->rhs(), atoms, literals);
    case FormulaKind::forall_term:
    case FormulaKind::exists_term:
    case FormulaKind::forall_type:
      return formula_symbols(f->body(), atoms, literals);
  }
  return 0;
}

} // namespace

ProblemStats problem_stats(const Problem& p, bool clausified) {
  ProblemStats out;
  std::size_t atoms = 0, literals = 0, symbols = 0;
  if (clausified) {
    ClauseSet cs = clausify(p);
    out.clauses = cs.clauses.size();
    for (const auto& clause : cs.clauses)
      for (const auto& lit : clause.literals) {
        ++atoms;
        ++literals;
        if (lit.is_eq) {
          symbols += term_size(lit.args[0]) + term_size(lit.args[1]);
        } else {
          symbols += 1;
          for (const auto& a : lit.args) symbols += term_size(a);
        }
      }
  } else {
    out.clauses = p.sentences.size();
    for (const auto& nf : p.sentences) symbols += formula_symbols(nf.formula, atoms, literals);
  }
  out.symbols = symbols;
  out.literals_per_clause = out.clauses ? static_cast<double>(literals) / out.clauses : 0.0;
  out.symbols_per_atom = atoms ? static_cast<double>(symbols) / atoms : 0.0;
  return out;
}

} // namespace polyenc
