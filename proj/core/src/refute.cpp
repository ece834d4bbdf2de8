// Given-clause resolution refuter. Equality is treated as an ordinary
// predicate after the equality axioms (reflexivity, symmetry, transitivity,
// and per-position congruence) are added for the clause set's symbols.

#include <algorithm>
#include <deque>
#include <functional>
#include <queue>
#include <set>

#include "polyenc/oracle.hpp"
#include "polyenc/terms.hpp"
#include "polyenc/typing.hpp"

namespace polyenc {

namespace {

struct RClause {
  std::vector<Literal> lits;
  std::size_t weight = 0;
  std::size_t age = 0;
};

std::size_t literal_weight(const Literal& lit) {
  std::size_t n = lit.is_eq ? 0 : 1;
  for (const auto& a : lit.args) n += term_size(a);
  return n;
}

std::string literal_key(const Literal& lit) {
  return (lit.positive ? "+" : "-") + lit.str();
}

std::string clause_key(const RClause& c) {
  std::vector<std::string> keys;
  keys.reserve(c.lits.size());
  for (const auto& lit : c.lits) keys.push_back(literal_key(lit));
  std::sort(keys.begin(), keys.end());
  std::string out;
  for (const auto& k : keys) out += k + " | ";
  return out;
}

bool is_tautology(const std::vector<Literal>& lits) {
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

Literal subst_literal(const Literal& lit, const TermSubst& sub) {
  Literal out = lit;
  for (auto& a : out.args) a = subst_term(a, sub);
  return out;
}

Literal rename_literal(const Literal& lit, const std::string& suffix) {
  Literal out = lit;
  for (auto& a : out.args) a = rename_term_vars(a, suffix);
  return out;
}

TermPtr canonicalize_vars(const TermPtr& t, std::map<std::string, std::string>& names) {
  if (t->is_var()) {
    auto it = names.find(t->name());
    if (it == names.end())
      it = names.emplace(t->name(), "V" + std::to_string(names.size())).first;
    return Term::var(it->second, t->var_type(), t->kind());
  }
  if (t->args().empty()) return t;
  std::vector<TermPtr> args;
  args.reserve(t->args().size());
  for (const auto& a : t->args()) args.push_back(canonicalize_vars(a, names));
  std::vector<TypePtr> tys = t->ty_args();
  return Term::app(t->name(), std::move(tys), std::move(args));
}

// Deduplicates literals and renames variables to V0, V1, ... in
// first-occurrence order, so renamings apart never pile up and structurally
// equal clauses get equal keys.
RClause normalize(std::vector<Literal> lits, std::size_t age) {
  std::set<std::string> seen;
  RClause out;
  out.age = age;
  for (auto& lit : lits)
    if (seen.insert(literal_key(lit)).second) out.lits.push_back(std::move(lit));
  std::map<std::string, std::string> names;
  for (auto& lit : out.lits)
    for (auto& a : lit.args) a = canonicalize_vars(a, names);
  for (const auto& lit : out.lits) out.weight += literal_weight(lit);
  return out;
}

bool same_atom_shape(const Literal& a, const Literal& b) {
  if (a.is_eq != b.is_eq) return false;
  if (a.is_eq) return true;
  if (a.sym != b.sym || a.ty_args.size() != b.ty_args.size()) return false;
  for (std::size_t i = 0; i < a.ty_args.size(); ++i)
    if (!equal(a.ty_args[i], b.ty_args[i])) return false;
  return a.args.size() == b.args.size();
}

bool unify_atoms(const Signature& sig, const Literal& a, const Literal& b, TermSubst& sub) {
  if (!same_atom_shape(a, b)) return false;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!unify_terms(sig, a.args[i], b.args[i], sub)) return false;
  return true;
}

// One-sided matching for subsumption: variables of `pattern` bind rigidly
// against `target`, respecting sorts.
bool match_term(const Signature& sig, const TermPtr& pattern, const TermPtr& target,
                TermSubst& sub) {
  if (pattern->is_var()) {
    auto it = sub.find(pattern->name());
    if (it != sub.end()) return equal(it->second, target);
    TypePtr target_ty = target->is_var() ? target->var_type() : term_type(sig, target);
    if (!equal(pattern->var_type(), target_ty)) return false;
    sub.emplace(pattern->name(), target);
    return true;
  }
  if (target->is_var()) return false;
  if (pattern->name() != target->name() || pattern->args().size() != target->args().size())
    return false;
  for (std::size_t i = 0; i < pattern->args().size(); ++i)
    if (!match_term(sig, pattern->args()[i], target->args()[i], sub)) return false;
  return true;
}

bool match_literal(const Signature& sig, const Literal& pattern, const Literal& target,
                   TermSubst& sub) {
  if (pattern.positive != target.positive || !same_atom_shape(pattern, target)) return false;
  for (std::size_t i = 0; i < pattern.args.size(); ++i)
    if (!match_term(sig, pattern.args[i], target.args[i], sub)) return false;
  return true;
}

// Theta-subsumption with injective literal mapping.
bool subsumes(const Signature& sig, const RClause& c, const RClause& d) {
  if (c.lits.size() > d.lits.size() || c.weight > d.weight) return false;
  std::vector<bool> used(d.lits.size(), false);
  TermSubst sub;
  std::function<bool(std::size_t)> rec = [&](std::size_t i) -> bool {
    if (i == c.lits.size()) return true;
    for (std::size_t j = 0; j < d.lits.size(); ++j) {
      if (used[j]) continue;
      TermSubst saved = sub;
      if (match_literal(sig, c.lits[i], d.lits[j], sub)) {
        used[j] = true;
        if (rec(i + 1)) return true;
        used[j] = false;
      }
      sub = std::move(saved);
    }
    return false;
  };
  return rec(0);
}

// Sorts over which equality axioms are needed: the types of equality
// literal sides plus everything reachable through symbol signatures.
std::vector<TypePtr> equality_sorts(const ClauseSet& cs) {
  std::map<std::string, TypePtr> sorts;
  auto add = [&](const TypePtr& ty) { sorts.emplace(ty->str(), ty); };
  for (const auto& [name, fs] : cs.sig.funs) {
    if (!fs.ty_vars.empty()) continue;
    for (const auto& ty : fs.arg_types) add(ty);
    add(fs.result);
  }
  for (const auto& [name, ps] : cs.sig.preds) {
    if (!ps.ty_vars.empty()) continue;
    for (const auto& ty : ps.arg_types) add(ty);
  }
  std::vector<TypePtr> out;
  for (const auto& [key, ty] : sorts) out.push_back(ty);
  return out;
}

std::vector<RClause> equality_axioms(const ClauseSet& cs, bool full) {
  std::vector<RClause> out;
  auto var = [](const std::string& name, const TypePtr& ty) {
    return Term::var(name, ty, VarKind::universal);
  };
  auto eq = [](bool pos, TermPtr l, TermPtr r) {
    Literal lit;
    lit.positive = pos;
    lit.is_eq = true;
    lit.args = {std::move(l), std::move(r)};
    return lit;
  };
  for (const auto& ty : equality_sorts(cs)) {
    out.push_back(normalize({eq(true, var("X", ty), var("X", ty))}, 0));
    if (!full) continue;
    out.push_back(
        normalize({eq(false, var("X", ty), var("Y", ty)), eq(true, var("Y", ty), var("X", ty))},
                  0));
    out.push_back(normalize({eq(false, var("X", ty), var("Y", ty)),
                             eq(false, var("Y", ty), var("Z", ty)),
                             eq(true, var("X", ty), var("Z", ty))},
                            0));
  }
  if (!full) return out;
  for (const auto& [fname, fs] : cs.sig.funs) {
    if (!fs.ty_vars.empty()) continue; // ground instances only
    for (std::size_t i = 0; i < fs.arg_types.size(); ++i) {
      std::vector<TermPtr> xs, ys;
      for (std::size_t j = 0; j < fs.arg_types.size(); ++j) {
        xs.push_back(var("X" + std::to_string(j + 1), fs.arg_types[j]));
        ys.push_back(j == i ? var("Y", fs.arg_types[j]) : xs.back());
      }
      out.push_back(normalize({eq(false, xs[i], ys[i]),
                               eq(true, Term::app(fname, {}, xs), Term::app(fname, {}, ys))},
                              0));
    }
  }
  for (const auto& [pname, ps] : cs.sig.preds) {
    if (!ps.ty_vars.empty()) continue;
    for (std::size_t i = 0; i < ps.arg_types.size(); ++i) {
      std::vector<TermPtr> xs, ys;
      for (std::size_t j = 0; j < ps.arg_types.size(); ++j) {
        xs.push_back(var("X" + std::to_string(j + 1), ps.arg_types[j]));
        ys.push_back(j == i ? var("Y", ps.arg_types[j]) : xs.back());
      }
      Literal neg_p, pos_p;
      neg_p.positive = false;
      neg_p.sym = pname;
      neg_p.args = xs;
      pos_p.positive = true;
      pos_p.sym = pname;
      pos_p.args = ys;
      out.push_back(normalize({eq(false, xs[i], ys[i]), neg_p, pos_p}, 0));
    }
  }
  return out;
}

// Forward demodulation: rewriting with active positive unit equalities
// whose instantiated left side is strictly heavier than the right side.
struct Demodulator {
  const Signature& sig;
  std::vector<std::pair<TermPtr, TermPtr>> rules; // oriented l -> r

  void add_unit(const Literal& lit) {
    for (int o = 0; o < 2; ++o) {
      // Rule variables are renamed apart from every target clause.
      TermPtr l = rename_term_vars(lit.args[o], "#d");
      TermPtr r = rename_term_vars(lit.args[1 - o], "#d");
      if (l->is_var()) continue;
      std::set<std::string> lv, rv;
      collect_vars(l, lv);
      collect_vars(r, rv);
      bool closed = true;
      for (const auto& v : rv)
        if (!lv.count(v)) closed = false;
      if (closed) rules.emplace_back(l, r);
    }
  }

  static void collect_vars(const TermPtr& t, std::set<std::string>& out) {
    if (t->is_var()) {
      out.insert(t->name());
      return;
    }
    for (const auto& a : t->args()) collect_vars(a, out);
  }

  TermPtr rewrite_once(const TermPtr& t, bool& changed) const {
    if (t->is_var()) return t;
    std::vector<TermPtr> args;
    args.reserve(t->args().size());
    for (const auto& a : t->args()) args.push_back(rewrite_once(a, changed));
    std::vector<TypePtr> tys = t->ty_args();
    TermPtr u = Term::app(t->name(), std::move(tys), std::move(args));
    for (const auto& [l, r] : rules) {
      TermSubst sub;
      if (!match_term(sig, l, u, sub)) continue;
      TermPtr replacement = subst_term(r, sub);
      if (term_size(replacement) < term_size(u)) {
        changed = true;
        return replacement;
      }
    }
    return u;
  }

  void demodulate(std::vector<Literal>& lits) const {
    if (rules.empty()) return;
    for (auto& lit : lits) {
      for (int round = 0; round < 64; ++round) {
        bool changed = false;
        for (auto& a : lit.args) a = rewrite_once(a, changed);
        if (!changed) break;
      }
    }
  }
};

bool has_equality(const ClauseSet& cs) {
  for (const auto& clause : cs.clauses)
    for (const auto& lit : clause.literals)
      if (lit.is_eq) return true;
  return false;
}

// All paramodulants of `from` (a positive equality, renamed apart) into the
// literals of `target`: for every non-variable subterm u of a target
// literal unifiable with one side of the equation, replace the occurrence
// by the other side and append the equation clause's remainder.
void paramod_into_term(const Signature& sig, const TermPtr& t, const TermPtr& from_side,
                       const TermPtr& to_side, const TermSubst& base,
                       std::vector<std::pair<TermPtr, TermSubst>>& out) {
  if (t->is_var()) return; // no paramodulation into variables
  {
    TermSubst sub = base;
    if (unify_terms(sig, from_side, t, sub)) out.emplace_back(to_side, std::move(sub));
  }
  for (std::size_t i = 0; i < t->args().size(); ++i) {
    std::vector<std::pair<TermPtr, TermSubst>> inner;
    paramod_into_term(sig, t->args()[i], from_side, to_side, base, inner);
    for (auto& [replacement, sub] : inner) {
      std::vector<TermPtr> args = t->args();
      args[i] = replacement;
      std::vector<TypePtr> tys = t->ty_args();
      out.emplace_back(Term::app(t->name(), std::move(tys), std::move(args)), std::move(sub));
    }
  }
}

void paramodulants(const Signature& sig, const std::vector<Literal>& eq_clause,
                   std::size_t eq_index, const std::vector<Literal>& target,
                   std::vector<std::vector<Literal>>& generated) {
  const Literal& eq_lit = eq_clause[eq_index];
  for (int orientation = 0; orientation < 2; ++orientation) {
    const TermPtr& from_side = eq_lit.args[orientation];
    const TermPtr& to_side = eq_lit.args[1 - orientation];
    if (from_side->is_var()) continue; // variable sides rewrite everything
    for (std::size_t li = 0; li < target.size(); ++li) {
      for (std::size_t ai = 0; ai < target[li].args.size(); ++ai) {
        std::vector<std::pair<TermPtr, TermSubst>> hits;
        paramod_into_term(sig, target[li].args[ai], from_side, to_side, {}, hits);
        for (auto& [replacement, sub] : hits) {
          std::vector<Literal> lits;
          for (std::size_t k = 0; k < target.size(); ++k) {
            Literal lit = target[k];
            if (k == li) lit.args[ai] = replacement;
            lits.push_back(subst_literal(lit, sub));
          }
          for (std::size_t k = 0; k < eq_clause.size(); ++k)
            if (k != eq_index) lits.push_back(subst_literal(eq_clause[k], sub));
          generated.push_back(std::move(lits));
        }
      }
    }
  }
}

struct WeightOrder {
  bool operator()(const RClause* a, const RClause* b) const {
    if (a->weight != b->weight) return a->weight > b->weight;
    return a->age > b->age;
  }
};

struct AgeOrder {
  bool operator()(const RClause* a, const RClause* b) const { return a->age > b->age; }
};

// Passive set with the usual pick-given ratio: mostly lightest-first, every
// ratio-th pick oldest-first, so heavy input clauses are not starved.
class Passive {
public:
  void push(RClause* c) {
    by_weight_.push(c);
    by_age_.push(c);
    ++live_;
  }

  bool empty() const { return live_ == 0; }

  RClause* pop() {
    bool by_age = (++picks_ % kRatio) == 0;
    RClause* c = by_age ? pop_from(by_age_) : pop_from(by_weight_);
    if (c != nullptr) {
      picked_.insert(c);
      --live_;
    }
    return c;
  }

private:
  static constexpr std::size_t kRatio = 4;

  template <typename Q>
  RClause* pop_from(Q& q) {
    while (!q.empty()) {
      RClause* c = q.top();
      q.pop();
      if (!picked_.count(c)) return c;
    }
    return nullptr;
  }

  std::priority_queue<RClause*, std::vector<RClause*>, WeightOrder> by_weight_;
  std::priority_queue<RClause*, std::vector<RClause*>, AgeOrder> by_age_;
  std::set<RClause*> picked_;
  std::size_t picks_ = 0;
  std::size_t live_ = 0;
};

} // namespace

RefuteResult refute(const ClauseSet& cs, std::size_t step_limit, EqualityHandling eq) {
  RefuteResult result;

  std::deque<RClause> storage;
  Passive passive;
  std::vector<RClause*> active;
  std::set<std::string> seen;
  std::size_t age = 0;

  Demodulator demod{cs.sig, {}};

  auto push_clause = [&](std::vector<Literal> lits) -> bool {
    if (eq == EqualityHandling::paramodulation) demod.demodulate(lits);
    RClause c = normalize(std::move(lits), age++);
    if (c.lits.empty()) return true; // refutation
    if (is_tautology(c.lits)) return false;
    std::string key = clause_key(c);
    if (!seen.insert(key).second) return false;
    for (const RClause* a : active)
      if (subsumes(cs.sig, *a, c)) return false;
    storage.push_back(std::move(c));
    passive.push(&storage.back());
    ++result.kept;
    return false;
  };

  for (const auto& clause : cs.clauses)
    if (push_clause(clause.literals)) {
      result.outcome = RefuteOutcome::refutation_found;
      return result;
    }
  bool with_equality = has_equality(cs);
  if (with_equality)
    for (const auto& ax : equality_axioms(cs, eq == EqualityHandling::congruence_axioms)) {
      std::vector<Literal> lits = ax.lits;
      if (push_clause(std::move(lits))) {
        result.outcome = RefuteOutcome::refutation_found;
        return result;
      }
    }

  while (!passive.empty()) {
    RClause* given = passive.pop();
    if (given == nullptr) break;
    bool redundant = false;
    for (const RClause* a : active)
      if (subsumes(cs.sig, *a, *given)) {
        redundant = true;
        break;
      }
    if (redundant) continue;
    active.push_back(given);
    if (eq == EqualityHandling::paramodulation && given->lits.size() == 1 &&
        given->lits[0].is_eq && given->lits[0].positive)
      demod.add_unit(given->lits[0]);

    // Factoring on the given clause.
    std::vector<std::vector<Literal>> generated;
    bool paramod = with_equality && eq == EqualityHandling::paramodulation;

    // Equality resolution on the given clause.
    if (paramod)
      for (std::size_t i = 0; i < given->lits.size(); ++i) {
        const Literal& lit = given->lits[i];
        if (!lit.is_eq || lit.positive) continue;
        TermSubst sub;
        if (!unify_terms(cs.sig, lit.args[0], lit.args[1], sub)) continue;
        std::vector<Literal> lits;
        for (std::size_t k = 0; k < given->lits.size(); ++k)
          if (k != i) lits.push_back(subst_literal(given->lits[k], sub));
        generated.push_back(std::move(lits));
      }
    for (std::size_t i = 0; i < given->lits.size(); ++i)
      for (std::size_t j = i + 1; j < given->lits.size(); ++j) {
        if (given->lits[i].positive != given->lits[j].positive) continue;
        TermSubst sub;
        if (!unify_atoms(cs.sig, given->lits[i], given->lits[j], sub)) continue;
        std::vector<Literal> lits;
        for (std::size_t k = 0; k < given->lits.size(); ++k)
          if (k != j) lits.push_back(subst_literal(given->lits[k], sub));
        generated.push_back(std::move(lits));
      }

    // Binary resolution against every active clause (including itself),
    // with the partner renamed apart. Positive restriction: one parent must
    // be a positive clause, which keeps the calculus refutationally
    // complete while taming the equality axioms.
    auto positive_clause = [](const std::vector<Literal>& lits) {
      for (const auto& lit : lits)
        if (!lit.positive) return false;
      return true;
    };
    bool given_positive = positive_clause(given->lits);
    for (const RClause* partner : active) {
      bool partner_positive = positive_clause(partner->lits);
      // Under the axiomatic route one parent must be positive, which keeps
      // the transitivity/congruence axioms from flooding the search.
      bool resolve_ok = paramod || given_positive || partner_positive;
      std::vector<Literal> partner_lits;
      partner_lits.reserve(partner->lits.size());
      for (const auto& lit : partner->lits) partner_lits.push_back(rename_literal(lit, "#p"));
      if (resolve_ok) {
        for (std::size_t i = 0; i < given->lits.size(); ++i) {
          for (std::size_t j = 0; j < partner_lits.size(); ++j) {
            if (given->lits[i].positive == partner_lits[j].positive) continue;
            TermSubst sub;
            if (!unify_atoms(cs.sig, given->lits[i], partner_lits[j], sub)) continue;
            std::vector<Literal> lits;
            for (std::size_t k = 0; k < given->lits.size(); ++k)
              if (k != i) lits.push_back(subst_literal(given->lits[k], sub));
            for (std::size_t k = 0; k < partner_lits.size(); ++k)
              if (k != j) lits.push_back(subst_literal(partner_lits[k], sub));
            generated.push_back(std::move(lits));
          }
        }
      }
      if (paramod) {
        // Paramodulate from the given clause into the partner and back.
        for (std::size_t i = 0; i < given->lits.size(); ++i)
          if (given->lits[i].is_eq && given->lits[i].positive)
            paramodulants(cs.sig, given->lits, i, partner_lits, generated);
        for (std::size_t j = 0; j < partner_lits.size(); ++j)
          if (partner_lits[j].is_eq && partner_lits[j].positive)
            paramodulants(cs.sig, partner_lits, j, given->lits, generated);
      }
    }

    for (auto& lits : generated) {
      if (++result.steps > step_limit) {
        result.outcome = RefuteOutcome::gave_up;
        return result;
      }
      if (push_clause(std::move(lits))) {
        result.outcome = RefuteOutcome::refutation_found;
        return result;
      }
    }
  }
  // Saturated without the empty clause: no refutation exists from these
  // clauses under this calculus, which we still report as gave_up since the
  // calculus is only refutation-complete with the added axioms.
  result.outcome = RefuteOutcome::gave_up;
  return result;
}

} // namespace polyenc
