// Shared test helpers: corpus loading, a deterministic generator of random
// well-typed problems, and the property suites shared between the unit
// tests and the acceptance runner.

#ifndef POLYENC_TESTS_SUPPORT_HPP
#define POLYENC_TESTS_SUPPORT_HPP

#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "polyenc/analysis.hpp"
#include "polyenc/ast.hpp"
#include "polyenc/tptp.hpp"
#include "polyenc/unify.hpp"

namespace polyenc::testing {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

#ifndef POLYENC_CORPUS_DIR
#define POLYENC_CORPUS_DIR "corpus"
#endif

inline std::string corpus_path(const std::string& name) {
  return std::string(POLYENC_CORPUS_DIR) + "/" + name;
}

inline Problem parse_text(const std::string& text, Level level, bool allow_reserved = false) {
  ParseOptions opts;
  opts.level = level;
  opts.allow_reserved = allow_reserved;
  return parse(text, opts).problem;
}

inline Problem load_corpus(const std::string& name, Level level) {
  return parse_text(read_file(corpus_path(name)), level);
}

// ---------------------------------------------------------------------------
// Random problems

class Gen {
public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::mt19937_64& rng() { return rng_; }

  std::size_t pick(std::size_t n) { // uniform in [0, n)
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_);
  }

  bool coin(double p = 0.5) { return std::uniform_real_distribution<>(0, 1)(rng_) < p; }

  // A small polymorphic signature over constructors d/0, e/0, k/1 and a
  // handful of function and predicate symbols with 0-2 type variables.
  Signature random_signature() {
    Signature sig;
    sig.level = Level::polymorphic;
    sig.type_ctors = {{"d", 0}, {"e", 0}, {"k", 1}};
    std::size_t n_funs = 2 + pick(3);
    for (std::size_t i = 0; i < n_funs; ++i) {
      FunSig fs;
      std::size_t n_ty = pick(3);
      for (std::size_t t = 0; t < n_ty; ++t) fs.ty_vars.push_back("A" + std::to_string(t));
      std::size_t n_args = pick(3);
      for (std::size_t a = 0; a < n_args; ++a)
        fs.arg_types.push_back(random_type(fs.ty_vars, 2));
      fs.result = random_type(fs.ty_vars, 2);
      sig.funs.emplace("f" + std::to_string(i), std::move(fs));
    }
    std::size_t n_preds = 1 + pick(2);
    for (std::size_t i = 0; i < n_preds; ++i) {
      PredSig ps;
      std::size_t n_ty = pick(2);
      for (std::size_t t = 0; t < n_ty; ++t) ps.ty_vars.push_back("A" + std::to_string(t));
      std::size_t n_args = 1 + pick(2);
      for (std::size_t a = 0; a < n_args; ++a)
        ps.arg_types.push_back(random_type(ps.ty_vars, 2));
      sig.preds.emplace("p" + std::to_string(i), std::move(ps));
    }
    return sig;
  }

  TypePtr random_type(const std::vector<std::string>& ty_vars, int depth) {
    if (!ty_vars.empty() && coin(0.4)) return Type::var(ty_vars[pick(ty_vars.size())]);
    switch (depth > 0 ? pick(3) : pick(2)) {
      case 0: return Type::app("d", {});
      case 1: return Type::app("e", {});
      default: return Type::app("k", {random_type(ty_vars, depth - 1)});
    }
  }

  TypePtr random_ground_type(int depth) { return random_type({}, depth); }

  // A random well-typed NNF sentence over the signature: a quantifier
  // prefix of 2-4 variables over the formula's type variables, then a small
  // and/or tree of literals.
  struct VarCtx {
    std::vector<std::pair<std::string, TypePtr>> vars;
    std::vector<std::string> ty_vars;
  };

  std::optional<TermPtr> term_of_type(const Signature& sig, const VarCtx& ctx,
                                      const TypePtr& ty, int depth) {
    std::vector<TermPtr> var_choices;
    for (const auto& [name, vty] : ctx.vars)
      if (equal(vty, ty))
        var_choices.push_back(Term::var(name, vty, VarKind::universal)); // kind fixed later
    if (!var_choices.empty() && (depth == 0 || coin(0.5)))
      return var_choices[pick(var_choices.size())];
    if (depth > 0) {
      // Try a function application whose result matches ty.
      std::vector<std::string> funs;
      for (const auto& [name, fs] : sig.funs) funs.push_back(name);
      for (std::size_t attempt = 0; attempt < 6; ++attempt) {
        const std::string& fname = funs[pick(funs.size())];
        const FunSig& fs = sig.funs.at(fname);
        auto rho = match_result(fs, ty);
        if (!rho) continue;
        std::vector<TypePtr> ty_args;
        bool ok = true;
        for (const auto& v : fs.ty_vars) {
          auto it = rho->find(v);
          if (it == rho->end()) {
            // Unconstrained (noninferable-in-result) variable: fill with a
            // type from the context.
            ty_args.push_back(context_type(ctx));
          } else {
            ty_args.push_back(it->second);
          }
        }
        TypeSubst full;
        for (std::size_t i = 0; i < fs.ty_vars.size(); ++i)
          full.emplace(fs.ty_vars[i], ty_args[i]);
        std::vector<TermPtr> args;
        for (const auto& at : fs.arg_types) {
          auto sub = term_of_type(sig, ctx, apply_type_subst(at, full), depth - 1);
          if (!sub) {
            ok = false;
            break;
          }
          args.push_back(*sub);
        }
        if (!ok) continue;
        return Term::app(fname, std::move(ty_args), std::move(args));
      }
    }
    if (!var_choices.empty()) return var_choices[pick(var_choices.size())];
    return std::nullopt;
  }

  TypePtr context_type(const VarCtx& ctx) {
    if (!ctx.ty_vars.empty() && coin(0.3)) return Type::var(ctx.ty_vars[pick(ctx.ty_vars.size())]);
    if (!ctx.vars.empty() && coin(0.5)) return ctx.vars[pick(ctx.vars.size())].second;
    return random_ground_type(1);
  }

  // The declared result's variables are the flexible side; the requested
  // type's variables (the sentence's own) are rigid.
  std::optional<TypeSubst> match_result(const FunSig& fs, const TypePtr& ty) {
    return match_type(fs.result, ty);
  }

  std::optional<FormulaPtr> random_literal(const Signature& sig, const VarCtx& ctx) {
    if (coin(0.45)) {
      // Equality literal over a context type.
      TypePtr ty = context_type(ctx);
      auto lhs = term_of_type(sig, ctx, ty, 1 + static_cast<int>(pick(2)));
      auto rhs = term_of_type(sig, ctx, ty, pick(2));
      if (!lhs || !rhs) return std::nullopt;
      return Formula::eq_lit(coin(0.7), *lhs, *rhs);
    }
    std::vector<std::string> preds;
    for (const auto& [name, ps] : sig.preds) preds.push_back(name);
    const std::string& pname = preds[pick(preds.size())];
    const PredSig& ps = sig.preds.at(pname);
    std::vector<TypePtr> ty_args;
    TypeSubst rho;
    for (const auto& v : ps.ty_vars) {
      TypePtr ty = context_type(ctx);
      ty_args.push_back(ty);
      rho.emplace(v, ty);
    }
    std::vector<TermPtr> args;
    for (const auto& at : ps.arg_types) {
      auto t = term_of_type(sig, ctx, apply_type_subst(at, rho), pick(2));
      if (!t) return std::nullopt;
      args.push_back(*t);
    }
    return Formula::pred_lit(coin(0.7), pname, std::move(ty_args), std::move(args));
  }

  std::optional<FormulaPtr> random_body(const Signature& sig, const VarCtx& ctx, int depth) {
    if (depth == 0 || coin(0.4)) return random_literal(sig, ctx);
    auto l = random_body(sig, ctx, depth - 1);
    auto r = random_body(sig, ctx, depth - 1);
    if (!l || !r) return std::nullopt;
    return coin() ? Formula::conj(*l, *r) : Formula::disj(*l, *r);
  }

  // Sentence generation can fail for unlucky draws; callers retry.
  std::optional<FormulaPtr> random_sentence(const Signature& sig) {
    VarCtx ctx;
    std::size_t n_ty = pick(2);
    for (std::size_t i = 0; i < n_ty; ++i) ctx.ty_vars.push_back("B" + std::to_string(i));
    std::size_t n_vars = 2 + pick(3);
    std::vector<bool> existential;
    for (std::size_t i = 0; i < n_vars; ++i) {
      ctx.vars.emplace_back("X" + std::to_string(i), random_type(ctx.ty_vars, 1));
      existential.push_back(coin(0.3));
    }
    auto body = random_body(sig, ctx, 2);
    if (!body) return std::nullopt;
    FormulaPtr f = *body;
    f = fix_kinds(f, ctx, existential);
    for (std::size_t i = n_vars; i-- > 0;) {
      f = existential[i] ? Formula::exists(ctx.vars[i].first, ctx.vars[i].second, f)
                         : Formula::forall(ctx.vars[i].first, ctx.vars[i].second, f);
    }
    // Close over the type variables actually used.
    std::set<std::string> used = free_type_vars(f);
    for (auto it = ctx.ty_vars.rbegin(); it != ctx.ty_vars.rend(); ++it)
      if (used.count(*it)) f = Formula::forall_ty(*it, f);
    return f;
  }

  Problem random_problem(std::size_t n_sentences, std::size_t max_attempts = 200) {
    Problem p;
    p.sig = random_signature();
    std::size_t attempts = 0;
    while (p.sentences.size() < n_sentences && attempts++ < max_attempts) {
      auto f = random_sentence(p.sig);
      if (!f) continue;
      p.sentences.push_back(
          {"r" + std::to_string(p.sentences.size()), Role::axiom, *f});
    }
    return p;
  }

  InfRegistry random_registry(const Signature& sig) {
    InfRegistry inf;
    if (coin(0.6)) inf.declared.push_back(Type::app("k", {Type::var("A")}));
    if (coin(0.3)) inf.declared.push_back(Type::app("d", {}));
    (void)sig;
    return inf;
  }

private:
  // Rebuilds variable occurrences with the kind implied by their binder.
  FormulaPtr fix_kinds(const FormulaPtr& f, const VarCtx& ctx,
                       const std::vector<bool>& existential) {
    std::map<std::string, VarKind> kinds;
    for (std::size_t i = 0; i < ctx.vars.size(); ++i)
      kinds.emplace(ctx.vars[i].first,
                    existential[i] ? VarKind::existential : VarKind::universal);
    return map_kinds(f, kinds);
  }

  static TermPtr map_kinds(const TermPtr& t, const std::map<std::string, VarKind>& kinds) {
    if (t->is_var()) {
      auto it = kinds.find(t->name());
      return Term::var(t->name(), t->var_type(),
                       it == kinds.end() ? t->kind() : it->second);
    }
    std::vector<TermPtr> args;
    args.reserve(t->args().size());
    for (const auto& a : t->args()) args.push_back(map_kinds(a, kinds));
    std::vector<TypePtr> tys = t->ty_args();
    return Term::app(t->name(), std::move(tys), std::move(args));
  }

  static FormulaPtr map_kinds(const FormulaPtr& f, const std::map<std::string, VarKind>& kinds) {
    switch (f->kind()) {
      case FormulaKind::pred_lit: {
        std::vector<TermPtr> args;
        for (const auto& a : f->args()) args.push_back(map_kinds(a, kinds));
        std::vector<TypePtr> tys = f->ty_args();
        return Formula::pred_lit(f->positive(), f->sym(), std::move(tys), std::move(args));
      }
      case FormulaKind::eq_lit:
        return Formula::eq_lit(f->positive(), map_kinds(f->lhs_term(), kinds),
                               map_kinds(f->rhs_term(), kinds));
      case FormulaKind::conj:
        return Formula::conj(map_kinds(f->lhs(), kinds), map_kinds(f->rhs(), kinds));
      case FormulaKind::disj:
        return Formula::disj(map_kinds(f->lhs(), kinds), map_kinds(f->rhs(), kinds));
      case FormulaKind::forall_term:
        return Formula::forall(f->var(), f->var_type(), map_kinds(f->body(), kinds));
      case FormulaKind::exists_term:
        return Formula::exists(f->var(), f->var_type(), map_kinds(f->body(), kinds));
      case FormulaKind::forall_type:
        return Formula::forall_ty(f->var(), map_kinds(f->body(), kinds));
    }
    return f;
  }

  std::mt19937_64 rng_;
};

// Random ground instantiation of one sentence (strips the type prefix and
// substitutes ground types for its variables).
inline FormulaPtr ground_instance(Gen& gen, const FormulaPtr& f) {
  FormulaPtr body = f;
  TypeSubst rho;
  while (body->kind() == FormulaKind::forall_type) {
    rho.emplace(body->var(), gen.random_ground_type(1 + static_cast<int>(gen.pick(2))));
    body = body->body();
  }
  return apply_type_subst(body, rho);
}

} // namespace polyenc::testing

#endif
