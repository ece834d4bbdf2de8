#include "polyenc/encode.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

#include "polyenc/typing.hpp"
#include "polyenc/unify.hpp"

namespace polyenc {

std::string NameMint::mint(const std::string& key, const std::string& base) {
  auto it = assigned_.find(key);
  if (it != assigned_.end()) return it->second;
  std::string name = base;
  int i = 0;
  while (!taken_.insert(name).second) name = base + "_" + std::to_string(++i);
  assigned_.emplace(key, name);
  return name;
}

namespace {

std::string sanitize(const std::string& s) {
  std::string out;
  for (char c : s)
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') out.push_back(c);
  if (out.empty()) out = "s";
  return out;
}

void mangle_rec(const TypePtr& ty, std::string& out) {
  if (ty->is_var())
    throw InternalError("mangle_type_base: type variable in " + ty->str());
  out += sanitize(ty->name());
  for (const auto& a : ty->args()) {
    out += "_";
    mangle_rec(a, out);
  }
}

std::set<std::string> symbol_names(const Signature& sig) {
  std::set<std::string> out;
  for (const auto& [name, fs] : sig.funs) out.insert(name);
  for (const auto& [name, ps] : sig.preds) out.insert(name);
  return out;
}

std::set<std::string> sentence_names(const Problem& p) {
  std::set<std::string> out;
  for (const auto& nf : p.sentences) out.insert(nf.name);
  return out;
}

// Safe rendering of any type (ground or not) for axiom names.
std::string type_tag(const TypePtr& ty) {
  if (ty->is_var()) return sanitize(ty->name());
  std::string out = sanitize(ty->name());
  for (const auto& a : ty->args()) out += "_" + type_tag(a);
  return out;
}

std::vector<std::string> sorted_type_vars_of(const TypePtr& ty) {
  // First-occurrence order matches canonical renaming.
  std::vector<std::string> order;
  std::set<std::string> seen;
  std::function<void(const TypePtr&)> walk = [&](const TypePtr& t) {
    if (t->is_var()) {
      if (seen.insert(t->name()).second) order.push_back(t->name());
      return;
    }
    for (const auto& a : t->args()) walk(a);
  };
  walk(ty);
  return order;
}

FormulaPtr close_type_vars(const std::vector<std::string>& ty_vars, FormulaPtr body) {
  for (auto it = ty_vars.rbegin(); it != ty_vars.rend(); ++it)
    body = Formula::forall_ty(*it, body);
  return body;
}

// ---------------------------------------------------------------------------
// Shared formula-walking scaffold: rebuilds a formula, delegating atoms and
// quantifiers to the concrete stage.

struct StageBase {
  const Problem& input;

  explicit StageBase(const Problem& p) : input(p) {}

  TypePtr type_of(const TermPtr& t) const {
    return t->is_var() ? t->var_type() : term_type(input.sig, t);
  }
};

// ---------------------------------------------------------------------------
// Full type erasure

TermPtr erase_term(const TermPtr& t) {
  if (t->is_var()) return Term::var(t->name(), untyped_sort(), t->kind());
  std::vector<TermPtr> args;
  args.reserve(t->args().size());
  for (const auto& a : t->args()) args.push_back(erase_term(a));
  return Term::app(t->name(), {}, std::move(args));
}

FormulaPtr erase_formula(const FormulaPtr& f) {
  switch (f->kind()) {
    case FormulaKind::pred_lit: {
      std::vector<TermPtr> args;
      args.reserve(f->args().size());
      for (const auto& a : f->args()) args.push_back(erase_term(a));
      return Formula::pred_lit(f->positive(), f->sym(), {}, std::move(args));
    }
    case FormulaKind::eq_lit:
      return Formula::eq_lit(f->positive(), erase_term(f->lhs_term()),
                             erase_term(f->rhs_term()));
    case FormulaKind::conj:
      return Formula::conj(erase_formula(f->lhs()), erase_formula(f->rhs()));
    case FormulaKind::disj:
      return Formula::disj(erase_formula(f->lhs()), erase_formula(f->rhs()));
    case FormulaKind::forall_term:
      return Formula::forall(f->var(), untyped_sort(), erase_formula(f->body()));
    case FormulaKind::exists_term:
      return Formula::exists(f->var(), untyped_sort(), erase_formula(f->body()));
    case FormulaKind::forall_type:
      return erase_formula(f->body());
  }
  throw InternalError("erase_formula: unreachable");
}

} // namespace

std::string mangle_type_base(const TypePtr& ty) {
  std::string out;
  mangle_rec(ty, out);
  return out;
}

Problem EncodedProblem::to_problem() const {
  Problem p;
  p.sig = target_sig;
  p.sentences.reserve(axioms.size() + translated.size());
  for (const auto& nf : axioms) p.sentences.push_back(nf);
  for (const auto& nf : translated) p.sentences.push_back(nf);
  return p;
}

EncodedProblem erase_types(const Problem& p) {
  if (p.sig.level == Level::untyped)
    throw InternalError("erase: input is already untyped");
  EncodedProblem out;
  out.target_sig.level = Level::untyped;
  out.target_sig.type_ctors.emplace(kUntypedSort, 0);
  for (const auto& [name, fs] : p.sig.funs) {
    FunSig sig;
    sig.arg_types.assign(fs.arg_types.size(), untyped_sort());
    sig.result = untyped_sort();
    out.target_sig.funs.emplace(name, std::move(sig));
  }
  for (const auto& [name, ps] : p.sig.preds) {
    PredSig sig;
    sig.arg_types.assign(ps.arg_types.size(), untyped_sort());
    out.target_sig.preds.emplace(name, std::move(sig));
  }
  for (const auto& nf : p.sentences)
    out.translated.push_back({nf.name, nf.role, erase_formula(nf.formula)});
  return out;
}

// ---------------------------------------------------------------------------
// Type arguments

namespace {

struct ArgsStage : StageBase {
  ArgFilter filter;
  ArgClassification classes;
  std::map<std::string, std::string> ctor_syms;

  ArgsStage(const Problem& p, ArgFilter f) : StageBase(p), filter(f) {
    classes = classify_args(p.sig);
  }

  std::set<std::size_t> filter_of(const std::string& sym, std::size_t n_ty) const {
    // Filters are fixed to {1} for the distinguished tag and guard symbols.
    if (sym == kTagSymbol || sym == kGuardSymbol) return {1};
    std::set<std::size_t> out;
    switch (filter) {
      case ArgFilter::none:
        return out;
      case ArgFilter::full:
        for (std::size_t i = 1; i <= n_ty; ++i) out.insert(i);
        return out;
      case ArgFilter::phan:
        return classes.by_symbol.at(sym).phantom;
      case ArgFilter::ninf:
        return classes.by_symbol.at(sym).noninferable;
    }
    return out;
  }

  TermPtr tr(const TermPtr& t) const {
    if (t->is_var()) return t;
    std::vector<TermPtr> args;
    for (std::size_t i : filter_of(t->name(), t->ty_args().size()))
      args.push_back(type_to_term(t->ty_args()[i - 1], ctor_syms));
    for (const auto& a : t->args()) args.push_back(tr(a));
    std::vector<TypePtr> tys = t->ty_args();
    return Term::app(t->name(), std::move(tys), std::move(args));
  }

  FormulaPtr tr(const FormulaPtr& f) const {
    switch (f->kind()) {
      case FormulaKind::pred_lit: {
        std::vector<TermPtr> args;
        for (std::size_t i : filter_of(f->sym(), f->ty_args().size()))
          args.push_back(type_to_term(f->ty_args()[i - 1], ctor_syms));
        for (const auto& a : f->args()) args.push_back(tr(a));
        std::vector<TypePtr> tys = f->ty_args();
        return Formula::pred_lit(f->positive(), f->sym(), std::move(tys), std::move(args));
      }
      case FormulaKind::eq_lit:
        return Formula::eq_lit(f->positive(), tr(f->lhs_term()), tr(f->rhs_term()));
      case FormulaKind::conj:
        return Formula::conj(tr(f->lhs()), tr(f->rhs()));
      case FormulaKind::disj:
        return Formula::disj(tr(f->lhs()), tr(f->rhs()));
      case FormulaKind::forall_term:
        return Formula::forall(f->var(), f->var_type(), tr(f->body()));
      case FormulaKind::exists_term:
        return Formula::exists(f->var(), f->var_type(), tr(f->body()));
      case FormulaKind::forall_type:
        throw InternalError("args stage: type quantifier below the prefix");
    }
    throw InternalError("args stage: unreachable");
  }

  // Keeps the type-quantifier prefix on top and inserts the corresponding
  // theta-typed term quantifiers directly beneath it.
  FormulaPtr tr_sentence(const FormulaPtr& f) const {
    std::vector<std::string> prefix;
    FormulaPtr body = f;
    while (body->kind() == FormulaKind::forall_type) {
      prefix.push_back(body->var());
      body = body->body();
    }
    FormulaPtr out = tr(body);
    for (auto it = prefix.rbegin(); it != prefix.rend(); ++it)
      out = Formula::forall(type_var_term_name(*it), theta_type(), out);
    for (auto it = prefix.rbegin(); it != prefix.rend(); ++it)
      out = Formula::forall_ty(*it, out);
    return out;
  }
};

} // namespace

EncodedProblem add_type_args(const Problem& p, ArgFilter filter) {
  if (p.sig.level != Level::polymorphic)
    throw InternalError("type-arguments stage requires polymorphic input");
  ArgsStage stage(p, filter);

  EncodedProblem out;
  out.target_sig = p.sig;
  out.target_sig.type_ctors.emplace(kThetaCtor, 0);
  NameMint mint(symbol_names(p.sig));
  for (const auto& [ctor, arity] : p.sig.type_ctors) {
    if (ctor == kThetaCtor) continue;
    std::string sym = mint.mint("ctor:" + ctor, ctor);
    stage.ctor_syms.emplace(ctor, sym);
    FunSig fs;
    fs.arg_types.assign(arity, theta_type());
    fs.result = theta_type();
    out.target_sig.funs.emplace(sym, std::move(fs));
  }
  for (auto& [name, fs] : out.target_sig.funs) {
    if (!stage.input.sig.funs.count(name)) continue; // minted constructor symbols
    auto idx = stage.filter_of(name, fs.ty_vars.size());
    std::vector<TypePtr> args(idx.size(), theta_type());
    args.insert(args.end(), fs.arg_types.begin(), fs.arg_types.end());
    fs.arg_types = std::move(args);
  }
  for (auto& [name, ps] : out.target_sig.preds) {
    auto idx = stage.filter_of(name, ps.ty_vars.size());
    std::vector<TypePtr> args(idx.size(), theta_type());
    args.insert(args.end(), ps.arg_types.begin(), ps.arg_types.end());
    ps.arg_types = std::move(args);
  }
  for (const auto& nf : p.sentences)
    out.translated.push_back({nf.name, nf.role, stage.tr_sentence(nf.formula)});
  return out;
}

// ---------------------------------------------------------------------------
// Distinguished protector symbols

namespace {

// Uniform handle for t<sigma>(u) / g<sigma>(u) across the two levels: the
// polymorphic variants use a single binary distinguished symbol, the
// monomorphic ones a per-type unary family.
struct Protectors {
  bool poly;
  bool guard; // else tag
  NameMint mint;
  std::map<std::string, std::string> family; // ground type str -> symbol
  Signature* sig;                            // extended as symbols are minted

  Protectors(bool poly, bool guard, Signature* sig)
      : poly(poly), guard(guard), mint(symbol_names(*sig)), sig(sig) {
    if (poly) {
      if (guard) {
        PredSig ps;
        ps.ty_vars = {"A"};
        ps.arg_types = {Type::var("A")};
        sig->preds.emplace(kGuardSymbol, std::move(ps));
      } else {
        FunSig fs;
        fs.ty_vars = {"A"};
        fs.arg_types = {Type::var("A")};
        fs.result = Type::var("A");
        sig->funs.emplace(kTagSymbol, std::move(fs));
      }
    }
  }

  std::string symbol_for(const TypePtr& ty) {
    if (poly) return guard ? kGuardSymbol : kTagSymbol;
    std::string key = ty->str();
    auto it = family.find(key);
    if (it != family.end()) return it->second;
    std::string base = std::string(guard ? kGuardSymbol : kTagSymbol) + "_" +
                       mangle_type_base(ty);
    std::string sym = mint.mint(key, base);
    family.emplace(key, sym);
    if (guard) {
      PredSig ps;
      ps.arg_types = {ty};
      sig->preds.emplace(sym, std::move(ps));
    } else {
      FunSig fs;
      fs.arg_types = {ty};
      fs.result = ty;
      sig->funs.emplace(sym, std::move(fs));
    }
    return sym;
  }

  TermPtr tag(const TypePtr& ty, const TermPtr& t) {
    std::string sym = symbol_for(ty);
    std::vector<TypePtr> tys;
    if (poly) tys.push_back(ty);
    return Term::app(sym, std::move(tys), {t});
  }

  FormulaPtr guard_atom(bool positive, const TypePtr& ty, const TermPtr& t) {
    std::string sym = symbol_for(ty);
    std::vector<TypePtr> tys;
    if (poly) tys.push_back(ty);
    return Formula::pred_lit(positive, sym, std::move(tys), {t});
  }

  FormulaPtr tag_identity(const TypePtr& ty, const TermPtr& t) {
    return Formula::eq_lit(true, tag(ty, t), t);
  }
};

// Fresh universal argument variables X1..Xn for a symbol's typing axiom.
std::vector<TermPtr> axiom_arg_vars(const FunSig& fs) {
  std::vector<TermPtr> out;
  for (std::size_t i = 0; i < fs.arg_types.size(); ++i)
    out.push_back(Term::var("X" + std::to_string(i + 1), fs.arg_types[i],
                            VarKind::universal));
  return out;
}

std::vector<TypePtr> own_ty_args(const FunSig& fs) {
  std::vector<TypePtr> out;
  for (const auto& v : fs.ty_vars) out.push_back(Type::var(v));
  return out;
}

FormulaPtr close_axiom(const FunSig& fs, const std::vector<TermPtr>& vars, FormulaPtr body) {
  for (std::size_t i = vars.size(); i-- > 0;)
    body = Formula::forall(vars[i]->name(), fs.arg_types[i], body);
  return close_type_vars(fs.ty_vars, body);
}

// ---------------------------------------------------------------------------
// Traditional tags and guards

struct TagsTradStage : StageBase {
  Protectors* prot;

  TagsTradStage(const Problem& p, Protectors* prot) : StageBase(p), prot(prot) {}

  TermPtr tr(const TermPtr& t) const {
    if (t->is_var()) return prot->tag(t->var_type(), t);
    std::vector<TermPtr> args;
    args.reserve(t->args().size());
    for (const auto& a : t->args()) args.push_back(tr(a));
    std::vector<TypePtr> tys = t->ty_args();
    TermPtr app = Term::app(t->name(), std::move(tys), std::move(args));
    return prot->tag(type_of(t), app);
  }

  FormulaPtr tr(const FormulaPtr& f) const {
    switch (f->kind()) {
      case FormulaKind::pred_lit: {
        std::vector<TermPtr> args;
        for (const auto& a : f->args()) args.push_back(tr(a));
        std::vector<TypePtr> tys = f->ty_args();
        return Formula::pred_lit(f->positive(), f->sym(), std::move(tys), std::move(args));
      }
      case FormulaKind::eq_lit:
        return Formula::eq_lit(f->positive(), tr(f->lhs_term()), tr(f->rhs_term()));
      case FormulaKind::conj:
        return Formula::conj(tr(f->lhs()), tr(f->rhs()));
      case FormulaKind::disj:
        return Formula::disj(tr(f->lhs()), tr(f->rhs()));
      case FormulaKind::forall_term:
        return Formula::forall(f->var(), f->var_type(), tr(f->body()));
      case FormulaKind::exists_term:
        return Formula::exists(f->var(), f->var_type(), tr(f->body()));
      case FormulaKind::forall_type:
        return Formula::forall_ty(f->var(), tr(f->body()));
    }
    throw InternalError("tags stage: unreachable");
  }
};

} // namespace

EncodedProblem tags_traditional(const Problem& p) {
  if (p.sig.level == Level::untyped)
    throw InternalError("tags stage requires typed input");
  EncodedProblem out;
  out.target_sig = p.sig;
  Protectors prot(p.sig.level == Level::polymorphic, false, &out.target_sig);
  TagsTradStage stage(p, &prot);
  for (const auto& nf : p.sentences)
    out.translated.push_back({nf.name, nf.role, stage.tr(nf.formula)});
  return out;
}

namespace {

struct GuardsTradStage : StageBase {
  Protectors* prot;

  GuardsTradStage(const Problem& p, Protectors* prot) : StageBase(p), prot(prot) {}

  FormulaPtr tr(const FormulaPtr& f) const {
    switch (f->kind()) {
      case FormulaKind::pred_lit:
      case FormulaKind::eq_lit:
        return f;
      case FormulaKind::conj:
        return Formula::conj(tr(f->lhs()), tr(f->rhs()));
      case FormulaKind::disj:
        return Formula::disj(tr(f->lhs()), tr(f->rhs()));
      case FormulaKind::forall_term: {
        TermPtr v = Term::var(f->var(), f->var_type(), VarKind::universal);
        return Formula::forall(
            f->var(), f->var_type(),
            Formula::disj(prot->guard_atom(false, f->var_type(), v), tr(f->body())));
      }
      case FormulaKind::exists_term: {
        TermPtr v = Term::var(f->var(), f->var_type(), VarKind::existential);
        return Formula::exists(
            f->var(), f->var_type(),
            Formula::conj(prot->guard_atom(true, f->var_type(), v), tr(f->body())));
      }
      case FormulaKind::forall_type:
        return Formula::forall_ty(f->var(), tr(f->body()));
    }
    throw InternalError("guards stage: unreachable");
  }
};

void add_guard_fun_axioms(const Problem& p, Protectors& prot, NameMint& names,
                          EncodedProblem& out, const CoverAssignment* covers) {
  for (const auto& [fname, fs] : p.sig.funs) {
    std::vector<TermPtr> vars = axiom_arg_vars(fs);
    std::vector<FormulaPtr> lits;
    for (std::size_t j = 0; j < vars.size(); ++j) {
      if (covers && !covers->at(fname).count(j + 1)) continue;
      lits.push_back(prot.guard_atom(false, fs.arg_types[j], vars[j]));
    }
    TermPtr app = Term::app(fname, own_ty_args(fs), vars);
    lits.push_back(prot.guard_atom(true, fs.result, app));
    FormulaPtr body = Formula::disj_all(lits);
    out.axioms.push_back({names.mint("guard:" + fname, "ax_guard_" + sanitize(fname)),
                          Role::axiom, close_axiom(fs, vars, body)});
  }
}

FormulaPtr poly_inhabitation(Protectors& prot, bool tag_form) {
  TermPtr v = Term::var("X", Type::var("A"), VarKind::existential);
  FormulaPtr body = tag_form ? prot.tag_identity(Type::var("A"), v)
                             : prot.guard_atom(true, Type::var("A"), v);
  return Formula::forall_ty("A", Formula::exists("X", Type::var("A"), body));
}

// Every type of the (finite) monomorphic signature.
std::vector<TypePtr> signature_types(const Signature& sig) {
  std::vector<TypePtr> out;
  for (const auto& [name, arity] : sig.type_ctors)
    if (arity == 0 && name != kThetaCtor && name != kUntypedSort)
      out.push_back(Type::app(name, {}));
  return out;
}

} // namespace

EncodedProblem guards_traditional(const Problem& p) {
  if (p.sig.level == Level::untyped)
    throw InternalError("guards stage requires typed input");
  bool poly = p.sig.level == Level::polymorphic;
  EncodedProblem out;
  out.target_sig = p.sig;
  Protectors prot(poly, true, &out.target_sig);
  GuardsTradStage stage(p, &prot);
  NameMint names(sentence_names(p));
  add_guard_fun_axioms(p, prot, names, out, nullptr);
  if (poly) {
    out.axioms.push_back(
        {names.mint("inhab", "ax_guard_exists"), Role::axiom, poly_inhabitation(prot, false)});
  } else {
    for (const auto& ty : signature_types(p.sig)) {
      TermPtr v = Term::var("X", ty, VarKind::existential);
      FormulaPtr body = Formula::exists("X", ty, prot.guard_atom(true, ty, v));
      out.axioms.push_back({names.mint("inhab:" + ty->str(),
                                       "ax_guard_exists_" + type_tag(ty)),
                            Role::axiom, body});
    }
  }
  for (const auto& nf : p.sentences)
    out.translated.push_back({nf.name, nf.role, stage.tr(nf.formula)});
  return out;
}

// ---------------------------------------------------------------------------
// Cover-based tags and guards

namespace {

struct TagsCoverStage : StageBase {
  Protectors* prot;
  const CoverAssignment& covers;

  TagsCoverStage(const Problem& p, Protectors* prot, const CoverAssignment& covers)
      : StageBase(p), prot(prot), covers(covers) {}

  TermPtr cover_protect(const std::string& sym, std::size_t pos1, const TermPtr& t) const {
    auto it = covers.find(sym);
    bool in_cover = it != covers.end() && it->second.count(pos1);
    if (in_cover && t->is_var() && t->kind() == VarKind::universal)
      return prot->tag(t->var_type(), t);
    return t;
  }

  TermPtr tr(const TermPtr& t) const {
    if (t->is_var()) return t;
    std::vector<TermPtr> args;
    for (std::size_t j = 0; j < t->args().size(); ++j)
      args.push_back(cover_protect(t->name(), j + 1, tr(t->args()[j])));
    std::vector<TypePtr> tys = t->ty_args();
    return Term::app(t->name(), std::move(tys), std::move(args));
  }

  TermPtr tr_eq_side(const TermPtr& t) const {
    TermPtr u = tr(t);
    if (u->is_var() && u->kind() == VarKind::universal) return prot->tag(u->var_type(), u);
    return u;
  }

  FormulaPtr tr(const FormulaPtr& f) const {
    switch (f->kind()) {
      case FormulaKind::pred_lit: {
        std::vector<TermPtr> args;
        for (std::size_t j = 0; j < f->args().size(); ++j)
          args.push_back(cover_protect(f->sym(), j + 1, tr(f->args()[j])));
        std::vector<TypePtr> tys = f->ty_args();
        return Formula::pred_lit(f->positive(), f->sym(), std::move(tys), std::move(args));
      }
      case FormulaKind::eq_lit:
        if (f->positive())
          return Formula::eq_lit(true, tr_eq_side(f->lhs_term()), tr_eq_side(f->rhs_term()));
        return Formula::eq_lit(false, tr(f->lhs_term()), tr(f->rhs_term()));
      case FormulaKind::conj:
        return Formula::conj(tr(f->lhs()), tr(f->rhs()));
      case FormulaKind::disj:
        return Formula::disj(tr(f->lhs()), tr(f->rhs()));
      case FormulaKind::forall_term:
        return Formula::forall(f->var(), f->var_type(), tr(f->body()));
      case FormulaKind::exists_term: {
        TermPtr v = Term::var(f->var(), f->var_type(), VarKind::existential);
        return Formula::exists(
            f->var(), f->var_type(),
            Formula::conj(prot->tag_identity(f->var_type(), v), tr(f->body())));
      }
      case FormulaKind::forall_type:
        return Formula::forall_ty(f->var(), tr(f->body()));
    }
    throw InternalError("cover tags stage: unreachable");
  }
};

} // namespace

EncodedProblem tags_cover(const Problem& p, const CoverAssignment& covers) {
  if (p.sig.level != Level::polymorphic)
    throw InternalError("cover-based tags require polymorphic input");
  EncodedProblem out;
  out.target_sig = p.sig;
  Protectors prot(true, false, &out.target_sig);
  TagsCoverStage stage(p, &prot, covers);
  NameMint names(sentence_names(p));
  for (const auto& [fname, fs] : p.sig.funs) {
    std::vector<TermPtr> vars = axiom_arg_vars(fs);
    std::vector<TermPtr> protected_vars;
    for (std::size_t j = 0; j < vars.size(); ++j)
      protected_vars.push_back(covers.at(fname).count(j + 1)
                                   ? prot.tag(fs.arg_types[j], vars[j])
                                   : vars[j]);
    TermPtr app = Term::app(fname, own_ty_args(fs), protected_vars);
    FormulaPtr body = Formula::eq_lit(true, prot.tag(fs.result, app), app);
    out.axioms.push_back({names.mint("tag:" + fname, "ax_tag_" + sanitize(fname)),
                          Role::axiom, close_axiom(fs, vars, body)});
  }
  out.axioms.push_back(
      {names.mint("inhab", "ax_tag_exists"), Role::axiom, poly_inhabitation(prot, true)});
  for (const auto& nf : p.sentences)
    out.translated.push_back({nf.name, nf.role, stage.tr(nf.formula)});
  return out;
}

namespace {

struct GuardsCoverStage : StageBase {
  Protectors* prot;
  const CoverAssignment& covers;

  GuardsCoverStage(const Problem& p, Protectors* prot, const CoverAssignment& covers)
      : StageBase(p), prot(prot), covers(covers) {}

  FormulaPtr tr(const FormulaPtr& f) const {
    switch (f->kind()) {
      case FormulaKind::pred_lit:
      case FormulaKind::eq_lit:
        return f;
      case FormulaKind::conj:
        return Formula::conj(tr(f->lhs()), tr(f->rhs()));
      case FormulaKind::disj:
        return Formula::disj(tr(f->lhs()), tr(f->rhs()));
      case FormulaKind::forall_term: {
        TypedVarSet uv = undercover_vars(f->body(), covers);
        bool undercover = uv.count({f->var(), f->var_type()}) != 0;
        FormulaPtr body = tr(f->body());
        if (undercover) {
          TermPtr v = Term::var(f->var(), f->var_type(), VarKind::universal);
          body = Formula::disj(prot->guard_atom(false, f->var_type(), v), body);
        }
        return Formula::forall(f->var(), f->var_type(), body);
      }
      case FormulaKind::exists_term: {
        TermPtr v = Term::var(f->var(), f->var_type(), VarKind::existential);
        return Formula::exists(
            f->var(), f->var_type(),
            Formula::conj(prot->guard_atom(true, f->var_type(), v), tr(f->body())));
      }
      case FormulaKind::forall_type:
        return Formula::forall_ty(f->var(), tr(f->body()));
    }
    throw InternalError("cover guards stage: unreachable");
  }
};

} // namespace

EncodedProblem guards_cover(const Problem& p, const CoverAssignment& covers) {
  if (p.sig.level != Level::polymorphic)
    throw InternalError("cover-based guards require polymorphic input");
  EncodedProblem out;
  out.target_sig = p.sig;
  Protectors prot(true, true, &out.target_sig);
  GuardsCoverStage stage(p, &prot, covers);
  NameMint names(sentence_names(p));
  add_guard_fun_axioms(p, prot, names, out, &covers);
  out.axioms.push_back(
      {names.mint("inhab", "ax_guard_exists"), Role::axiom, poly_inhabitation(prot, false)});
  for (const auto& nf : p.sentences)
    out.translated.push_back({nf.name, nf.role, stage.tr(nf.formula)});
  return out;
}

// ---------------------------------------------------------------------------
// Monotonicity-based tags and guards

namespace {

struct LightCtx : StageBase {
  Protectors* prot;
  const MonoVerdicts& verdicts;

  LightCtx(const Problem& p, Protectors* prot, const MonoVerdicts& verdicts)
      : StageBase(p), prot(prot), verdicts(verdicts) {}

  bool mono(const TypePtr& ty) const { return verdicts.monotonic(ty); }
};

struct TagsLightStage : LightCtx {
  using LightCtx::LightCtx;

  TermPtr ct(const TermPtr& t) const {
    TypePtr ty = type_of(t);
    return mono(ty) ? t : prot->tag(ty, t);
  }

  TermPtr tr(const TermPtr& t) const {
    if (t->is_var()) return ct(t);
    std::vector<TermPtr> args;
    for (const auto& a : t->args()) args.push_back(tr(a));
    std::vector<TypePtr> tys = t->ty_args();
    return ct(Term::app(t->name(), std::move(tys), std::move(args)));
  }

  FormulaPtr tr(const FormulaPtr& f) const {
    switch (f->kind()) {
      case FormulaKind::pred_lit: {
        std::vector<TermPtr> args;
        for (const auto& a : f->args()) args.push_back(tr(a));
        std::vector<TypePtr> tys = f->ty_args();
        return Formula::pred_lit(f->positive(), f->sym(), std::move(tys), std::move(args));
      }
      case FormulaKind::eq_lit:
        return Formula::eq_lit(f->positive(), tr(f->lhs_term()), tr(f->rhs_term()));
      case FormulaKind::conj:
        return Formula::conj(tr(f->lhs()), tr(f->rhs()));
      case FormulaKind::disj:
        return Formula::disj(tr(f->lhs()), tr(f->rhs()));
      case FormulaKind::forall_term:
        return Formula::forall(f->var(), f->var_type(), tr(f->body()));
      case FormulaKind::exists_term:
        return Formula::exists(f->var(), f->var_type(), tr(f->body()));
      case FormulaKind::forall_type:
        return Formula::forall_ty(f->var(), tr(f->body()));
    }
    throw InternalError("light tags stage: unreachable");
  }
};

// The V_Phi axioms: t<sigma>(X) = X, or g<sigma>(X), for sigma in the cap.
void add_cap_axioms(Protectors& prot, const std::vector<TypePtr>& cap_V, NameMint& names,
                    bool tag_form, EncodedProblem& out) {
  for (const auto& sigma : cap_V) {
    TermPtr v = Term::var("X", sigma, VarKind::universal);
    FormulaPtr body =
        tag_form ? prot.tag_identity(sigma, v) : prot.guard_atom(true, sigma, v);
    body = Formula::forall("X", sigma, body);
    body = close_type_vars(sorted_type_vars_of(sigma), body);
    std::string base = (tag_form ? "ax_tag_id_" : "ax_guard_true_") + type_tag(sigma);
    out.axioms.push_back({names.mint("cap:" + sigma->str(), base), Role::axiom, body});
  }
}

bool instance_of_some_result(const Signature& sig, const TypePtr& sigma) {
  for (const auto& [fname, fs] : sig.funs) {
    if (fname == kTagSymbol) continue;
    TypePtr result = rename_vars_apart(fs.result, "f#");
    if (is_instance_of(sigma, result)) return true;
  }
  return false;
}

// Typing axioms shared by the featherweight tags and the light/feather
// guards: per-function axioms for possibly nonmonotonic result types and
// inhabitation witnesses for uncovered possibly nonmonotonic types.
void add_mono_typing_axioms(const Problem& p, Protectors& prot, const MonoVerdicts& verdicts,
                            NameMint& names, bool tag_form, EncodedProblem& out) {
  for (const auto& [fname, fs] : p.sig.funs) {
    if (verdicts.monotonic(fs.result)) continue;
    std::vector<TermPtr> vars = axiom_arg_vars(fs);
    TermPtr app = Term::app(fname, own_ty_args(fs), vars);
    FormulaPtr body = tag_form ? prot.tag_identity(fs.result, app)
                               : prot.guard_atom(true, fs.result, app);
    std::string base = (tag_form ? "ax_tag_" : "ax_guard_") + sanitize(fname);
    out.axioms.push_back(
        {names.mint("fn:" + fname, base), Role::axiom, close_axiom(fs, vars, body)});
  }
  for (const auto& sigma : types_of(p)) {
    if (verdicts.monotonic(sigma)) continue;
    if (instance_of_some_result(p.sig, sigma)) continue;
    TermPtr v = Term::var("X", sigma, VarKind::existential);
    FormulaPtr body =
        tag_form ? prot.tag_identity(sigma, v) : prot.guard_atom(true, sigma, v);
    body = Formula::exists("X", sigma, body);
    body = close_type_vars(sorted_type_vars_of(sigma), body);
    std::string base = (tag_form ? "ax_tag_exists_" : "ax_guard_exists_") + type_tag(sigma);
    out.axioms.push_back({names.mint("inhab:" + sigma->str(), base), Role::axiom, body});
  }
}

struct TagsFeatherStage : LightCtx {
  using LightCtx::LightCtx;

  TermPtr ct_eq_side(const TermPtr& t) const {
    if (!t->is_var() || t->kind() != VarKind::universal) return t;
    TypePtr ty = t->var_type();
    return mono(ty) ? t : prot->tag(ty, t);
  }

  FormulaPtr tr(const FormulaPtr& f) const {
    switch (f->kind()) {
      case FormulaKind::pred_lit:
        return f;
      case FormulaKind::eq_lit:
        if (f->positive())
          return Formula::eq_lit(true, ct_eq_side(f->lhs_term()), ct_eq_side(f->rhs_term()));
        return f;
      case FormulaKind::conj:
        return Formula::conj(tr(f->lhs()), tr(f->rhs()));
      case FormulaKind::disj:
        return Formula::disj(tr(f->lhs()), tr(f->rhs()));
      case FormulaKind::forall_term:
        return Formula::forall(f->var(), f->var_type(), tr(f->body()));
      case FormulaKind::exists_term: {
        FormulaPtr body = tr(f->body());
        if (!mono(f->var_type())) {
          TermPtr v = Term::var(f->var(), f->var_type(), VarKind::existential);
          body = Formula::conj(prot->tag_identity(f->var_type(), v), body);
        }
        return Formula::exists(f->var(), f->var_type(), body);
      }
      case FormulaKind::forall_type:
        return Formula::forall_ty(f->var(), tr(f->body()));
    }
    throw InternalError("feather tags stage: unreachable");
  }
};

struct GuardsLightStage : LightCtx {
  bool feather;

  GuardsLightStage(const Problem& p, Protectors* prot, const MonoVerdicts& verdicts,
                   bool feather)
      : LightCtx(p, prot, verdicts), feather(feather) {}

  FormulaPtr tr(const FormulaPtr& f) const {
    switch (f->kind()) {
      case FormulaKind::pred_lit:
      case FormulaKind::eq_lit:
        return f;
      case FormulaKind::conj:
        return Formula::conj(tr(f->lhs()), tr(f->rhs()));
      case FormulaKind::disj:
        return Formula::disj(tr(f->lhs()), tr(f->rhs()));
      case FormulaKind::forall_term: {
        bool skip = mono(f->var_type());
        if (!skip && feather) {
          TypedVarSet nv = naked_vars(f->body());
          skip = nv.count({f->var(), f->var_type()}) == 0;
        }
        FormulaPtr body = tr(f->body());
        if (!skip) {
          TermPtr v = Term::var(f->var(), f->var_type(), VarKind::universal);
          body = Formula::disj(prot->guard_atom(false, f->var_type(), v), body);
        }
        return Formula::forall(f->var(), f->var_type(), body);
      }
      case FormulaKind::exists_term: {
        FormulaPtr body = tr(f->body());
        if (!mono(f->var_type())) {
          TermPtr v = Term::var(f->var(), f->var_type(), VarKind::existential);
          body = Formula::conj(prot->guard_atom(true, f->var_type(), v), body);
        }
        return Formula::exists(f->var(), f->var_type(), body);
      }
      case FormulaKind::forall_type:
        return Formula::forall_ty(f->var(), tr(f->body()));
    }
    throw InternalError("light guards stage: unreachable");
  }
};

void require_typed_level(const Problem& p, Level level) {
  if (p.sig.level != level)
    throw InternalError("scheme level does not match the problem level");
  if (level == Level::untyped)
    throw InternalError("monotonicity-based stages require typed input");
}

} // namespace

EncodedProblem tags_light(const Problem& p, const MonoVerdicts& verdicts,
                          const std::vector<TypePtr>& cap_V, Level level) {
  require_typed_level(p, level);
  bool poly = level == Level::polymorphic;
  EncodedProblem out;
  out.target_sig = p.sig;
  Protectors prot(poly, false, &out.target_sig);
  TagsLightStage stage(p, &prot, verdicts);
  NameMint names(sentence_names(p));
  if (poly) add_cap_axioms(prot, cap_V, names, true, out);
  for (const auto& nf : p.sentences)
    out.translated.push_back({nf.name, nf.role, stage.tr(nf.formula)});
  return out;
}

EncodedProblem tags_feather(const Problem& p, const MonoVerdicts& verdicts,
                            const std::vector<TypePtr>& cap_V, Level level) {
  require_typed_level(p, level);
  bool poly = level == Level::polymorphic;
  EncodedProblem out;
  out.target_sig = p.sig;
  Protectors prot(poly, false, &out.target_sig);
  TagsFeatherStage stage(p, &prot, verdicts);
  NameMint names(sentence_names(p));
  add_mono_typing_axioms(p, prot, verdicts, names, true, out);
  if (poly) add_cap_axioms(prot, cap_V, names, true, out);
  for (const auto& nf : p.sentences)
    out.translated.push_back({nf.name, nf.role, stage.tr(nf.formula)});
  return out;
}

EncodedProblem guards_light(const Problem& p, const MonoVerdicts& verdicts,
                            const std::vector<TypePtr>& cap_V, Level level) {
  require_typed_level(p, level);
  bool poly = level == Level::polymorphic;
  EncodedProblem out;
  out.target_sig = p.sig;
  Protectors prot(poly, true, &out.target_sig);
  GuardsLightStage stage(p, &prot, verdicts, false);
  NameMint names(sentence_names(p));
  add_mono_typing_axioms(p, prot, verdicts, names, false, out);
  if (poly) add_cap_axioms(prot, cap_V, names, false, out);
  for (const auto& nf : p.sentences)
    out.translated.push_back({nf.name, nf.role, stage.tr(nf.formula)});
  return out;
}

EncodedProblem guards_feather(const Problem& p, const MonoVerdicts& verdicts,
                              const std::vector<TypePtr>& cap_V, Level level) {
  require_typed_level(p, level);
  bool poly = level == Level::polymorphic;
  EncodedProblem out;
  out.target_sig = p.sig;
  Protectors prot(poly, true, &out.target_sig);
  GuardsLightStage stage(p, &prot, verdicts, true);
  NameMint names(sentence_names(p));
  add_mono_typing_axioms(p, prot, verdicts, names, false, out);
  if (poly) add_cap_axioms(prot, cap_V, names, false, out);
  for (const auto& nf : p.sentences)
    out.translated.push_back({nf.name, nf.role, stage.tr(nf.formula)});
  return out;
}

// ---------------------------------------------------------------------------
// Scheme table and pipeline composition

std::optional<SchemeId> parse_scheme(const std::string& name, bool mono) {
  SchemeKind kind;
  if (name == "e")
    kind = SchemeKind::erased;
  else if (name == "a")
    kind = SchemeKind::args_full;
  else if (name == "a_phan")
    kind = SchemeKind::args_phan;
  else if (name == "a_ninf")
    kind = SchemeKind::args_ninf;
  else if (name == "t")
    kind = SchemeKind::tags_trad;
  else if (name == "g")
    kind = SchemeKind::guards_trad;
  else if (name == "t_at")
    kind = SchemeKind::tags_cover;
  else if (name == "g_at")
    kind = SchemeKind::guards_cover;
  else if (name == "t_q")
    kind = SchemeKind::tags_light;
  else if (name == "t_qq")
    kind = SchemeKind::tags_feather;
  else if (name == "g_q")
    kind = SchemeKind::guards_light;
  else if (name == "g_qq")
    kind = SchemeKind::guards_feather;
  else
    return std::nullopt;
  Level level = mono ? Level::monomorphic : Level::polymorphic;
  if (mono) {
    switch (kind) {
      case SchemeKind::args_full:
      case SchemeKind::args_phan:
      case SchemeKind::args_ninf:
      case SchemeKind::tags_cover:
      case SchemeKind::guards_cover:
        return std::nullopt; // no monomorphic variants exist
      default:
        break;
    }
  }
  return SchemeId{kind, level};
}

std::string scheme_name(SchemeId id) {
  switch (id.kind) {
    case SchemeKind::erased: return "e";
    case SchemeKind::args_full: return "a";
    case SchemeKind::args_phan: return "a_phan";
    case SchemeKind::args_ninf: return "a_ninf";
    case SchemeKind::tags_trad: return "t";
    case SchemeKind::guards_trad: return "g";
    case SchemeKind::tags_cover: return "t_at";
    case SchemeKind::guards_cover: return "g_at";
    case SchemeKind::tags_light: return "t_q";
    case SchemeKind::tags_feather: return "t_qq";
    case SchemeKind::guards_light: return "g_q";
    case SchemeKind::guards_feather: return "g_qq";
  }
  return "?";
}

std::vector<std::string> scheme_names(bool mono) {
  if (mono) return {"e", "t", "g", "t_q", "t_qq", "g_q", "g_qq"};
  return {"e", "a", "a_phan", "a_ninf", "t", "g", "t_at", "g_at", "t_q", "t_qq", "g_q", "g_qq"};
}

EncodeContext make_context(const Problem& p, SchemeId scheme, const InfRegistry& inf,
                           CoverPolicy policy, const std::vector<TypePtr>& protect_extra) {
  EncodeContext ctx;
  switch (scheme.kind) {
    case SchemeKind::tags_cover:
    case SchemeKind::guards_cover:
      ctx.covers = choose_covers(p.sig, policy);
      break;
    case SchemeKind::tags_light:
    case SchemeKind::tags_feather:
    case SchemeKind::guards_light:
    case SchemeKind::guards_feather:
      ctx.verdicts = scheme.level == Level::polymorphic ? infer_mono_polymorphic(p, inf)
                                                        : infer_mono_monomorphic(p, inf);
      ctx.verdicts.protect_extra = protect_extra;
      if (scheme.level == Level::polymorphic)
        ctx.cap_V = compute_U(p, ctx.verdicts, inf);
      break;
    default:
      break;
  }
  return ctx;
}

PipelineResult run_pipeline(const Problem& p, SchemeId scheme, const EncodeContext& ctx) {
  if (p.sig.level != scheme.level)
    throw InternalError("scheme level does not match the problem level (scheme " +
                        scheme_name(scheme) + ")");

  std::vector<std::function<EncodedProblem(const Problem&)>> stages;
  bool poly = scheme.level == Level::polymorphic;
  auto args_stage = [](ArgFilter f) {
    return [f](const Problem& q) { return add_type_args(q, f); };
  };
  switch (scheme.kind) {
    case SchemeKind::erased:
      break;
    case SchemeKind::args_full:
      stages.push_back(args_stage(ArgFilter::full));
      break;
    case SchemeKind::args_phan:
      stages.push_back(args_stage(ArgFilter::phan));
      break;
    case SchemeKind::args_ninf:
      stages.push_back(args_stage(ArgFilter::ninf));
      break;
    case SchemeKind::tags_trad:
      stages.push_back([](const Problem& q) { return tags_traditional(q); });
      if (poly) stages.push_back(args_stage(ArgFilter::phan));
      break;
    case SchemeKind::guards_trad:
      stages.push_back([](const Problem& q) { return guards_traditional(q); });
      if (poly) stages.push_back(args_stage(ArgFilter::ninf));
      break;
    case SchemeKind::tags_cover:
      stages.push_back([&ctx](const Problem& q) { return tags_cover(q, ctx.covers); });
      stages.push_back(args_stage(ArgFilter::ninf));
      break;
    case SchemeKind::guards_cover:
      stages.push_back([&ctx](const Problem& q) { return guards_cover(q, ctx.covers); });
      stages.push_back(args_stage(ArgFilter::ninf));
      break;
    case SchemeKind::tags_light:
      stages.push_back([&ctx, scheme](const Problem& q) {
        return tags_light(q, ctx.verdicts, ctx.cap_V, scheme.level);
      });
      if (poly) stages.push_back(args_stage(ArgFilter::full));
      break;
    case SchemeKind::tags_feather:
      stages.push_back([&ctx, scheme](const Problem& q) {
        return tags_feather(q, ctx.verdicts, ctx.cap_V, scheme.level);
      });
      if (poly) stages.push_back(args_stage(ArgFilter::full));
      break;
    case SchemeKind::guards_light:
      stages.push_back([&ctx, scheme](const Problem& q) {
        return guards_light(q, ctx.verdicts, ctx.cap_V, scheme.level);
      });
      if (poly) stages.push_back(args_stage(ArgFilter::full));
      break;
    case SchemeKind::guards_feather:
      stages.push_back([&ctx, scheme](const Problem& q) {
        return guards_feather(q, ctx.verdicts, ctx.cap_V, scheme.level);
      });
      if (poly) stages.push_back(args_stage(ArgFilter::full));
      break;
  }
  stages.push_back([](const Problem& q) { return erase_types(q); });

  PipelineResult result;
  result.problem = p;
  for (const auto& stage : stages) {
    EncodedProblem ep = stage(result.problem);
    for (const auto& ax : ep.axioms) result.axiom_names.insert(ax.name);
    result.problem = ep.to_problem();
  }

  // Stable output names: added axioms keep their ax_* names, translated
  // sentences become f_<index>.
  std::size_t index = 0;
  for (auto& nf : result.problem.sentences) {
    if (result.axiom_names.count(nf.name)) {
      result.provenance.emplace(nf.name, "schema");
      continue;
    }
    std::string fresh = "f_" + std::to_string(index++);
    result.provenance.emplace(fresh, nf.name);
    nf.name = fresh;
  }
  return result;
}

} // namespace polyenc
