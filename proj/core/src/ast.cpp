#include "polyenc/ast.hpp"

#include <sstream>

namespace polyenc {

// ---------------------------------------------------------------------------
// Types

TypePtr Type::var(std::string name) {
  return TypePtr(new Type(true, std::move(name), {}));
}

TypePtr Type::app(std::string ctor, std::vector<TypePtr> args) {
  return TypePtr(new Type(false, std::move(ctor), std::move(args)));
}

bool Type::ground() const {
  if (is_var_) return false;
  for (const auto& a : args_)
    if (!a->ground()) return false;
  return true;
}

std::string Type::str() const {
  if (is_var_ || args_.empty()) return name_;
  std::string out = name_ + "(";
  for (std::size_t i = 0; i < args_.size(); ++i) {
    if (i) out += ",";
    out += args_[i]->str();
  }
  out += ")";
  return out;
}

namespace {

void canon_key_rec(const Type& ty, std::map<std::string, std::size_t>& seen,
                   std::string& out) {
  if (ty.is_var()) {
    auto [it, inserted] = seen.emplace(ty.name(), seen.size());
    out += "%" + std::to_string(it->second);
    return;
  }
  out += ty.name();
  if (!ty.args().empty()) {
    out += "(";
    for (std::size_t i = 0; i < ty.args().size(); ++i) {
      if (i) out += ",";
      canon_key_rec(*ty.args()[i], seen, out);
    }
    out += ")";
  }
}

} // namespace

std::string Type::canon_key() const {
  std::map<std::string, std::size_t> seen;
  std::string out;
  canon_key_rec(*this, seen, out);
  return out;
}

bool equal(const TypePtr& a, const TypePtr& b) {
  if (a.get() == b.get()) return true;
  if (a->is_var() != b->is_var() || a->name() != b->name()) return false;
  if (a->args().size() != b->args().size()) return false;
  for (std::size_t i = 0; i < a->args().size(); ++i)
    if (!equal(a->args()[i], b->args()[i])) return false;
  return true;
}

TypePtr apply_type_subst(const TypePtr& ty, const TypeSubst& rho) {
  if (ty->is_var()) {
    auto it = rho.find(ty->name());
    return it == rho.end() ? ty : it->second;
  }
  if (ty->args().empty()) return ty;
  std::vector<TypePtr> args;
  args.reserve(ty->args().size());
  for (const auto& a : ty->args()) args.push_back(apply_type_subst(a, rho));
  return Type::app(ty->name(), std::move(args));
}

void collect_type_vars(const TypePtr& ty, std::set<std::string>& out) {
  if (ty->is_var()) {
    out.insert(ty->name());
    return;
  }
  for (const auto& a : ty->args()) collect_type_vars(a, out);
}

std::set<std::string> type_vars(const TypePtr& ty) {
  std::set<std::string> out;
  collect_type_vars(ty, out);
  return out;
}

// ---------------------------------------------------------------------------
// Terms

TermPtr Term::var(std::string name, TypePtr ty, VarKind kind) {
  auto t = new Term();
  t->is_var_ = true;
  t->name_ = std::move(name);
  t->ty_ = std::move(ty);
  t->kind_ = kind;
  return TermPtr(t);
}

TermPtr Term::app(std::string sym, std::vector<TypePtr> ty_args,
                  std::vector<TermPtr> args) {
  auto t = new Term();
  t->is_var_ = false;
  t->name_ = std::move(sym);
  t->ty_args_ = std::move(ty_args);
  t->args_ = std::move(args);
  return TermPtr(t);
}

std::string Term::str() const {
  if (is_var_) return name_;
  std::string out = name_;
  if (!ty_args_.empty() || !args_.empty()) {
    out += "(";
    bool first = true;
    for (const auto& ty : ty_args_) {
      if (!first) out += ",";
      first = false;
      out += "<" + ty->str() + ">";
    }
    for (const auto& a : args_) {
      if (!first) out += ",";
      first = false;
      out += a->str();
    }
    out += ")";
  }
  return out;
}

bool equal(const TermPtr& a, const TermPtr& b) {
  if (a.get() == b.get()) return true;
  if (a->is_var() != b->is_var() || a->name() != b->name()) return false;
  if (a->is_var()) return equal(a->var_type(), b->var_type()) && a->kind() == b->kind();
  if (a->ty_args().size() != b->ty_args().size() || a->args().size() != b->args().size())
    return false;
  for (std::size_t i = 0; i < a->ty_args().size(); ++i)
    if (!equal(a->ty_args()[i], b->ty_args()[i])) return false;
  for (std::size_t i = 0; i < a->args().size(); ++i)
    if (!equal(a->args()[i], b->args()[i])) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Formulas

FormulaPtr Formula::pred_lit(bool positive, std::string sym,
                             std::vector<TypePtr> ty_args, std::vector<TermPtr> args) {
  auto f = new Formula();
  f->kind_ = FormulaKind::pred_lit;
  f->positive_ = positive;
  f->sym_ = std::move(sym);
  f->ty_args_ = std::move(ty_args);
  f->args_ = std::move(args);
  return FormulaPtr(f);
}

FormulaPtr Formula::eq_lit(bool positive, TermPtr lhs, TermPtr rhs) {
  auto f = new Formula();
  f->kind_ = FormulaKind::eq_lit;
  f->positive_ = positive;
  f->args_ = {std::move(lhs), std::move(rhs)};
  return FormulaPtr(f);
}

FormulaPtr Formula::conj(FormulaPtr lhs, FormulaPtr rhs) {
  auto f = new Formula();
  f->kind_ = FormulaKind::conj;
  f->sub_ = {std::move(lhs), std::move(rhs)};
  return FormulaPtr(f);
}

FormulaPtr Formula::disj(FormulaPtr lhs, FormulaPtr rhs) {
  auto f = new Formula();
  f->kind_ = FormulaKind::disj;
  f->sub_ = {std::move(lhs), std::move(rhs)};
  return FormulaPtr(f);
}

// Chains fold left-associatively, matching how the parser rebuilds them.
FormulaPtr Formula::conj_all(const std::vector<FormulaPtr>& fs) {
  if (fs.empty()) throw InternalError("conj_all: empty conjunction");
  FormulaPtr out = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) out = conj(out, fs[i]);
  return out;
}

FormulaPtr Formula::disj_all(const std::vector<FormulaPtr>& fs) {
  if (fs.empty()) throw InternalError("disj_all: empty disjunction");
  FormulaPtr out = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) out = disj(out, fs[i]);
  return out;
}

FormulaPtr Formula::forall(std::string var, TypePtr ty, FormulaPtr body) {
  auto f = new Formula();
  f->kind_ = FormulaKind::forall_term;
  f->sym_ = std::move(var);
  f->var_ty_ = std::move(ty);
  f->sub_ = {std::move(body)};
  return FormulaPtr(f);
}

FormulaPtr Formula::exists(std::string var, TypePtr ty, FormulaPtr body) {
  auto f = new Formula();
  f->kind_ = FormulaKind::exists_term;
  f->sym_ = std::move(var);
  f->var_ty_ = std::move(ty);
  f->sub_ = {std::move(body)};
  return FormulaPtr(f);
}

FormulaPtr Formula::forall_ty(std::string ty_var, FormulaPtr body) {
  auto f = new Formula();
  f->kind_ = FormulaKind::forall_type;
  f->sym_ = std::move(ty_var);
  f->sub_ = {std::move(body)};
  return FormulaPtr(f);
}

std::string Formula::str() const {
  switch (kind_) {
    case FormulaKind::pred_lit: {
      std::string out = positive_ ? "" : "~";
      std::vector<TypePtr> tys = ty_args_;
      out += Term::app(sym_, std::move(tys), args_)->str();
      return out;
    }
    case FormulaKind::eq_lit:
      return args_[0]->str() + (positive_ ? " = " : " != ") + args_[1]->str();
    case FormulaKind::conj:
      return "(" + sub_[0]->str() + " & " + sub_[1]->str() + ")";
    case FormulaKind::disj:
      return "(" + sub_[0]->str() + " | " + sub_[1]->str() + ")";
    case FormulaKind::forall_term:
      return "![" + sym_ + ":" + var_ty_->str() + "]: " + sub_[0]->str();
    case FormulaKind::exists_term:
      return "?[" + sym_ + ":" + var_ty_->str() + "]: " + sub_[0]->str();
    case FormulaKind::forall_type:
      return "![" + sym_ + ":$tType]: " + sub_[0]->str();
  }
  return "";
}

bool equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a.get() == b.get()) return true;
  if (a->kind() != b->kind() || a->positive() != b->positive()) return false;
  switch (a->kind()) {
    case FormulaKind::pred_lit: {
      if (a->sym() != b->sym()) return false;
      if (a->ty_args().size() != b->ty_args().size()) return false;
      if (a->args().size() != b->args().size()) return false;
      for (std::size_t i = 0; i < a->ty_args().size(); ++i)
        if (!equal(a->ty_args()[i], b->ty_args()[i])) return false;
      for (std::size_t i = 0; i < a->args().size(); ++i)
        if (!equal(a->args()[i], b->args()[i])) return false;
      return true;
    }
    case FormulaKind::eq_lit:
      return equal(a->lhs_term(), b->lhs_term()) && equal(a->rhs_term(), b->rhs_term());
    case FormulaKind::conj:
    case FormulaKind::disj:
      return equal(a->lhs(), b->lhs()) && equal(a->rhs(), b->rhs());
    case FormulaKind::forall_term:
    case FormulaKind::exists_term:
      return a->var() == b->var() && equal(a->var_type(), b->var_type()) &&
             equal(a->body(), b->body());
    case FormulaKind::forall_type:
      return a->var() == b->var() && equal(a->body(), b->body());
  }
  return false;
}

namespace {

void free_vars_rec(const TermPtr& t, const std::set<std::string>& bound,
                   std::map<std::string, TypePtr>& out) {
  if (t->is_var()) {
    if (!bound.count(t->name())) out.emplace(t->name(), t->var_type());
    return;
  }
  for (const auto& a : t->args()) free_vars_rec(a, bound, out);
}

void free_vars_rec(const FormulaPtr& f, std::set<std::string>& bound,
                   std::map<std::string, TypePtr>& out) {
  switch (f->kind()) {
    case FormulaKind::pred_lit:
    case FormulaKind::eq_lit:
      for (const auto& a : f->args()) free_vars_rec(a, bound, out);
      return;
    case FormulaKind::conj:
    case FormulaKind::disj:
      free_vars_rec(f->lhs(), bound, out);
      free_vars_rec(f->rhs(), bound, out);
      return;
    case FormulaKind::forall_term:
    case FormulaKind::exists_term: {
      bool inserted = bound.insert(f->var()).second;
      free_vars_rec(f->body(), bound, out);
      if (inserted) bound.erase(f->var());
      return;
    }
    case FormulaKind::forall_type:
      free_vars_rec(f->body(), bound, out);
      return;
  }
}

void free_ty_vars_rec(const FormulaPtr& f, std::set<std::string>& bound,
                      std::set<std::string>& out) {
  auto add = [&](const std::set<std::string>& vs) {
    for (const auto& v : vs)
      if (!bound.count(v)) out.insert(v);
  };
  switch (f->kind()) {
    case FormulaKind::pred_lit: {
      for (const auto& ty : f->ty_args()) add(type_vars(ty));
      std::set<std::string> vs;
      for (const auto& a : f->args()) collect_type_vars(a, vs);
      add(vs);
      return;
    }
    case FormulaKind::eq_lit: {
      std::set<std::string> vs;
      for (const auto& a : f->args()) collect_type_vars(a, vs);
      add(vs);
      return;
    }
    case FormulaKind::conj:
    case FormulaKind::disj:
      free_ty_vars_rec(f->lhs(), bound, out);
      free_ty_vars_rec(f->rhs(), bound, out);
      return;
    case FormulaKind::forall_term:
    case FormulaKind::exists_term:
      add(type_vars(f->var_type()));
      free_ty_vars_rec(f->body(), bound, out);
      return;
    case FormulaKind::forall_type: {
      bool inserted = bound.insert(f->var()).second;
      free_ty_vars_rec(f->body(), bound, out);
      if (inserted) bound.erase(f->var());
      return;
    }
  }
}

} // namespace

std::map<std::string, TypePtr> free_term_vars(const FormulaPtr& f) {
  std::map<std::string, TypePtr> out;
  std::set<std::string> bound;
  free_vars_rec(f, bound, out);
  return out;
}

std::set<std::string> free_type_vars(const FormulaPtr& f) {
  std::set<std::string> out, bound;
  free_ty_vars_rec(f, bound, out);
  return out;
}

void collect_type_vars(const TermPtr& t, std::set<std::string>& out) {
  if (t->is_var()) {
    collect_type_vars(t->var_type(), out);
    return;
  }
  for (const auto& ty : t->ty_args()) collect_type_vars(ty, out);
  for (const auto& a : t->args()) collect_type_vars(a, out);
}

void collect_type_vars(const FormulaPtr& f, std::set<std::string>& out) {
  switch (f->kind()) {
    case FormulaKind::pred_lit:
      for (const auto& ty : f->ty_args()) collect_type_vars(ty, out);
      for (const auto& a : f->args()) collect_type_vars(a, out);
      return;
    case FormulaKind::eq_lit:
      for (const auto& a : f->args()) collect_type_vars(a, out);
      return;
    case FormulaKind::conj:
    case FormulaKind::disj:
      collect_type_vars(f->lhs(), out);
      collect_type_vars(f->rhs(), out);
      return;
    case FormulaKind::forall_term:
    case FormulaKind::exists_term:
      collect_type_vars(f->var_type(), out);
      collect_type_vars(f->body(), out);
      return;
    case FormulaKind::forall_type:
      out.insert(f->var());
      collect_type_vars(f->body(), out);
      return;
  }
}

TermPtr apply_type_subst(const TermPtr& t, const TypeSubst& rho) {
  if (rho.empty()) return t;
  if (t->is_var())
    return Term::var(t->name(), apply_type_subst(t->var_type(), rho), t->kind());
  std::vector<TypePtr> tys;
  tys.reserve(t->ty_args().size());
  for (const auto& ty : t->ty_args()) tys.push_back(apply_type_subst(ty, rho));
  std::vector<TermPtr> args;
  args.reserve(t->args().size());
  for (const auto& a : t->args()) args.push_back(apply_type_subst(a, rho));
  return Term::app(t->name(), std::move(tys), std::move(args));
}

FormulaPtr apply_type_subst(const FormulaPtr& f, const TypeSubst& rho) {
  if (rho.empty()) return f;
  switch (f->kind()) {
    case FormulaKind::pred_lit: {
      std::vector<TypePtr> tys;
      tys.reserve(f->ty_args().size());
      for (const auto& ty : f->ty_args()) tys.push_back(apply_type_subst(ty, rho));
      std::vector<TermPtr> args;
      args.reserve(f->args().size());
      for (const auto& a : f->args()) args.push_back(apply_type_subst(a, rho));
      return Formula::pred_lit(f->positive(), f->sym(), std::move(tys), std::move(args));
    }
    case FormulaKind::eq_lit:
      return Formula::eq_lit(f->positive(), apply_type_subst(f->lhs_term(), rho),
                             apply_type_subst(f->rhs_term(), rho));
    case FormulaKind::conj:
      return Formula::conj(apply_type_subst(f->lhs(), rho), apply_type_subst(f->rhs(), rho));
    case FormulaKind::disj:
      return Formula::disj(apply_type_subst(f->lhs(), rho), apply_type_subst(f->rhs(), rho));
    case FormulaKind::forall_term:
      return Formula::forall(f->var(), apply_type_subst(f->var_type(), rho),
                             apply_type_subst(f->body(), rho));
    case FormulaKind::exists_term:
      return Formula::exists(f->var(), apply_type_subst(f->var_type(), rho),
                             apply_type_subst(f->body(), rho));
    case FormulaKind::forall_type: {
      // Bound type variables shadow the substitution.
      if (rho.count(f->var())) {
        TypeSubst inner = rho;
        inner.erase(f->var());
        return Formula::forall_ty(f->var(), apply_type_subst(f->body(), inner));
      }
      return Formula::forall_ty(f->var(), apply_type_subst(f->body(), rho));
    }
  }
  return f;
}

// ---------------------------------------------------------------------------
// Signatures

std::optional<std::string> Signature::some_nullary_ctor() const {
  for (const auto& [name, arity] : type_ctors)
    if (arity == 0) return name;
  return std::nullopt;
}

std::string Signature::ensure_nullary_ctor() {
  if (auto k = some_nullary_ctor()) return *k;
  std::string name = "iota";
  int i = 0;
  while (type_ctors.count(name) != 0) name = "iota_" + std::to_string(++i);
  type_ctors.emplace(name, 0);
  return name;
}

std::string role_name(Role r) {
  switch (r) {
    case Role::axiom: return "axiom";
    case Role::hypothesis: return "hypothesis";
    case Role::conjecture: return "conjecture";
    case Role::negated_conjecture: return "negated_conjecture";
  }
  return "axiom";
}

TypePtr untyped_sort() {
  static const TypePtr iota = Type::app(kUntypedSort, {});
  return iota;
}

} // namespace polyenc
