#include "polyenc/vars.hpp"

namespace polyenc {

namespace {

void nv_rec(const FormulaPtr& f, TypedVarSet& out) {
  switch (f->kind()) {
    case FormulaKind::pred_lit:
      return;
    case FormulaKind::eq_lit:
      if (f->positive()) {
        for (const auto& side : f->args())
          if (side->is_var() && side->kind() == VarKind::universal)
            out.insert({side->name(), side->var_type()});
      }
      return;
    case FormulaKind::conj:
    case FormulaKind::disj:
      nv_rec(f->lhs(), out);
      nv_rec(f->rhs(), out);
      return;
    case FormulaKind::forall_term:
    case FormulaKind::forall_type:
      nv_rec(f->body(), out);
      return;
    case FormulaKind::exists_term: {
      TypedVarSet inner;
      nv_rec(f->body(), inner);
      inner.erase({f->var(), f->var_type()});
      out.insert(inner.begin(), inner.end());
      return;
    }
  }
}

const std::set<std::size_t>& cover_of(const CoverAssignment& covers, const std::string& sym) {
  static const std::set<std::size_t> empty;
  auto it = covers.find(sym);
  return it == covers.end() ? empty : it->second;
}

// Cover-position variable arguments of one application.
void ct_vars(const std::string& sym, const std::vector<TermPtr>& args,
             const CoverAssignment& covers, TypedVarSet& out) {
  const auto& cover = cover_of(covers, sym);
  for (std::size_t j : cover) {
    if (j == 0 || j > args.size()) continue;
    const TermPtr& t = args[j - 1];
    if (t->is_var()) out.insert({t->name(), t->var_type()});
  }
}

void uv_term(const TermPtr& t, const CoverAssignment& covers, TypedVarSet& out) {
  if (t->is_var()) return;
  ct_vars(t->name(), t->args(), covers, out);
  for (const auto& a : t->args()) uv_term(a, covers, out);
}

void uv_rec(const FormulaPtr& f, const CoverAssignment& covers, TypedVarSet& out) {
  switch (f->kind()) {
    case FormulaKind::pred_lit:
      ct_vars(f->sym(), f->args(), covers, out);
      for (const auto& a : f->args()) uv_term(a, covers, out);
      return;
    case FormulaKind::eq_lit:
      if (f->positive()) {
        // Cover(=) = {1,2}: both variable sides count.
        for (const auto& side : f->args())
          if (side->is_var()) out.insert({side->name(), side->var_type()});
      }
      for (const auto& a : f->args()) uv_term(a, covers, out);
      return;
    case FormulaKind::conj:
    case FormulaKind::disj:
      uv_rec(f->lhs(), covers, out);
      uv_rec(f->rhs(), covers, out);
      return;
    case FormulaKind::forall_term:
    case FormulaKind::forall_type:
      uv_rec(f->body(), covers, out);
      return;
    case FormulaKind::exists_term: {
      TypedVarSet inner;
      uv_rec(f->body(), covers, inner);
      inner.erase({f->var(), f->var_type()});
      out.insert(inner.begin(), inner.end());
      return;
    }
  }
}

} // namespace

TypedVarSet naked_vars(const FormulaPtr& f) {
  TypedVarSet out;
  nv_rec(f, out);
  return out;
}

TypedVarSet naked_vars(const Problem& p) {
  TypedVarSet out;
  for (const auto& nf : p.sentences) nv_rec(nf.formula, out);
  return out;
}

TypedVarSet undercover_vars(const FormulaPtr& f, const CoverAssignment& covers) {
  TypedVarSet out;
  uv_rec(f, covers, out);
  return out;
}

std::string type_var_term_name(const std::string& ty_var) {
  return std::string(kReservedVarPrefix) + ty_var;
}

TypePtr theta_type() {
  static const TypePtr theta = Type::app(kThetaCtor, {});
  return theta;
}

TermPtr type_to_term(const TypePtr& ty, const std::map<std::string, std::string>& ctor_syms) {
  if (ty->is_var())
    return Term::var(type_var_term_name(ty->name()), theta_type(), VarKind::universal);
  std::vector<TermPtr> args;
  args.reserve(ty->args().size());
  for (const auto& a : ty->args()) args.push_back(type_to_term(a, ctor_syms));
  auto it = ctor_syms.find(ty->name());
  std::string sym = it == ctor_syms.end() ? ty->name() : it->second;
  return Term::app(std::move(sym), {}, std::move(args));
}

} // namespace polyenc
