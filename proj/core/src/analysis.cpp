#include "polyenc/analysis.hpp"

#include <algorithm>

#include "polyenc/typing.hpp"
#include "polyenc/unify.hpp"

namespace polyenc {

namespace {

SymbolArgClasses classify_symbol(const std::vector<std::string>& ty_vars,
                                 const std::vector<TypePtr>& arg_types,
                                 const TypePtr& result) {
  SymbolArgClasses out;
  std::set<std::string> in_args, in_result;
  for (const auto& ty : arg_types) collect_type_vars(ty, in_args);
  if (result) collect_type_vars(result, in_result);
  for (std::size_t i = 0; i < ty_vars.size(); ++i) {
    std::size_t idx = i + 1;
    if (in_args.count(ty_vars[i])) {
      out.inferable.insert(idx);
    } else {
      out.noninferable.insert(idx);
      if (!in_result.count(ty_vars[i])) out.phantom.insert(idx);
    }
  }
  return out;
}

} // namespace

ArgClassification classify_args(const Signature& sig) {
  ArgClassification out;
  for (const auto& [name, fs] : sig.funs)
    out.by_symbol.emplace(name, classify_symbol(fs.ty_vars, fs.arg_types, fs.result));
  for (const auto& [name, ps] : sig.preds)
    out.by_symbol.emplace(name, classify_symbol(ps.ty_vars, ps.arg_types, nullptr));
  return out;
}

namespace {

// Type variables inferable from the given argument positions must include
// every type variable occurring in any argument type.
bool covers(const std::vector<TypePtr>& arg_types, const std::set<std::size_t>& candidate) {
  std::set<std::string> needed;
  for (const auto& ty : arg_types) collect_type_vars(ty, needed);
  std::set<std::string> have;
  for (std::size_t i : candidate)
    if (i >= 1 && i <= arg_types.size()) collect_type_vars(arg_types[i - 1], have);
  for (const auto& v : needed)
    if (!have.count(v)) return false;
  return true;
}

// Depth-first enumeration of subsets as increasing index sequences yields
// lexicographic order on the sorted representations.
bool lex_first_minimal_cover(const std::vector<TypePtr>& arg_types,
                             std::set<std::size_t>& acc, std::size_t next,
                             std::set<std::size_t>& out) {
  if (covers(arg_types, acc)) {
    bool minimal = true;
    for (std::size_t i : acc) {
      std::set<std::size_t> smaller = acc;
      smaller.erase(i);
      if (covers(arg_types, smaller)) {
        minimal = false;
        break;
      }
    }
    if (minimal) {
      out = acc;
      return true;
    }
  }
  for (std::size_t i = next; i <= arg_types.size(); ++i) {
    acc.insert(i);
    if (lex_first_minimal_cover(arg_types, acc, i + 1, out)) return true;
    acc.erase(i);
  }
  return false;
}

std::set<std::size_t> cover_for(const std::vector<TypePtr>& arg_types, CoverPolicy policy) {
  std::set<std::size_t> out;
  if (policy == CoverPolicy::maximal) {
    for (std::size_t i = 1; i <= arg_types.size(); ++i) out.insert(i);
    return out;
  }
  std::set<std::size_t> acc;
  if (!lex_first_minimal_cover(arg_types, acc, 1, out))
    throw InternalError("no cover exists; inferable variables must occur in arguments");
  return out;
}

} // namespace

CoverAssignment choose_covers(const Signature& sig, CoverPolicy policy) {
  CoverAssignment out;
  for (const auto& [name, fs] : sig.funs)
    out.emplace(name, cover_for(fs.arg_types, policy));
  for (const auto& [name, ps] : sig.preds)
    out.emplace(name, cover_for(ps.arg_types, policy));
  return out;
}

bool is_cover(const Signature& sig, const std::string& sym,
              const std::set<std::size_t>& candidate) {
  auto fit = sig.funs.find(sym);
  if (fit != sig.funs.end()) return covers(fit->second.arg_types, candidate);
  auto pit = sig.preds.find(sym);
  if (pit == sig.preds.end()) throw InternalError("is_cover: unknown symbol " + sym);
  return covers(pit->second.arg_types, candidate);
}

bool InfRegistry::is_infinite(const TypePtr& ty) const {
  for (const auto& d : declared)
    if (is_instance_of(ty, d)) return true;
  return false;
}

namespace {

// Minimal standalone type reader for registry files: name(arg,...) with
// upper-case words as variables.
struct TypeReader {
  const std::string& s;
  std::size_t pos = 0;
  std::size_t line_no;
  const Signature& sig;

  [[noreturn]] void fail(const std::string& msg) {
    throw std::runtime_error("infinite-types file, line " + std::to_string(line_no) + ": " + msg);
  }

  void skip_ws() {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
  }

  std::string word() {
    skip_ws();
    std::size_t start = pos;
    while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
      ++pos;
    if (start == pos) fail("expected a name");
    return s.substr(start, pos - start);
  }

  TypePtr type() {
    std::string w = word();
    if (std::isupper(static_cast<unsigned char>(w[0]))) return Type::var(w);
    std::vector<TypePtr> args;
    skip_ws();
    if (pos < s.size() && s[pos] == '(') {
      ++pos;
      for (;;) {
        args.push_back(type());
        skip_ws();
        if (pos < s.size() && s[pos] == ',') {
          ++pos;
          continue;
        }
        break;
      }
      skip_ws();
      if (pos >= s.size() || s[pos] != ')') fail("expected ')'");
      ++pos;
    }
    auto it = sig.type_ctors.find(w);
    if (it == sig.type_ctors.end()) fail("unknown type constructor '" + w + "'");
    if (it->second != args.size())
      fail("type constructor '" + w + "' expects " + std::to_string(it->second) + " arguments");
    return Type::app(w, std::move(args));
  }
};

} // namespace

InfRegistry parse_inf_registry(const std::string& text, const Signature& sig) {
  InfRegistry out;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(start, end - start);
    ++line_no;
    start = end + 1;
    auto cut = line.find('%');
    if (cut != std::string::npos) line = line.substr(0, cut);
    bool blank = true;
    for (char c : line)
      if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
    if (blank) continue;
    TypeReader reader{line, 0, line_no, sig};
    TypePtr ty = reader.type();
    reader.skip_ws();
    if (reader.pos != line.size()) reader.fail("trailing input after type");
    out.declared.push_back(ty);
    if (end == text.size()) break;
  }
  return out;
}

void cap_insert(std::vector<TypePtr>& cap, const TypePtr& ty) {
  for (const auto& member : cap)
    if (is_instance_of(ty, member)) return;
  std::vector<TypePtr> kept;
  kept.reserve(cap.size() + 1);
  for (const auto& member : cap)
    if (!is_instance_of(member, ty)) kept.push_back(member);
  kept.push_back(ty);
  std::sort(kept.begin(), kept.end(),
            [](const TypePtr& a, const TypePtr& b) { return a->canon_key() < b->canon_key(); });
  cap = std::move(kept);
}

std::vector<TypePtr> cap_minimize(const std::vector<TypePtr>& types) {
  std::vector<TypePtr> sorted = types;
  std::sort(sorted.begin(), sorted.end(),
            [](const TypePtr& a, const TypePtr& b) { return a->canon_key() < b->canon_key(); });
  std::vector<TypePtr> cap;
  for (const auto& ty : sorted) cap_insert(cap, ty);
  return cap;
}

namespace {

void canon_walk(const TypePtr& t, std::map<std::string, std::string>& renaming) {
  if (t->is_var()) {
    if (!renaming.count(t->name())) {
      std::size_t i = renaming.size();
      std::string name(1, static_cast<char>('A' + i % 26));
      if (i >= 26) name += std::to_string(i / 26);
      renaming.emplace(t->name(), name);
    }
    return;
  }
  for (const auto& a : t->args()) canon_walk(a, renaming);
}

} // namespace

TypePtr canon_rename(const TypePtr& ty) {
  std::map<std::string, std::string> renaming;
  canon_walk(ty, renaming);
  TypeSubst rho;
  for (const auto& [from, to] : renaming) rho.emplace(from, Type::var(to));
  return apply_type_subst(ty, rho);
}

std::vector<NakedOccurrence> naked_occurrences(const Problem& p) {
  std::vector<NakedOccurrence> out;
  for (const auto& nf : p.sentences)
    for (const auto& tv : naked_vars(nf.formula))
      out.push_back({tv.name, tv.ty, nf.name});
  return out;
}

bool MonoVerdicts::monotonic(const TypePtr& sigma) const {
  for (const auto& forced : protect_extra)
    if (is_instance_of(sigma, forced)) return false;
  for (const auto& j : surely_infinite)
    if (is_instance_of(sigma, j)) return true;
  for (const auto& n : possibly_nonmono)
    if (have_common_instance(sigma, n)) return false;
  return true;
}

namespace {

MonoVerdicts infer_mono(const Problem& p, const InfRegistry& inf, bool require_ground) {
  MonoVerdicts out;
  for (const auto& d : inf.declared) cap_insert(out.surely_infinite, d);
  std::vector<TypePtr> naked_types;
  for (const auto& tv : naked_vars(p)) naked_types.push_back(tv.ty);
  std::sort(naked_types.begin(), naked_types.end(),
            [](const TypePtr& a, const TypePtr& b) { return a->canon_key() < b->canon_key(); });
  for (const auto& ty : naked_types) {
    if (require_ground && !ty->ground())
      throw InternalError("monomorphic monotonicity inference on a non-ground naked type " +
                          ty->str());
    if (inf.is_infinite(ty))
      cap_insert(out.surely_infinite, ty);
    else
      cap_insert(out.possibly_nonmono, ty);
  }
  return out;
}

} // namespace

MonoVerdicts infer_mono_monomorphic(const Problem& p, const InfRegistry& inf) {
  return infer_mono(p, inf, true);
}

MonoVerdicts infer_mono_polymorphic(const Problem& p, const InfRegistry& inf) {
  return infer_mono(p, inf, false);
}

namespace {

void add_types_of_term(const Signature& sig, const TermPtr& t, std::vector<TypePtr>& out) {
  if (t->is_var()) {
    out.push_back(t->var_type());
    return;
  }
  out.push_back(term_type(sig, t));
  for (const auto& a : t->args()) add_types_of_term(sig, a, out);
}

void add_types_of(const Signature& sig, const FormulaPtr& f, std::vector<TypePtr>& out) {
  switch (f->kind()) {
    case FormulaKind::pred_lit:
    case FormulaKind::eq_lit:
      for (const auto& a : f->args()) add_types_of_term(sig, a, out);
      return;
    case FormulaKind::conj:
    case FormulaKind::disj:
      add_types_of(sig, f->lhs(), out);
      add_types_of(sig, f->rhs(), out);
      return;
    case FormulaKind::forall_term:
    case FormulaKind::exists_term:
      out.push_back(f->var_type());
      add_types_of(sig, f->body(), out);
      return;
    case FormulaKind::forall_type:
      add_types_of(sig, f->body(), out);
      return;
  }
}

} // namespace

std::vector<TypePtr> types_of(const Problem& p) {
  std::vector<TypePtr> raw;
  for (const auto& nf : p.sentences) add_types_of(p.sig, nf.formula, raw);
  std::map<std::string, TypePtr> dedup;
  for (const auto& ty : raw) {
    TypePtr canon = canon_rename(ty);
    dedup.emplace(canon->canon_key(), canon);
  }
  std::vector<TypePtr> out;
  out.reserve(dedup.size());
  for (const auto& [key, ty] : dedup) out.push_back(ty);
  return out;
}

std::vector<TypePtr> compute_U(const Problem& p, const MonoVerdicts& verdicts,
                               const InfRegistry& inf) {
  std::vector<TypePtr> naked_types;
  for (const auto& tv : naked_vars(p)) naked_types.push_back(tv.ty);

  auto admissible = [&](const TypePtr& candidate) {
    if (inf.is_infinite(candidate)) return true;
    for (const auto& n : naked_types)
      if (have_common_instance(candidate, n)) return false;
    return true;
  };

  std::vector<TypePtr> pool;
  for (const auto& sigma : types_of(p)) {
    if (verdicts.monotonic(sigma)) continue;
    // Candidate instances of sigma: the type itself plus every combination
    // of its variables instantiated by freshly renamed declared types.
    std::vector<std::string> vars;
    {
      std::set<std::string> vs = type_vars(sigma);
      vars.assign(vs.begin(), vs.end());
    }
    std::vector<TypePtr> candidates;
    std::size_t options = inf.declared.size() + 1;
    std::size_t combos = 1;
    for (std::size_t i = 0; i < vars.size() && combos <= 4096; ++i) combos *= options;
    if (combos > 4096) combos = 4096;
    for (std::size_t code = 0; code < combos; ++code) {
      TypeSubst rho;
      std::size_t rest = code;
      for (std::size_t i = 0; i < vars.size(); ++i) {
        std::size_t choice = rest % options;
        rest /= options;
        if (choice > 0) {
          TypePtr pattern = inf.declared[choice - 1];
          rho.emplace(vars[i], rename_vars_apart(pattern, "u" + std::to_string(i) + "#"));
        }
      }
      candidates.push_back(apply_type_subst(sigma, rho));
    }
    std::vector<TypePtr> u_sigma;
    for (const auto& c : candidates)
      if (admissible(c)) u_sigma.push_back(c);
    for (const auto& member : cap_minimize(u_sigma)) pool.push_back(canon_rename(member));
  }
  return cap_minimize(pool);
}

} // namespace polyenc
