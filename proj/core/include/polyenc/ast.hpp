// Core term language: types, terms, NNF formulas, signatures, problems.
// All nodes are immutable after construction and shared via shared_ptr,
// so every operation in the library is a pure function over them.

#ifndef POLYENC_AST_HPP
#define POLYENC_AST_HPP

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace polyenc {

class Type;
class Term;
class Formula;

using TypePtr = std::shared_ptr<const Type>;
using TermPtr = std::shared_ptr<const Term>;
using FormulaPtr = std::shared_ptr<const Formula>;

// Reserved namespaces. The parser refuses these in user input (see
// ParseOptions::allow_reserved); the encoder mints its distinguished
// symbols inside them so freshness never depends on the input.
inline constexpr const char* kReservedSymbolPrefix = "$$";
inline constexpr const char* kReservedVarPrefix = "A__";
inline constexpr const char* kThetaCtor = "$$ty";      // carrier of encoded types
inline constexpr const char* kTagSymbol = "$$tag";     // t : forall a. a > a
inline constexpr const char* kGuardSymbol = "$$guard"; // g : forall a. a > o
inline constexpr const char* kSkolemPrefix = "$$sk";
inline constexpr const char* kUntypedSort = "$i";      // single sort of untyped problems

struct InternalError : std::logic_error {
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

// ---------------------------------------------------------------------------
// Types

class Type {
public:
  static TypePtr var(std::string name);
  static TypePtr app(std::string ctor, std::vector<TypePtr> args = {});

  bool is_var() const { return is_var_; }
  bool is_app() const { return !is_var_; }
  const std::string& name() const { return name_; } // variable name or ctor
  const std::vector<TypePtr>& args() const { return args_; }

  bool ground() const;
  // "list(w)"; variables print as their name.
  std::string str() const;
  // Structure with variables numbered in first-occurrence order; two types
  // get the same key iff they are equal up to renaming of type variables.
  std::string canon_key() const;

private:
  Type(bool is_var, std::string name, std::vector<TypePtr> args)
      : is_var_(is_var), name_(std::move(name)), args_(std::move(args)) {}
  bool is_var_;
  std::string name_;
  std::vector<TypePtr> args_;
};

bool equal(const TypePtr& a, const TypePtr& b);
// Total order on types via the printed form; used for deterministic sets.
struct TypeLess {
  bool operator()(const TypePtr& a, const TypePtr& b) const { return a->str() < b->str(); }
};
using TypeSet = std::set<TypePtr, TypeLess>;

// Type substitution; maps type-variable names to types.
using TypeSubst = std::map<std::string, TypePtr>;

TypePtr apply_type_subst(const TypePtr& ty, const TypeSubst& rho);
void collect_type_vars(const TypePtr& ty, std::set<std::string>& out);
std::set<std::string> type_vars(const TypePtr& ty);

// ---------------------------------------------------------------------------
// Terms

enum class VarKind { universal, existential };

class Term {
public:
  static TermPtr var(std::string name, TypePtr ty, VarKind kind);
  static TermPtr app(std::string sym, std::vector<TypePtr> ty_args,
                     std::vector<TermPtr> args);

  bool is_var() const { return is_var_; }
  bool is_app() const { return !is_var_; }
  const std::string& name() const { return name_; } // variable name or symbol
  const TypePtr& var_type() const { return ty_; }
  VarKind kind() const { return kind_; }
  const std::vector<TypePtr>& ty_args() const { return ty_args_; }
  const std::vector<TermPtr>& args() const { return args_; }

  std::string str() const;

private:
  Term() = default;
  bool is_var_ = false;
  std::string name_;
  TypePtr ty_;                    // variables only
  VarKind kind_ = VarKind::universal;
  std::vector<TypePtr> ty_args_; // applications only
  std::vector<TermPtr> args_;
};

bool equal(const TermPtr& a, const TermPtr& b);

// ---------------------------------------------------------------------------
// Formulas (negation normal form; type quantifiers only at the top)

enum class FormulaKind {
  pred_lit,    // [~]p<ty_args>(args)
  eq_lit,      // lhs ~(!)= rhs
  conj,
  disj,
  forall_term,
  exists_term,
  forall_type,
};

class Formula {
public:
  static FormulaPtr pred_lit(bool positive, std::string sym,
                             std::vector<TypePtr> ty_args, std::vector<TermPtr> args);
  static FormulaPtr eq_lit(bool positive, TermPtr lhs, TermPtr rhs);
  static FormulaPtr conj(FormulaPtr lhs, FormulaPtr rhs);
  static FormulaPtr disj(FormulaPtr lhs, FormulaPtr rhs);
  // conj/disj over a list; empty list is invalid (no true/false nodes).
  static FormulaPtr conj_all(const std::vector<FormulaPtr>& fs);
  static FormulaPtr disj_all(const std::vector<FormulaPtr>& fs);
  static FormulaPtr forall(std::string var, TypePtr ty, FormulaPtr body);
  static FormulaPtr exists(std::string var, TypePtr ty, FormulaPtr body);
  static FormulaPtr forall_ty(std::string ty_var, FormulaPtr body);

  FormulaKind kind() const { return kind_; }
  bool positive() const { return positive_; }
  const std::string& sym() const { return sym_; }
  const std::vector<TypePtr>& ty_args() const { return ty_args_; }
  const std::vector<TermPtr>& args() const { return args_; }
  const TermPtr& lhs_term() const { return args_[0]; }
  const TermPtr& rhs_term() const { return args_[1]; }
  const FormulaPtr& lhs() const { return sub_[0]; }
  const FormulaPtr& rhs() const { return sub_[1]; }
  const FormulaPtr& body() const { return sub_[0]; }
  const std::string& var() const { return sym_; }    // quantified variable / type variable
  const TypePtr& var_type() const { return var_ty_; }

  std::string str() const;

private:
  Formula() = default;
  FormulaKind kind_ = FormulaKind::conj;
  bool positive_ = true;
  std::string sym_;
  TypePtr var_ty_;
  std::vector<TypePtr> ty_args_;
  std::vector<TermPtr> args_;
  std::vector<FormulaPtr> sub_;
};

bool equal(const FormulaPtr& a, const FormulaPtr& b);

// Free typed term variables (name -> type); sentences have none.
std::map<std::string, TypePtr> free_term_vars(const FormulaPtr& f);
std::set<std::string> free_type_vars(const FormulaPtr& f);
void collect_type_vars(const TermPtr& t, std::set<std::string>& out);
void collect_type_vars(const FormulaPtr& f, std::set<std::string>& out);

TermPtr apply_type_subst(const TermPtr& t, const TypeSubst& rho);
FormulaPtr apply_type_subst(const FormulaPtr& f, const TypeSubst& rho);

// ---------------------------------------------------------------------------
// Signatures and problems

enum class Level { polymorphic, monomorphic, untyped };

struct FunSig {
  std::vector<std::string> ty_vars;
  std::vector<TypePtr> arg_types;
  TypePtr result;
};

struct PredSig {
  std::vector<std::string> ty_vars;
  std::vector<TypePtr> arg_types;
};

struct Signature {
  Level level = Level::polymorphic;
  std::map<std::string, std::size_t> type_ctors;
  std::map<std::string, FunSig> funs;
  std::map<std::string, PredSig> preds;

  bool has_symbol(const std::string& s) const {
    return funs.count(s) != 0 || preds.count(s) != 0;
  }
  // Every signature keeps at least one nullary type constructor so the set
  // of ground types is nonempty; returns its name (inserting a fresh "iota"
  // if the user declared none).
  std::string ensure_nullary_ctor();
  std::optional<std::string> some_nullary_ctor() const;
};

enum class Role { axiom, hypothesis, conjecture, negated_conjecture };

std::string role_name(Role r);

struct NamedFormula {
  std::string name;
  Role role = Role::axiom;
  FormulaPtr formula;
};

struct Problem {
  Signature sig;
  std::vector<NamedFormula> sentences;
};

// The single-sorted view used for untyped problems.
TypePtr untyped_sort();

} // namespace polyenc

#endif
