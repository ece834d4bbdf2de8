// Desk-scale semantic toolbox: evaluation in explicit finite structures,
// bounded finite-model enumeration, clausification, and a small resolution
// refuter.

#ifndef POLYENC_ORACLE_HPP
#define POLYENC_ORACLE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "polyenc/ast.hpp"

namespace polyenc {

// Explicit finite structure. Domains are indexed; elements of domain d are
// 0..size-1. Polymorphic symbols are interpreted per ground type-argument
// instance.
struct FiniteModel {
  struct FunTable {
    std::vector<std::size_t> arg_domains; // domain indices
    std::size_t result_domain = 0;
    std::vector<std::size_t> values; // row-major over argument tuples
  };
  struct PredTable {
    std::vector<std::size_t> arg_domains;
    std::vector<bool> values;
  };

  std::vector<std::pair<TypePtr, std::size_t>> domains; // ground type, size
  std::map<std::string, std::size_t> domain_index;      // type str -> index
  std::map<std::string, FunTable> funs;                 // instance key -> table
  std::map<std::string, PredTable> preds;

  std::size_t domain_of(const TypePtr& ground_ty) const;
  static std::string instance_key(const std::string& sym, const std::vector<TypePtr>& ty_args);
};

// Valuations for evaluate: type variables to ground types (by domain), term
// variables to (domain element) ids.
using TypeValuation = std::map<std::string, TypePtr>;
using TermValuation = std::map<std::string, std::size_t>;

bool evaluate(const FiniteModel& model, const Signature& sig, const FormulaPtr& phi,
              const TypeValuation& theta = {}, const TermValuation& xi = {});
bool evaluate(const FiniteModel& model, const Problem& p);

// Bounded model search: enumerates domain-size vectors over the ground types
// occurring in the problem with total size up to the bound. Requires a
// monomorphic or untyped problem (ground-typed sentences). Every returned
// model re-verifies under evaluate.
std::optional<FiniteModel> find_model(const Problem& p, std::size_t max_total_size);

// ---------------------------------------------------------------------------
// Clauses

struct Literal {
  bool positive = true;
  bool is_eq = false;
  std::string sym;                // predicate literals only
  std::vector<TypePtr> ty_args;   // ground type arguments of the predicate
  std::vector<TermPtr> args;      // eq: exactly two

  std::string str() const;
};

struct Clause {
  std::vector<Literal> literals; // variables implicitly universal

  std::string str() const;
};

struct ClauseSet {
  Signature sig; // original signature plus Skolem symbols
  std::vector<Clause> clauses;
};

// Standard Skolemization and or-over-and distribution for NNF input without
// type quantifiers.
ClauseSet clausify(const Problem& p);

enum class RefuteOutcome { refutation_found, gave_up };

struct RefuteResult {
  RefuteOutcome outcome = RefuteOutcome::gave_up;
  std::size_t steps = 0;    // clauses generated
  std::size_t kept = 0;     // clauses retained after subsumption
};

// paramodulation: resolution + factoring + equality resolution +
// unordered paramodulation, with reflexivity axioms. congruence_axioms:
// resolution + factoring over the full equality axiomatization
// (reflexivity, symmetry, transitivity, congruence); far slower, kept as
// the independently checkable reference route.
enum class EqualityHandling { paramodulation, congruence_axioms };

// Given-clause saturation; refutation_found implies unsatisfiability.
RefuteResult refute(const ClauseSet& cs, std::size_t step_limit = 50000,
                    EqualityHandling eq = EqualityHandling::paramodulation);

// ---------------------------------------------------------------------------
// Status checking

struct Expectation {
  bool sat = false;
  std::size_t bound = 0; // sat only
};

enum class CheckOutcome { pass, fail, inconclusive };

struct CheckBudget {
  std::size_t steps = 50000;        // refuter budget
  std::size_t cross_model_bound = 3; // bound used to cross-check "unsat"
};

// sat(b) is certified by find_model + evaluate; unsat by refute. The
// opposite direction is cross-checked so a proven contradiction of the
// expectation reports fail rather than inconclusive. Polymorphic problems
// are monomorphised first for the unsat direction (sound: instances are
// consequences); their sat direction is inconclusive by construction.
CheckOutcome check_status(const Problem& p, const Expectation& expected,
                          const CheckBudget& budget = {});

// Problem size statistics in the style of clause-count reporting.
struct ProblemStats {
  std::size_t clauses = 0;
  double literals_per_clause = 0.0;
  double symbols_per_atom = 0.0;
  std::size_t symbols = 0; // total symbol occurrences (incl. variables)
};

ProblemStats problem_stats(const Problem& p, bool clausified);

} // namespace polyenc

#endif
