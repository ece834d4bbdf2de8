// Signature and problem analyses feeding the encodings: phantom/inferable
// classification of type arguments, cover selection, the monomorphic and
// polymorphic monotonicity calculi, and the cap sets for the lightweight
// polymorphic encodings.

#ifndef POLYENC_ANALYSIS_HPP
#define POLYENC_ANALYSIS_HPP

#include <map>
#include <set>
#include <string>
#include <vector>

#include "polyenc/ast.hpp"
#include "polyenc/vars.hpp"

namespace polyenc {

// 1-based type-argument indices per symbol.
struct SymbolArgClasses {
  std::set<std::size_t> phantom;
  std::set<std::size_t> inferable;
  std::set<std::size_t> noninferable; // includes every phantom
};

struct ArgClassification {
  std::map<std::string, SymbolArgClasses> by_symbol;
};

ArgClassification classify_args(const Signature& sig);

enum class CoverPolicy { minimal_earliest, maximal };

// Covers for every function and predicate symbol. minimal_earliest picks,
// for each symbol, the lexicographically smallest minimal cover; maximal
// picks all argument positions.
CoverAssignment choose_covers(const Signature& sig, CoverPolicy policy);

bool is_cover(const Signature& sig, const std::string& sym,
              const std::set<std::size_t>& candidate);

// Declared-infinite types. A type is treated as infinite iff it is an
// instance of some declared entry.
struct InfRegistry {
  std::vector<TypePtr> declared;
  bool is_infinite(const TypePtr& ty) const;
};

// One type per line in TPTP type syntax (upper-case words are variables);
// '%' comments and blank lines allowed. Constructors are validated against
// the signature.
InfRegistry parse_inf_registry(const std::string& text, const Signature& sig);

// Monotonicity verdicts as two simplified caps: the surely infinite types J
// and the possibly nonmonotonic (naked-variable) types N. A type passes iff
// it is an instance of a J member or shares no instance with any N member.
struct MonoVerdicts {
  std::vector<TypePtr> surely_infinite;   // J
  std::vector<TypePtr> possibly_nonmono;  // N
  std::vector<TypePtr> protect_extra;     // optional override: never monotonic
  bool monotonic(const TypePtr& sigma) const;
};

struct NakedOccurrence {
  std::string var;
  TypePtr ty;
  std::string formula;
};

std::vector<NakedOccurrence> naked_occurrences(const Problem& p);

// Monomorphic calculus: a ground type is monotonic iff it is infinite or no
// naked variable of that type occurs. Requires every naked variable's type
// to be ground.
MonoVerdicts infer_mono_monomorphic(const Problem& p, const InfRegistry& inf);

// Polymorphic calculus over the J/N caps.
MonoVerdicts infer_mono_polymorphic(const Problem& p, const InfRegistry& inf);

// Inserts into a cap, dropping instances of existing members and existing
// members that are instances of the new type.
void cap_insert(std::vector<TypePtr>& cap, const TypePtr& ty);

// Reduces a set to a cap of itself: every input type is an instance of some
// member and no member is an instance of another.
std::vector<TypePtr> cap_minimize(const std::vector<TypePtr>& types);

// Renames the type's variables to A, B, ... in first-occurrence order.
TypePtr canon_rename(const TypePtr& ty);

// Types of all subterms occurring in the problem (plus binder types),
// deduplicated up to variable renaming and canonically renamed.
std::vector<TypePtr> types_of(const Problem& p);

// Cap of the union of the per-type caps U_sigma over the possibly
// nonmonotonic subterm types; every member is monotonic. Candidate
// instances are enumerated to substitution depth 1 over the registry's
// declared types.
std::vector<TypePtr> compute_U(const Problem& p, const MonoVerdicts& verdicts,
                               const InfRegistry& inf);

} // namespace polyenc

#endif
