// The type encodings: full erasure, type arguments with filters, traditional
// and cover-based tags/guards, and the monotonicity-based lightweight and
// featherweight families, plus the stage compositions behind each scheme
// name.

#ifndef POLYENC_ENCODE_HPP
#define POLYENC_ENCODE_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "polyenc/analysis.hpp"
#include "polyenc/ast.hpp"

namespace polyenc {

enum class SchemeKind {
  erased,
  args_full,
  args_phan,
  args_ninf,
  tags_trad,
  guards_trad,
  tags_cover,
  guards_cover,
  tags_light,
  tags_feather,
  guards_light,
  guards_feather,
};

// level is the source level the scheme applies to: polymorphic pipelines end
// in the type-arguments stage plus erasure, monomorphic ones erase directly.
struct SchemeId {
  SchemeKind kind;
  Level level = Level::polymorphic;
};

// CLI names: e a a_phan a_ninf t g t_at g_at t_q t_qq g_q g_qq.
std::optional<SchemeId> parse_scheme(const std::string& name, bool mono);
std::string scheme_name(SchemeId id);
std::vector<std::string> scheme_names(bool mono);

enum class ArgFilter { full, phan, ninf, none };

// One stage's output: the translated input sentences and the axioms the
// stage added, over the stage's target signature.
struct EncodedProblem {
  Signature target_sig;
  std::vector<NamedFormula> axioms;
  std::vector<NamedFormula> translated;

  Problem to_problem() const;
};

EncodedProblem erase_types(const Problem& p);
EncodedProblem add_type_args(const Problem& p, ArgFilter filter);
EncodedProblem tags_traditional(const Problem& p);
EncodedProblem guards_traditional(const Problem& p);
EncodedProblem tags_cover(const Problem& p, const CoverAssignment& covers);
EncodedProblem guards_cover(const Problem& p, const CoverAssignment& covers);

// level selects between the polymorphic t<sigma>/g<sigma> distinguished
// symbols and the monomorphic type-indexed families; cap_V is V_Phi and is
// used by the polymorphic variants only.
EncodedProblem tags_light(const Problem& p, const MonoVerdicts& verdicts,
                          const std::vector<TypePtr>& cap_V, Level level);
EncodedProblem tags_feather(const Problem& p, const MonoVerdicts& verdicts,
                            const std::vector<TypePtr>& cap_V, Level level);
EncodedProblem guards_light(const Problem& p, const MonoVerdicts& verdicts,
                            const std::vector<TypePtr>& cap_V, Level level);
EncodedProblem guards_feather(const Problem& p, const MonoVerdicts& verdicts,
                              const std::vector<TypePtr>& cap_V, Level level);

struct EncodeContext {
  CoverAssignment covers;
  MonoVerdicts verdicts;
  std::vector<TypePtr> cap_V;
};

EncodeContext make_context(const Problem& p, SchemeId scheme, const InfRegistry& inf,
                           CoverPolicy policy,
                           const std::vector<TypePtr>& protect_extra = {});

struct PipelineResult {
  Problem problem; // final, untyped
  // Output formula name -> input formula name, or "schema" for added axioms.
  std::map<std::string, std::string> provenance;
  std::set<std::string> axiom_names;
};

// Composes the scheme's stages and renames translated sentences to f_<i>;
// axioms keep their ax_* names. Throws InternalError on a level mismatch.
PipelineResult run_pipeline(const Problem& p, SchemeId scheme, const EncodeContext& ctx);

// Deterministic fresh-name generator used for minted symbols.
class NameMint {
public:
  explicit NameMint(std::set<std::string> taken) : taken_(std::move(taken)) {}
  std::string mint(const std::string& key, const std::string& base);

private:
  std::set<std::string> taken_;
  std::map<std::string, std::string> assigned_;
};

// Flattened, TPTP-safe rendering of a ground type ("list_w").
std::string mangle_type_base(const TypePtr& ty);

} // namespace polyenc

#endif
