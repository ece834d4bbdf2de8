#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "polyenc/encode.hpp"
#include "polyenc/typing.hpp"
#include "properties.hpp"
#include "support.hpp"

using namespace polyenc;
using namespace polyenc::testing;

namespace {

#ifndef POLYENC_GOLDEN_DIR
#define POLYENC_GOLDEN_DIR "tests/golden"
#endif

std::string golden(const std::string& name) {
  return read_file(std::string(POLYENC_GOLDEN_DIR) + "/" + name);
}

PipelineResult encode_corpus(const std::string& file, const std::string& scheme_name,
                             bool mono, const std::string& registry_file = "") {
  Level level = mono ? Level::monomorphic : Level::polymorphic;
  Problem p = load_corpus(file, level);
  InfRegistry inf;
  if (!registry_file.empty())
    inf = parse_inf_registry(read_file(corpus_path(registry_file)), p.sig);
  SchemeId scheme = *parse_scheme(scheme_name, mono);
  EncodeContext ctx = make_context(p, scheme, inf, CoverPolicy::minimal_earliest);
  return run_pipeline(p, scheme, ctx);
}

std::string encode_text(const std::string& file, const std::string& scheme_name, bool mono,
                        const std::string& registry_file = "") {
  return print(encode_corpus(file, scheme_name, mono, registry_file).problem, Level::untyped);
}

// Occurrences of a distinguished symbol in one named output sentence.
std::size_t count_symbol(const Problem& p, const std::string& sentence,
                         const std::string& symbol) {
  for (const auto& nf : p.sentences) {
    if (nf.name != sentence) continue;
    std::string text = nf.formula->str();
    std::size_t count = 0, pos = 0;
    while ((pos = text.find(symbol + "(", pos)) != std::string::npos) {
      ++count;
      pos += symbol.size();
    }
    return count;
  }
  FAIL("no sentence named " << sentence);
  return 0;
}

} // namespace

TEST_CASE("golden outputs for the worked examples") {
  CHECK(encode_text("monkey_village.p", "e", false) == golden("monkey_e.fof"));
  CHECK(encode_text("lists_poly.p", "t", false) == golden("lists_t.fof"));
  CHECK(encode_text("linorder.p", "t", false) == golden("linorder_t.fof"));
  CHECK(encode_text("lists_poly.p", "g", false) == golden("lists_g.fof"));
  CHECK(encode_text("inl_inr.p", "g", false) == golden("sum_g.fof"));
  CHECK(encode_text("lists_poly.p", "g_at", false) == golden("lists_g_at.fof"));
  CHECK(encode_text("lists_poly.p", "t_at", false) == golden("lists_t_at.fof"));
  CHECK(encode_text("lists_poly.p", "t_q", false, "lists_poly.inf") ==
        golden("lists_t_q.fof"));
  CHECK(encode_text("lists_poly.p", "t_qq", false, "lists_poly.inf") ==
        golden("lists_t_qq.fof"));
  CHECK(encode_text("lists_poly.p", "g_qq", false, "lists_poly.inf") ==
        golden("lists_g_qq.fof"));
  CHECK(encode_text("lists_mono.p", "t_q", true, "lists_mono.inf") ==
        golden("lists_mono_t_q.fof"));
  CHECK(encode_text("lists_mono.p", "t_qq", true, "lists_mono.inf") ==
        golden("lists_mono_t_qq.fof"));
  CHECK(encode_text("lists_mono.p", "g_q", true, "lists_mono.inf") ==
        golden("lists_mono_g_q.fof"));
  CHECK(encode_text("lists_mono.p", "g_qq", true, "lists_mono.inf") ==
        golden("lists_mono_g_qq.fof"));
}

TEST_CASE("traditional guards: guard and axiom counts per formula") {
  Problem p = encode_corpus("lists_poly.p", "g", false).problem;
  // Five axioms (four typing, one inhabitation) plus four translations.
  CHECK(p.sentences.size() == 9);
  CHECK(count_symbol(p, "ax_guard_nil", kGuardSymbol) == 1);
  CHECK(count_symbol(p, "ax_guard_cons", kGuardSymbol) == 3); // two premises, one conclusion
  CHECK(count_symbol(p, "ax_guard_hd", kGuardSymbol) == 2);
  CHECK(count_symbol(p, "ax_guard_tl", kGuardSymbol) == 2);
  CHECK(count_symbol(p, "ax_guard_exists", kGuardSymbol) == 1);
  CHECK(count_symbol(p, "f_0", kGuardSymbol) == 2);
  CHECK(count_symbol(p, "f_1", kGuardSymbol) == 3);
  CHECK(count_symbol(p, "f_2", kGuardSymbol) == 2);
  CHECK(count_symbol(p, "f_3", kGuardSymbol) == 4);
}

TEST_CASE("cover guards drop exactly the off-cover protections") {
  Problem p = encode_corpus("lists_poly.p", "g_at", false).problem;
  // The cons typing axiom carries exactly one guard premise.
  CHECK(count_symbol(p, "ax_guard_cons", kGuardSymbol) == 2); // one premise, one conclusion
  CHECK(count_symbol(p, "f_0", kGuardSymbol) == 1);
  // Everything else coincides with the traditional encoding.
  CHECK(count_symbol(p, "f_1", kGuardSymbol) == 3);
  CHECK(count_symbol(p, "f_2", kGuardSymbol) == 2);
  CHECK(count_symbol(p, "f_3", kGuardSymbol) == 4);
}

TEST_CASE("traditional tags: tag counts per formula") {
  Problem p = encode_corpus("lists_poly.p", "t", false).problem;
  CHECK(p.sentences.size() == 4); // no axioms
  CHECK(count_symbol(p, "f_0", kTagSymbol) == 4);
  CHECK(count_symbol(p, "f_1", kTagSymbol) == 6);
  CHECK(count_symbol(p, "f_2", kTagSymbol) == 10);
  CHECK(count_symbol(p, "f_3", kTagSymbol) == 10);
}

TEST_CASE("cover tags: only cover positions and naked equality sides") {
  Problem p = encode_corpus("lists_poly.p", "t_at", false).problem;
  CHECK(count_symbol(p, "ax_tag_nil", kTagSymbol) == 1);
  CHECK(count_symbol(p, "ax_tag_cons", kTagSymbol) == 3);
  CHECK(count_symbol(p, "f_0", kTagSymbol) == 1);   // X under cons's cover
  CHECK(count_symbol(p, "f_1", kTagSymbol) == 4);   // naked Xs twice, two witnesses
  CHECK(count_symbol(p, "f_2", kTagSymbol) == 4);
  CHECK(count_symbol(p, "f_3", kTagSymbol) == 4);   // four existential witnesses
}

TEST_CASE("lightweight tags on the polymorphic lists") {
  Problem p = encode_corpus("lists_poly.p", "t_q", false, "lists_poly.inf").problem;
  CHECK(count_symbol(p, "ax_tag_id_list_A", kTagSymbol) == 1);
  CHECK(count_symbol(p, "f_0", kTagSymbol) == 1);
  CHECK(count_symbol(p, "f_1", kTagSymbol) == 1);
  CHECK(count_symbol(p, "f_2", kTagSymbol) == 4);
  CHECK(count_symbol(p, "f_3", kTagSymbol) == 4);
}

TEST_CASE("featherweight tags on the polymorphic lists") {
  Problem p = encode_corpus("lists_poly.p", "t_qq", false, "lists_poly.inf").problem;
  CHECK(count_symbol(p, "ax_tag_hd", kTagSymbol) == 1);
  CHECK(count_symbol(p, "ax_tag_id_list_A", kTagSymbol) == 1);
  CHECK(count_symbol(p, "f_0", kTagSymbol) == 0);
  CHECK(count_symbol(p, "f_1", kTagSymbol) == 1); // witness equation for Y
  CHECK(count_symbol(p, "f_2", kTagSymbol) == 1); // naked X only
  CHECK(count_symbol(p, "f_3", kTagSymbol) == 2); // witness equations for X and Y
}

TEST_CASE("featherweight guards on the polymorphic lists") {
  Problem p = encode_corpus("lists_poly.p", "g_qq", false, "lists_poly.inf").problem;
  CHECK(p.sentences.size() == 6); // hd typing axiom, cap axiom, four translations
  CHECK(count_symbol(p, "ax_guard_hd", kGuardSymbol) == 1);
  CHECK(count_symbol(p, "ax_guard_true_list_A", kGuardSymbol) == 1);
  CHECK(count_symbol(p, "f_0", kGuardSymbol) == 0); // no naked variable in the body
  CHECK(count_symbol(p, "f_1", kGuardSymbol) == 1);
  CHECK(count_symbol(p, "f_2", kGuardSymbol) == 1);
  CHECK(count_symbol(p, "f_3", kGuardSymbol) == 2);
}

TEST_CASE("monomorphic lightweight and featherweight variants") {
  Problem tq = encode_corpus("lists_mono.p", "t_q", true, "lists_mono.inf").problem;
  CHECK(tq.sentences.size() == 4); // no axioms at the monomorphic level
  CHECK(count_symbol(tq, "f_2", "$$tag_w") == 4);

  Problem tqq = encode_corpus("lists_mono.p", "t_qq", true, "lists_mono.inf").problem;
  CHECK(count_symbol(tqq, "ax_tag_hd_w", "$$tag_w") == 1);
  CHECK(count_symbol(tqq, "f_2", "$$tag_w") == 1);

  Problem gq = encode_corpus("lists_mono.p", "g_q", true, "lists_mono.inf").problem;
  CHECK(count_symbol(gq, "ax_guard_hd_w", "$$guard_w") == 1);
  CHECK(count_symbol(gq, "f_0", "$$guard_w") == 1);

  Problem gqq = encode_corpus("lists_mono.p", "g_qq", true, "lists_mono.inf").problem;
  CHECK(count_symbol(gqq, "f_0", "$$guard_w") == 0); // the only difference to g_q
  CHECK(count_symbol(gqq, "f_2", "$$guard_w") == 1);
}

TEST_CASE("cover tags protect predicate cover positions") {
  // less_eq's cover is {1}: only the first argument is tagged.
  Problem p = encode_corpus("linorder.p", "t_at", false).problem;
  bool found = false;
  for (const auto& nf : p.sentences) {
    std::string s = nf.formula->str();
    if (s.find("less_eq($$tag(A__A,X),Y)") != std::string::npos) found = true;
  }
  CHECK(found);
}

TEST_CASE("monomorphic traditional tags and guards") {
  Problem tags = encode_corpus("lists_mono.p", "t", true).problem;
  CHECK(tags.sentences.size() == 4); // no axioms
  // Every term is wrapped: the disequation carries tags on all four terms.
  CHECK(count_symbol(tags, "f_0", "$$tag_list_w") == 3);
  CHECK(count_symbol(tags, "f_0", "$$tag_w") == 1);

  Problem guards = encode_corpus("lists_mono.p", "g", true).problem;
  // One guarded typing axiom per function symbol, one inhabitation axiom
  // per type of the signature, then the four translations.
  CHECK(guards.sentences.size() == 4 + 2 + 4);
  CHECK(count_symbol(guards, "ax_guard_cons_w", "$$guard_w") == 1);
  CHECK(count_symbol(guards, "ax_guard_cons_w", "$$guard_list_w") == 2);
  CHECK(count_symbol(guards, "ax_guard_exists_w", "$$guard_w") == 1);
  CHECK(count_symbol(guards, "ax_guard_exists_list_w", "$$guard_list_w") == 1);
}

TEST_CASE("phantom and noninferable type arguments become term arguments") {
  Problem lin = encode_corpus("linorder.p", "t", false).problem;
  REQUIRE(lin.sentences.size() == 1);
  std::string text = lin.sentences[0].formula->str();
  CHECK(text.find("linorder(A__A)") != std::string::npos);

  Problem sum = encode_corpus("inl_inr.p", "g", false).problem;
  bool found = false;
  for (const auto& nf : sum.sentences)
    if (nf.formula->str().find("inl(A__B,X)") != std::string::npos) found = true;
  CHECK(found);
}

TEST_CASE("erasure keeps term arities") {
  Problem p = load_corpus("lists_poly.p", Level::polymorphic);
  EncodedProblem e = erase_types(p);
  for (const auto& [name, fs] : p.sig.funs)
    CHECK(e.target_sig.funs.at(name).arg_types.size() == fs.arg_types.size());
  CHECK(check_well_typed(e.to_problem()).empty());
}

TEST_CASE("type-arguments stage arity budget") {
  Problem p = load_corpus("lists_poly.p", Level::polymorphic);
  ArgClassification classes = classify_args(p.sig);
  for (ArgFilter filter : {ArgFilter::full, ArgFilter::phan, ArgFilter::ninf}) {
    EncodedProblem a = add_type_args(p, filter);
    for (const auto& [name, fs] : p.sig.funs) {
      const auto& cls = classes.by_symbol.at(name);
      std::size_t expected = filter == ArgFilter::full ? fs.ty_vars.size()
                             : filter == ArgFilter::phan ? cls.phantom.size()
                                                         : cls.noninferable.size();
      CHECK(a.target_sig.funs.at(name).arg_types.size() ==
            fs.arg_types.size() + expected);
    }
    CHECK(check_well_typed(a.to_problem()).empty());
  }
}

TEST_CASE("maximal covers tag every universal variable argument") {
  Problem p = load_corpus("lists_poly.p", Level::polymorphic);
  CoverAssignment maximal = choose_covers(p.sig, CoverPolicy::maximal);
  EncodedProblem ep = tags_cover(p, maximal);
  // nil(A) != cons(t(A, X), t(list(A), Xs)): both argument positions tagged.
  std::string f0 = ep.translated[0].formula->str();
  CHECK(f0.find("cons(<A>,$$tag(<A>,X),$$tag(<list(A)>,Xs))") != std::string::npos);
}

TEST_CASE("traditional tags wrap ground atoms through the pipeline") {
  std::string text = R"(
tff(w_type, type, w: $tType).
tff(c_type, type, c: w).
tff(p_type, type, p: w > $o).
tff(ax, axiom, p(c)).
)";
  Problem p = parse_text(text, Level::polymorphic);
  SchemeId scheme = *parse_scheme("t", false);
  Problem out = run_pipeline(p, scheme, make_context(p, scheme, {}, CoverPolicy::minimal_earliest)).problem;
  REQUIRE(out.sentences.size() == 1);
  CHECK(out.sentences[0].formula->str() == "p($$tag(w,c))");
}

TEST_CASE("maximal covers make cover guards coincide with traditional guards") {
  Problem p = load_corpus("lists_poly.p", Level::polymorphic);
  CoverAssignment maximal = choose_covers(p.sig, CoverPolicy::maximal);
  EncodedProblem cover = guards_cover(p, maximal);
  EncodedProblem trad = guards_traditional(p);
  REQUIRE(cover.translated.size() == trad.translated.size());
  for (std::size_t i = 0; i < cover.translated.size(); ++i)
    CHECK(equal(cover.translated[i].formula, trad.translated[i].formula));
  REQUIRE(cover.axioms.size() == trad.axioms.size());
  for (std::size_t i = 0; i < cover.axioms.size(); ++i)
    CHECK(equal(cover.axioms[i].formula, trad.axioms[i].formula));
}

TEST_CASE("a fully monotonic problem passes through the light stages untouched") {
  Problem p = load_corpus("linorder.p", Level::polymorphic);
  MonoVerdicts v = infer_mono_polymorphic(p, {}); // no naked variables at all
  EncodedProblem tq = tags_light(p, v, {}, Level::polymorphic);
  CHECK(tq.axioms.empty());
  CHECK(equal(tq.translated[0].formula, p.sentences[0].formula));
  EncodedProblem gq = guards_light(p, v, {}, Level::polymorphic);
  CHECK(gq.axioms.empty());
  CHECK(equal(gq.translated[0].formula, p.sentences[0].formula));
}

TEST_CASE("the none filter adds no term arguments") {
  Problem p = load_corpus("lists_poly.p", Level::polymorphic);
  EncodedProblem a = add_type_args(p, ArgFilter::none);
  for (const auto& [name, fs] : p.sig.funs)
    CHECK(a.target_sig.funs.at(name).arg_types.size() == fs.arg_types.size());
  // The matrix under the quantifier prefix is untouched: erasing both sides
  // yields the same formulas once the vacuous theta binders are stripped.
  EncodedProblem direct = erase_types(p);
  EncodedProblem via_none = erase_types(a.to_problem());
  REQUIRE(direct.translated.size() == via_none.translated.size());
  for (std::size_t i = 0; i < direct.translated.size(); ++i) {
    FormulaPtr f = via_none.translated[i].formula;
    while (f->kind() == FormulaKind::forall_term &&
           f->var().rfind(kReservedVarPrefix, 0) == 0)
      f = f->body();
    CHECK(equal(f, direct.translated[i].formula));
  }
}

TEST_CASE("feather tags with all-nonmonotonic verdicts protect every position") {
  // The degenerate featherweight run (nothing monotonic) puts identity
  // witnesses on every existential and function axioms on every symbol.
  Problem p = load_corpus("lists_mono.p", Level::monomorphic);
  MonoVerdicts none;
  none.possibly_nonmono.push_back(Type::var("A")); // everything unifies with A
  EncodedProblem ep = tags_feather(p, none, {}, Level::monomorphic);
  CHECK(ep.axioms.size() == p.sig.funs.size()); // one per function symbol
  // Every equality side that is a universal variable is tagged.
  for (const auto& nf : ep.translated) {
    std::function<void(const FormulaPtr&)> walk = [&](const FormulaPtr& f) {
      switch (f->kind()) {
        case FormulaKind::eq_lit:
          if (f->positive())
            for (const auto& side : f->args())
              CHECK(!(side->is_var() && side->kind() == VarKind::universal));
          return;
        case FormulaKind::pred_lit:
          return;
        case FormulaKind::conj:
        case FormulaKind::disj:
          walk(f->lhs());
          walk(f->rhs());
          return;
        default:
          walk(f->body());
          return;
      }
    };
    walk(nf.formula);
  }
}

TEST_CASE("pipelines reject mismatched levels") {
  Problem p = load_corpus("lists_mono.p", Level::monomorphic);
  SchemeId scheme = *parse_scheme("t", false);
  CHECK_THROWS_AS(run_pipeline(p, scheme, {}), InternalError);
}

TEST_CASE("scheme name table") {
  CHECK(!parse_scheme("t_at", true));  // no monomorphic cover variant
  CHECK(!parse_scheme("a", true));
  CHECK(!parse_scheme("nope", false));
  for (bool mono : {false, true})
    for (const auto& name : scheme_names(mono)) {
      auto id = parse_scheme(name, mono);
      REQUIRE(id);
      CHECK(scheme_name(*id) == name);
    }
}

TEST_CASE("provenance maps outputs to sources") {
  PipelineResult r = encode_corpus("lists_poly.p", "g_qq", false, "lists_poly.inf");
  CHECK(r.provenance.at("f_0") == "ax1");
  CHECK(r.provenance.at("f_3") == "co");
  CHECK(r.provenance.at("ax_guard_hd") == "schema");
}

TEST_CASE("naked variables never survive the lightweight tag stages") {
  PropResult r = prop_naked_absence(61, 120);
  INFO(r.first_failure);
  CHECK(r.ok());
}

TEST_CASE("light and feather guard outputs are guarded where required") {
  PropResult r = prop_guardedness(67, 120);
  INFO(r.first_failure);
  CHECK(r.ok());
}

TEST_CASE("every stage preserves well-typedness") {
  PropResult r = prop_typing_preservation(71, 120);
  INFO(r.first_failure);
  CHECK(r.ok());
}
