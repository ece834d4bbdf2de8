// Acceptance suite: one check per criterion, one pass/fail line each.

#include <chrono>
#include <iomanip>
#include <iostream>

#include "polyenc/encode.hpp"
#include "polyenc/monomorph.hpp"
#include "polyenc/oracle.hpp"
#include "polyenc/typing.hpp"
#include "properties.hpp"
#include "support.hpp"

using namespace polyenc;
using namespace polyenc::testing;

namespace {

#ifndef POLYENC_GOLDEN_DIR
#define POLYENC_GOLDEN_DIR "tests/golden"
#endif

int failures = 0;

void report(int criterion, bool ok, const std::string& detail) {
  std::cout << "criterion " << criterion << ": " << (ok ? "PASS" : "FAIL") << " - " << detail
            << "\n";
  if (!ok) ++failures;
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Problem encode_with(const Problem& p, const std::string& scheme_name, bool mono,
                    const InfRegistry& inf = {}) {
  SchemeId scheme = *parse_scheme(scheme_name, mono);
  EncodeContext ctx = make_context(p, scheme, inf, CoverPolicy::minimal_earliest);
  return run_pipeline(p, scheme, ctx).problem;
}

// --- criterion 1: unsoundness of full erasure -------------------------------

void criterion_1() {
  std::ostringstream detail;
  bool ok = true;

  Problem qf = load_corpus("qf_unsound.p", Level::polymorphic);
  auto model = find_model(qf, 2);
  ok = ok && model.has_value() && evaluate(*model, qf);
  detail << "typed instance-confusion problem sat at bound 2; ";

  auto t0 = std::chrono::steady_clock::now();
  RefuteResult r1 = refute(clausify(encode_with(qf, "e", false)));
  double dt = seconds_since(t0);
  ok = ok && r1.outcome == RefuteOutcome::refutation_found && dt < 1.0;
  detail << "its erasure refuted in " << std::fixed << std::setprecision(3) << dt << "s; ";

  Problem unit = load_corpus("unit_card.p", Level::polymorphic);
  ok = ok && find_model(unit, 3).has_value();
  RefuteResult r2 = refute(clausify(encode_with(unit, "e", false)));
  ok = ok && r2.outcome == RefuteOutcome::refutation_found;
  detail << "erased cardinality axiom refuted";
  report(1, ok, detail.str());
}

// --- criterion 2: soundness on satisfiable instances -------------------------

void criterion_2() {
  bool ok = true;
  std::ostringstream detail;
  Problem village = load_corpus("monkey_village.p", Level::polymorphic);
  ok = ok && find_model(village, 3).has_value();
  detail << "typed village sat at bound 3; encodings sat at bound 4:";

  Problem village_mono = load_corpus("monkey_village.p", Level::monomorphic);
  std::vector<std::pair<std::string, Problem>> encoded = {
      {"g", encode_with(village, "g", false)},
      {"g_at", encode_with(village, "g_at", false)},
      {"mono g_q", encode_with(village_mono, "g_q", true)},
      {"mono g_qq", encode_with(village_mono, "g_qq", true)},
  };
  for (const auto& [name, enc] : encoded) {
    auto t0 = std::chrono::steady_clock::now();
    auto model = find_model(enc, 4);
    double dt = seconds_since(t0);
    bool this_ok = model.has_value() && evaluate(*model, enc) && dt < 30.0;
    ok = ok && this_ok;
    detail << " " << name << (this_ok ? "" : "[FAIL]");
  }
  report(2, ok, detail.str());
}

// --- criterion 3: completeness on unsatisfiable instances --------------------

void criterion_3() {
  bool ok = true;
  std::ostringstream detail;
  detail << "refuted within 50000 steps:";

  Problem lists = load_corpus("lists_poly.p", Level::polymorphic);
  InfRegistry inf = parse_inf_registry(read_file(corpus_path("lists_poly.inf")), lists.sig);
  for (const char* name : {"e", "t", "g", "t_at", "g_at", "t_q", "t_qq", "g_q", "g_qq"}) {
    RefuteResult r = refute(clausify(encode_with(lists, name, false, inf)), 50000);
    bool this_ok = r.outcome == RefuteOutcome::refutation_found;
    ok = ok && this_ok;
    detail << " " << name << "=" << (this_ok ? std::to_string(r.steps) : "FAIL");
  }

  Problem mono = load_corpus("lists_mono.p", Level::monomorphic);
  InfRegistry minf = parse_inf_registry(read_file(corpus_path("lists_mono.inf")), mono.sig);
  for (const char* name : {"t_q", "t_qq", "g_q", "g_qq"}) {
    RefuteResult r = refute(clausify(encode_with(mono, name, true, minf)), 50000);
    bool this_ok = r.outcome == RefuteOutcome::refutation_found;
    ok = ok && this_ok;
    detail << " mono:" << name << "=" << (this_ok ? std::to_string(r.steps) : "FAIL");
  }
  report(3, ok, detail.str());
}

// --- criterion 4: golden outputs ---------------------------------------------

void criterion_4() {
  bool ok = true;
  std::ostringstream detail;
  detail << "golden files:";

  auto check = [&](const std::string& file, const std::string& scheme, bool mono,
                   const std::string& registry, const std::string& golden_name) {
    Level level = mono ? Level::monomorphic : Level::polymorphic;
    Problem p = load_corpus(file, level);
    InfRegistry inf;
    if (!registry.empty())
      inf = parse_inf_registry(read_file(corpus_path(registry)), p.sig);
    std::string got = print(encode_with(p, scheme, mono, inf), Level::untyped);
    std::string want = read_file(std::string(POLYENC_GOLDEN_DIR) + "/" + golden_name);
    bool this_ok = got == want;
    ok = ok && this_ok;
    detail << " " << golden_name << (this_ok ? "" : "[FAIL]");
  };

  check("monkey_village.p", "e", false, "", "monkey_e.fof");
  check("lists_poly.p", "t", false, "", "lists_t.fof");
  check("linorder.p", "t", false, "", "linorder_t.fof");
  check("lists_poly.p", "g", false, "", "lists_g.fof");
  check("inl_inr.p", "g", false, "", "sum_g.fof");
  check("lists_poly.p", "g_at", false, "", "lists_g_at.fof");
  check("lists_poly.p", "t_at", false, "", "lists_t_at.fof");
  check("lists_mono.p", "t_q", true, "lists_mono.inf", "lists_mono_t_q.fof");
  check("lists_mono.p", "t_qq", true, "lists_mono.inf", "lists_mono_t_qq.fof");
  check("lists_mono.p", "g_q", true, "lists_mono.inf", "lists_mono_g_q.fof");
  check("lists_mono.p", "g_qq", true, "lists_mono.inf", "lists_mono_g_qq.fof");
  check("lists_poly.p", "t_q", false, "lists_poly.inf", "lists_t_q.fof");
  check("lists_poly.p", "t_qq", false, "lists_poly.inf", "lists_t_qq.fof");
  check("lists_poly.p", "g_qq", false, "lists_poly.inf", "lists_g_qq.fof");
  report(4, ok, detail.str());
}

// --- criterion 5: monotonicity verdicts --------------------------------------

void criterion_5() {
  bool ok = true;
  std::ostringstream detail;

  Problem village = load_corpus("monkey_village.p", Level::monomorphic);
  MonoVerdicts v1 = infer_mono_monomorphic(village, {});
  bool monkey_ok =
      v1.monotonic(Type::app("banana", {})) && !v1.monotonic(Type::app("monkey", {}));
  ok = ok && monkey_ok;
  detail << "village {banana ok, monkey not}" << (monkey_ok ? "" : "[FAIL]") << "; ";

  Problem mono = load_corpus("lists_mono.p", Level::monomorphic);
  InfRegistry minf = parse_inf_registry(read_file(corpus_path("lists_mono.inf")), mono.sig);
  MonoVerdicts v2 = infer_mono_monomorphic(mono, minf);
  bool mono_ok = v2.monotonic(Type::app("list_w", {})) && !v2.monotonic(Type::app("w", {}));
  ok = ok && mono_ok;
  detail << "mono lists {list_w ok, w not}" << (mono_ok ? "" : "[FAIL]") << "; ";

  Problem lists = load_corpus("lists_poly.p", Level::polymorphic);
  InfRegistry pinf = parse_inf_registry(read_file(corpus_path("lists_poly.inf")), lists.sig);
  MonoVerdicts v3 = infer_mono_polymorphic(lists, pinf);
  bool poly_ok = v3.monotonic(Type::app("list", {Type::var("A")})) &&
                 !v3.monotonic(Type::var("A")) && !v3.monotonic(Type::app("w", {}));
  ok = ok && poly_ok;
  detail << "poly lists {list(A) ok, A not, w not}" << (poly_ok ? "" : "[FAIL]");
  report(5, ok, detail.str());
}

// --- criterion 6: invariant property suites ----------------------------------

void criterion_6() {
  bool ok = true;
  std::ostringstream detail;
  auto run = [&](const char* name, const PropResult& r) {
    bool this_ok = r.ok() && r.checked >= 500;
    ok = ok && this_ok;
    detail << name << "=" << r.checked << (this_ok ? " " : "[FAIL: " + r.first_failure + "] ");
  };
  run("naked-absence", prop_naked_absence(1001, 500));
  run("guardedness", prop_guardedness(1003, 500));
  run("typing", prop_typing_preservation(1005, 500));
  run("instance-closure", prop_instance_closure(1007, 500));
  run("cap-U", prop_compute_u(1009, 500));
  report(6, ok, detail.str());
}

// --- criterion 7: monomorphisation bounds ------------------------------------

void criterion_7() {
  Gen gen(2027);
  // Half random sentences, half a family whose instances keep growing
  // (each round introduces a deeper ground type), so the budget and the
  // round cap both engage.
  Problem corpus;
  corpus.sig = gen.random_signature();
  {
    PredSig q;
    q.ty_vars = {"A"};
    q.arg_types = {Type::var("A")};
    corpus.sig.preds.emplace("q", std::move(q));
    FunSig c;
    c.ty_vars = {"A"};
    c.result = Type::app("k", {Type::var("A")});
    corpus.sig.funs.emplace("c", std::move(c));
    FunSig cd;
    cd.result = Type::app("d", {});
    corpus.sig.funs.emplace("cd", std::move(cd));
  }
  corpus.sentences.push_back(
      {"seed", Role::axiom,
       Formula::pred_lit(true, "q", {Type::app("d", {})}, {Term::app("cd", {}, {})})});
  std::size_t guard = 0;
  while (corpus.sentences.size() < 250 && guard++ < 5000) {
    auto f = gen.random_sentence(corpus.sig);
    if (!f) continue;
    corpus.sentences.push_back(
        {"r" + std::to_string(corpus.sentences.size()), Role::axiom, *f});
  }
  while (corpus.sentences.size() < 500) {
    TypePtr alpha = Type::var("G");
    TermPtr x = Term::var("X", alpha, VarKind::universal);
    FormulaPtr body = Formula::disj(
        Formula::pred_lit(false, "q", {alpha}, {x}),
        Formula::pred_lit(true, "q", {Type::app("k", {alpha})},
                          {Term::app("c", {alpha}, {})}));
    corpus.sentences.push_back(
        {"grow" + std::to_string(corpus.sentences.size()), Role::axiom,
         Formula::forall_ty("G", Formula::forall("X", alpha, body))});
  }
  auto t0 = std::chrono::steady_clock::now();
  MonoResult r = monomorphise(corpus, {});
  double dt = seconds_since(t0);
  bool ok = corpus.sentences.size() == 500 && r.problem.sentences.size() <= 700 &&
            r.rounds_used <= 3 && dt < 10.0;
  std::ostringstream detail;
  detail << "500 -> " << r.problem.sentences.size() << " formulas, " << r.rounds_used
         << " rounds, " << std::fixed << std::setprecision(2) << dt << "s";
  report(7, ok, detail.str());
}

// --- criterion 8: size statistics trend ---------------------------------------

void criterion_8() {
  Problem lists = load_corpus("lists_poly.p", Level::polymorphic);
  InfRegistry inf = parse_inf_registry(read_file(corpus_path("lists_poly.inf")), lists.sig);

  auto symbols = [&](const Problem& p) { return problem_stats(p, true).symbols; };

  std::size_t t_syms = symbols(encode_with(lists, "t", false, inf));
  std::size_t tqq_syms = symbols(encode_with(lists, "t_qq", false, inf));
  std::size_t g_syms = symbols(encode_with(lists, "g", false, inf));
  std::size_t gqq_syms = symbols(encode_with(lists, "g_qq", false, inf));

  Problem mono = monomorphise(lists).problem;
  InfRegistry minf = parse_inf_registry(read_file(corpus_path("lists_mono.inf")), mono.sig);
  bool mono_lighter = true;
  std::ostringstream mono_detail;
  for (const char* name : {"t_q", "t_qq", "g_q", "g_qq"}) {
    std::size_t ps = symbols(encode_with(lists, name, false, inf));
    std::size_t ms = symbols(encode_with(mono, name, true, minf));
    mono_lighter = mono_lighter && ms < ps;
    mono_detail << " " << name << ":" << ms << "<" << ps;
  }

  bool ok = t_syms > tqq_syms && g_syms > gqq_syms && mono_lighter;
  std::ostringstream detail;
  detail << "symbols t=" << t_syms << " > t_qq=" << tqq_syms << ", g=" << g_syms
         << " > g_qq=" << gqq_syms << ", mono<poly:" << mono_detail.str();
  report(8, ok, detail.str());
}

// --- criterion 9: round trips --------------------------------------------------

void criterion_9() {
  bool ok = true;
  std::ostringstream detail;
  for (const auto& [file, level] :
       std::vector<std::pair<std::string, Level>>{{"monkey_village.p", Level::polymorphic},
                                                  {"lists_poly.p", Level::polymorphic},
                                                  {"lists_mono.p", Level::monomorphic},
                                                  {"qf_unsound.p", Level::polymorphic},
                                                  {"unit_card.p", Level::polymorphic},
                                                  {"linorder.p", Level::polymorphic},
                                                  {"inl_inr.p", Level::polymorphic}}) {
    Problem once = load_corpus(file, level);
    std::string text = print(once, level);
    Problem twice = parse_text(text, level);
    bool this_ok = problems_equal(once, twice) && print(twice, level) == text;
    ok = ok && this_ok;
    if (!this_ok) detail << file << "[FAIL] ";
  }
  detail << "corpus fixpoint; ";
  PropResult r = prop_roundtrip(2029, 334); // three level round trips per sample: > 1000
  ok = ok && r.ok() && r.checked >= 334;
  detail << "generator samples=" << 3 * r.checked
         << (r.ok() ? "" : " [FAIL: " + r.first_failure + "]");
  report(9, ok, detail.str());
}

} // namespace

int main() {
  try {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
  } catch (const std::exception& e) {
    std::cout << "acceptance suite aborted: " << e.what() << "\n";
    return 2;
  }
  if (failures == 0)
    std::cout << "all criteria passed\n";
  else
    std::cout << failures << " criteria failed\n";
  return failures == 0 ? 0 : 1;
}
