// google-benchmark timings for the hot paths: parsing, the encoding
// pipelines, monomorphisation, and the oracle.

#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>

#include "polyenc/encode.hpp"
#include "polyenc/monomorph.hpp"
#include "polyenc/oracle.hpp"
#include "polyenc/tptp.hpp"

namespace {

using namespace polyenc;

#ifndef POLYENC_CORPUS_DIR
#define POLYENC_CORPUS_DIR "corpus"
#endif

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Problem lists() {
  ParseOptions opts;
  opts.level = Level::polymorphic;
  static const std::string text = read_file(std::string(POLYENC_CORPUS_DIR) + "/lists_poly.p");
  return parse(text, opts).problem;
}

InfRegistry lists_registry(const Signature& sig) {
  static const std::string text =
      read_file(std::string(POLYENC_CORPUS_DIR) + "/lists_poly.inf");
  return parse_inf_registry(text, sig);
}

void BM_parse_tff1(benchmark::State& state) {
  std::string text = read_file(std::string(POLYENC_CORPUS_DIR) + "/lists_poly.p");
  ParseOptions opts;
  opts.level = Level::polymorphic;
  for (auto _ : state) benchmark::DoNotOptimize(parse(text, opts));
}
BENCHMARK(BM_parse_tff1);

void BM_encode_scheme(benchmark::State& state, const char* name) {
  Problem p = lists();
  InfRegistry inf = lists_registry(p.sig);
  SchemeId scheme = *parse_scheme(name, false);
  for (auto _ : state) {
    EncodeContext ctx = make_context(p, scheme, inf, CoverPolicy::minimal_earliest);
    benchmark::DoNotOptimize(run_pipeline(p, scheme, ctx));
  }
}
BENCHMARK_CAPTURE(BM_encode_scheme, tags_traditional, "t");
BENCHMARK_CAPTURE(BM_encode_scheme, guards_traditional, "g");
BENCHMARK_CAPTURE(BM_encode_scheme, cover_guards, "g_at");
BENCHMARK_CAPTURE(BM_encode_scheme, feather_guards, "g_qq");

void BM_monomorphise(benchmark::State& state) {
  Problem p = lists();
  for (auto _ : state) benchmark::DoNotOptimize(monomorphise(p));
}
BENCHMARK(BM_monomorphise);

void BM_refute_mono_lists(benchmark::State& state) {
  ParseOptions opts;
  opts.level = Level::monomorphic;
  Problem p = parse(read_file(std::string(POLYENC_CORPUS_DIR) + "/lists_mono.p"), opts).problem;
  ClauseSet cs = clausify(p);
  for (auto _ : state) benchmark::DoNotOptimize(refute(cs));
}
BENCHMARK(BM_refute_mono_lists);

void BM_find_model_village(benchmark::State& state) {
  ParseOptions opts;
  opts.level = Level::polymorphic;
  Problem p =
      parse(read_file(std::string(POLYENC_CORPUS_DIR) + "/monkey_village.p"), opts).problem;
  for (auto _ : state) benchmark::DoNotOptimize(find_model(p, 3));
}
BENCHMARK(BM_find_model_village);

} // namespace

BENCHMARK_MAIN();
