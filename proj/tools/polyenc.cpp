// Command-line front end: parse -> analyze -> monomorphise -> encode ->
// print/check, plus size statistics.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "polyenc/analysis.hpp"
#include "polyenc/encode.hpp"
#include "polyenc/monomorph.hpp"
#include "polyenc/normalize.hpp"
#include "polyenc/oracle.hpp"
#include "polyenc/prover.hpp"
#include "polyenc/tptp.hpp"
#include "polyenc/typing.hpp"
#include "polyenc/unify.hpp"

namespace {

using namespace polyenc;

struct UserError : std::runtime_error {
  explicit UserError(const std::string& what) : std::runtime_error(what) {}
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UserError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw UserError("cannot write '" + path + "'");
  out << text;
}

Level parse_level(const std::string& name) {
  if (name == "tff1") return Level::polymorphic;
  if (name == "tff0") return Level::monomorphic;
  if (name == "fof") return Level::untyped;
  throw UserError("unknown level '" + name + "' (expected tff1, tff0, or fof)");
}

std::string include_dir_of(const std::string& path) {
  auto cut = path.find_last_of('/');
  return cut == std::string::npos ? "." : path.substr(0, cut);
}

ParseResult parse_input(const std::string& path, Level level, bool allow_reserved) {
  ParseOptions opts;
  opts.level = level;
  opts.allow_reserved = allow_reserved;
  opts.include_dir = include_dir_of(path);
  return parse(read_file(path), opts);
}

InfRegistry load_registry(const std::string& path, const Signature& sig) {
  if (path.empty()) return {};
  return parse_inf_registry(read_file(path), sig);
}

std::vector<TypePtr> load_type_list(const std::string& path, const Signature& sig) {
  if (path.empty()) return {};
  return parse_inf_registry(read_file(path), sig).declared;
}

void require_well_typed(const Problem& p) {
  auto errors = check_well_typed(p);
  if (errors.empty()) return;
  std::ostringstream out;
  out << "input is not well typed:";
  for (const auto& e : errors)
    out << "\n  " << (e.formula.empty() ? "(signature)" : e.formula) << ": " << e.message
        << " [" << e.where << "]";
  throw UserError(out.str());
}

// --- encode ---------------------------------------------------------------

struct EncodeArgs {
  std::string input, output, from = "", to = "fof", inf_path, protect_path, provenance_path;
  std::string scheme = "g_qq";
  std::string cover = "minimal-earliest";
  bool mono = false;
};

int cmd_encode(const EncodeArgs& args) {
  if (args.to != "fof")
    throw UserError("encode emits untyped problems; --to must be fof");
  Level level = args.from.empty()
                    ? (args.mono ? Level::monomorphic : Level::polymorphic)
                    : parse_level(args.from);
  if (level == Level::untyped) throw UserError("input is already untyped");
  if (args.mono && level != Level::monomorphic)
    throw UserError("--mono requires TFF0 input");
  if (!args.mono && level != Level::polymorphic)
    throw UserError("scheme '" + args.scheme + "' without --mono requires TFF1 input");

  auto scheme = parse_scheme(args.scheme, args.mono);
  if (!scheme) {
    std::string valid;
    for (const auto& n : scheme_names(args.mono)) valid += (valid.empty() ? "" : ", ") + n;
    throw UserError("unknown scheme '" + args.scheme + "' (valid: " + valid + ")");
  }

  ParseResult parsed = parse_input(args.input, level, false);
  require_well_typed(parsed.problem);
  InfRegistry inf = load_registry(args.inf_path, parsed.problem.sig);
  std::vector<TypePtr> protect = load_type_list(args.protect_path, parsed.problem.sig);
  CoverPolicy policy = args.cover == "maximal" ? CoverPolicy::maximal
                                               : CoverPolicy::minimal_earliest;
  EncodeContext ctx = make_context(parsed.problem, *scheme, inf, policy, protect);
  PipelineResult result = run_pipeline(parsed.problem, *scheme, ctx);
  write_output(args.output, print(result.problem, Level::untyped));
  if (!args.provenance_path.empty()) {
    std::ostringstream out;
    for (const auto& nf : result.problem.sentences)
      out << nf.name << "\t" << result.provenance.at(nf.name) << "\n";
    write_output(args.provenance_path, out.str());
  }
  return 0;
}

// --- analyze ----------------------------------------------------------------

struct AnalyzeArgs {
  std::string input, from = "tff1", inf_path;
  std::string cover = "minimal-earliest";
};

int cmd_analyze(const AnalyzeArgs& args) {
  Level level = parse_level(args.from);
  if (level == Level::untyped) throw UserError("analyze requires typed input");
  ParseResult parsed = parse_input(args.input, level, false);
  require_well_typed(parsed.problem);
  const Problem& p = parsed.problem;
  InfRegistry inf = load_registry(args.inf_path, p.sig);

  MonoVerdicts verdicts = level == Level::polymorphic ? infer_mono_polymorphic(p, inf)
                                                      : infer_mono_monomorphic(p, inf);
  std::vector<NakedOccurrence> naked = naked_occurrences(p);

  std::cout << "% monotonicity verdicts\n";
  for (const auto& ty : types_of(p)) {
    std::cout << ty->str() << ": ";
    if (verdicts.monotonic(ty)) {
      std::cout << (inf.is_infinite(ty) ? "monotonic (infinite)" : "monotonic (no naked)");
    } else {
      std::cout << "nonmonotonic";
      for (const auto& occ : naked)
        if (have_common_instance(ty, occ.ty)) {
          std::cout << " (naked " << occ.var << " in " << occ.formula << ")";
          break;
        }
    }
    std::cout << "\n";
  }

  std::cout << "% naked variables\n";
  for (const auto& occ : naked)
    std::cout << occ.var << ": " << occ.ty->str() << " in " << occ.formula << "\n";

  {
    std::cout << "% type-argument classification (phantom | inferable | noninferable)\n";
    ArgClassification classes = classify_args(p.sig);
    for (const auto& [sym, cls] : classes.by_symbol) {
      std::cout << sym << ":";
      auto show = [&](const char* label, const std::set<std::size_t>& idx) {
        std::cout << " " << label << "={";
        bool first = true;
        for (auto i : idx) {
          std::cout << (first ? "" : ",") << i;
          first = false;
        }
        std::cout << "}";
      };
      show("phantom", cls.phantom);
      show("inferable", cls.inferable);
      show("noninferable", cls.noninferable);
      std::cout << "\n";
    }

    CoverPolicy policy = args.cover == "maximal" ? CoverPolicy::maximal
                                                 : CoverPolicy::minimal_earliest;
    CoverAssignment covers = choose_covers(p.sig, policy);
    std::cout << "% covers\n";
    for (const auto& [sym, cover] : covers) {
      std::cout << sym << ": {";
      bool first = true;
      for (auto i : cover) {
        std::cout << (first ? "" : ",") << i;
        first = false;
      }
      std::cout << "}\n";
    }

    std::cout << "% undercover variables per formula\n";
    for (const auto& nf : p.sentences) {
      std::cout << nf.name << ":";
      for (const auto& tv : undercover_vars(nf.formula, covers))
        std::cout << " " << tv.name << ":" << tv.ty->str();
      std::cout << "\n";
    }

    if (level == Level::polymorphic) {
      std::cout << "% cap V (identity/true axioms emitted for these types)\n";
      for (const auto& ty : compute_U(p, verdicts, inf)) std::cout << ty->str() << "\n";
    }
  }
  return 0;
}

// --- monomorphise -----------------------------------------------------------

struct MonoArgs {
  std::string input, output, to = "tff0";
  std::size_t iterations = 3;
  std::size_t budget = 200;
  bool report_dropped = false;
};

int cmd_monomorphise(const MonoArgs& args) {
  if (args.to != "tff0")
    throw UserError("monomorphise emits TFF0 problems; --to must be tff0");
  ParseResult parsed = parse_input(args.input, Level::polymorphic, false);
  require_well_typed(parsed.problem);
  MonoConfig cfg{args.iterations, args.budget};
  MonoResult result = monomorphise(parsed.problem, cfg);
  write_output(args.output, print(result.problem, Level::monomorphic));
  if (args.report_dropped)
    for (const auto& name : result.dropped)
      std::cerr << "% dropped (still polymorphic): " << name << "\n";
  return 0;
}

// --- check -------------------------------------------------------------------

struct CheckArgs {
  std::string input, from = "fof", expect;
  std::size_t steps = 50000;
  bool external = false;
};

int cmd_check(const CheckArgs& args) {
  Level level = parse_level(args.from);
  ParseResult parsed = parse_input(args.input, level, true);
  if (level != Level::untyped) require_well_typed(parsed.problem);

  Expectation expected;
  if (args.expect == "unsat") {
    expected.sat = false;
  } else if (args.expect.rfind("sat:", 0) == 0) {
    expected.sat = true;
    expected.bound = std::stoul(args.expect.substr(4));
  } else {
    throw UserError("--expect takes sat:N or unsat");
  }

  if (args.external) {
    auto result = run_external_prover(parsed.problem);
    if (!result) throw UserError("no external prover configured (set POLYENC_PROVER)");
    std::cout << "external prover: SZS status " << szs_name(result->status) << "\n";
    bool proved_unsat = result->status == SzsStatus::theorem ||
                        result->status == SzsStatus::unsatisfiable;
    bool proved_sat = result->status == SzsStatus::satisfiable ||
                      result->status == SzsStatus::counter_satisfiable;
    if ((expected.sat && proved_sat) || (!expected.sat && proved_unsat)) {
      std::cout << "pass\n";
      return 0;
    }
    if ((expected.sat && proved_unsat) || (!expected.sat && proved_sat)) {
      std::cout << "fail\n";
      return 1;
    }
    std::cout << "inconclusive\n";
    return 0;
  }

  CheckBudget budget;
  budget.steps = args.steps;
  CheckOutcome outcome = check_status(parsed.problem, expected, budget);
  switch (outcome) {
    case CheckOutcome::pass:
      std::cout << "pass\n";
      return 0;
    case CheckOutcome::fail:
      std::cout << "fail\n";
      return 1;
    case CheckOutcome::inconclusive:
      std::cout << "inconclusive\n";
      return 0;
  }
  return 0;
}

// --- stats -------------------------------------------------------------------

struct StatsArgs {
  std::string input, from = "fof";
  bool clausified = false;
};

int cmd_stats(const StatsArgs& args) {
  Level level = parse_level(args.from);
  ParseResult parsed = parse_input(args.input, level, true);
  if (args.clausified)
    for (const auto& nf : parsed.problem.sentences) {
      std::set<std::string> tvs;
      collect_type_vars(nf.formula, tvs);
      if (!tvs.empty())
        throw UserError("clausified statistics need ground input; monomorphise first");
    }
  ProblemStats stats = problem_stats(parsed.problem, args.clausified);
  std::cout << "clauses: " << stats.clauses << "\n"
            << "literals_per_clause: " << stats.literals_per_clause << "\n"
            << "symbols_per_atom: " << stats.symbols_per_atom << "\n"
            << "symbols: " << stats.symbols << "\n";
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"polyenc: type encodings from polymorphic first-order logic"};
  app.require_subcommand(1);

  EncodeArgs encode_args;
  auto* enc = app.add_subcommand(
      "encode",
      "Translate a typed problem to FOF. Schemes: e (full erasure, unsound), a/a_phan/a_ninf "
      "(type arguments), t = <t, a_phan, e>, g = <g, a_ninf, e>, t_at/g_at = cover-based "
      "<., a_ninf, e>, t_q/t_qq/g_q/g_qq = monotonicity-based <., a, e>; with --mono the "
      "monomorphic variants <., e> of e, t, g, t_q, t_qq, g_q, g_qq.");
  enc->add_option("input", encode_args.input, "input problem (.p)")->required();
  enc->add_option("--scheme", encode_args.scheme, "encoding scheme name")->required();
  enc->add_flag("--mono", encode_args.mono, "use the monomorphic scheme variants");
  enc->add_option("--from", encode_args.from, "input level: tff1, tff0, fof");
  enc->add_option("--to", encode_args.to, "output level (fof)");
  enc->add_option("-o,--output", encode_args.output, "output file (default stdout)");
  enc->add_option("--infinite-types", encode_args.inf_path,
                  "file of types declared infinite, one per line");
  enc->add_option("--protect-extra", encode_args.protect_path,
                  "file of types to protect even if inferred monotonic");
  enc->add_option("--cover-policy", encode_args.cover, "minimal-earliest or maximal")
      ->check(CLI::IsMember({"minimal-earliest", "maximal"}));
  enc->add_option("--emit-provenance", encode_args.provenance_path,
                  "write an output-name -> source-name map");

  AnalyzeArgs analyze_args;
  auto* ana = app.add_subcommand("analyze",
                                 "Report monotonicity verdicts, naked/undercover variables, "
                                 "type-argument classes, covers, and the cap V");
  ana->add_option("input", analyze_args.input, "input problem (.p)")->required();
  ana->add_option("--from", analyze_args.from, "input level: tff1 or tff0");
  ana->add_option("--infinite-types", analyze_args.inf_path, "declared-infinite types file");
  ana->add_option("--cover-policy", analyze_args.cover, "minimal-earliest or maximal")
      ->check(CLI::IsMember({"minimal-earliest", "maximal"}));

  MonoArgs mono_args;
  auto* mon = app.add_subcommand("monomorphise",
                                 "Heuristically instantiate type variables and mangle "
                                 "symbols into a TFF0 problem");
  mon->add_option("input", mono_args.input, "input problem (TFF1)")->required();
  mon->add_option("-o,--output", mono_args.output, "output file (default stdout)");
  mon->add_option("--to", mono_args.to, "output level (tff0)");
  mon->add_option("--mono-iterations", mono_args.iterations, "refinement rounds K");
  mon->add_option("--mono-budget", mono_args.budget, "new-formula budget Delta");
  mon->add_flag("--report-dropped", mono_args.report_dropped,
                "list formulas that stayed polymorphic");

  CheckArgs check_args;
  auto* chk = app.add_subcommand("check",
                                 "Check a problem's expected status with the built-in "
                                 "model finder and refuter");
  chk->add_option("input", check_args.input, "input problem")->required();
  chk->add_option("--from", check_args.from, "input level: tff1, tff0, fof");
  chk->add_option("--expect", check_args.expect, "sat:N or unsat")->required();
  chk->add_option("--steps", check_args.steps, "refuter step limit");
  chk->add_flag("--external", check_args.external,
                "delegate to the prover named by POLYENC_PROVER");

  StatsArgs stats_args;
  auto* sts = app.add_subcommand("stats", "Report problem size statistics");
  sts->add_option("input", stats_args.input, "input problem")->required();
  sts->add_option("--from", stats_args.from, "input level: tff1, tff0, fof");
  sts->add_flag("--clausify", stats_args.clausified, "measure the clausified problem");

  try {
    app.parse(argc, argv);
    if (enc->parsed()) return cmd_encode(encode_args);
    if (ana->parsed()) return cmd_analyze(analyze_args);
    if (mon->parsed()) return cmd_monomorphise(mono_args);
    if (chk->parsed()) return cmd_check(check_args);
    if (sts->parsed()) return cmd_stats(stats_args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const UserError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 1;
  } catch (const UnsupportedInput& e) {
    std::cerr << "unsupported input: " << e.what() << "\n";
    return 1;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
