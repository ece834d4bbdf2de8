// Integration checks of the command-line tool: exit codes and wiring.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>

#include "support.hpp"

namespace {

#ifndef POLYENC_CLI_PATH
#define POLYENC_CLI_PATH "build/tools/polyenc"
#endif

void shell(const std::string& cmd) {
  int rc = std::system(cmd.c_str());
  REQUIRE(rc == 0);
}

int run(const std::string& args) {
  std::string cmd = std::string(POLYENC_CLI_PATH) + " " + args + " > /tmp/polyenc_cli_out.txt 2>&1";
  int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string output() { return polyenc::testing::read_file("/tmp/polyenc_cli_out.txt"); }

std::string corpus(const std::string& name) { return polyenc::testing::corpus_path(name); }

} // namespace

TEST_CASE("encode writes FOF and exits 0") {
  CHECK(run("encode --scheme g_qq --from tff1 --infinite-types " + corpus("lists_poly.inf") +
            " " + corpus("lists_poly.p")) == 0);
  CHECK(output().find("fof(") == 0);
}

TEST_CASE("encoding an untyped input is a user error") {
  CHECK(run("encode --scheme e --from fof " + corpus("lists_poly.p")) == 1);
  CHECK(output().find("already untyped") != std::string::npos);
}

TEST_CASE("unknown schemes are rejected with the list of valid names") {
  CHECK(run("encode --scheme zz --from tff1 " + corpus("lists_poly.p")) == 1);
  CHECK(output().find("t_qq") != std::string::npos);
}

TEST_CASE("parse errors exit 1 with a position") {
  shell("printf 'tff(a, axiom, ,).\\n' > /tmp/polyenc_bad.p");
  CHECK(run("encode --scheme e --from tff1 /tmp/polyenc_bad.p") == 1);
  CHECK(output().find("parse error") != std::string::npos);
}

TEST_CASE("check pass/fail exit codes") {
  CHECK(run("check --from tff0 --expect unsat " + corpus("lists_mono.p")) == 0);
  CHECK(output().find("pass") != std::string::npos);
  CHECK(run("check --from tff1 --expect sat:3 " + corpus("monkey_village.p")) == 0);
  // A provably wrong expectation exits 1.
  CHECK(run("check --from tff0 --expect sat:4 " + corpus("lists_mono.p")) == 1);
  CHECK(output().find("fail") != std::string::npos);
}

TEST_CASE("analyze prints the verdict table") {
  CHECK(run("analyze --from tff1 --infinite-types " + corpus("lists_poly.inf") + " " +
            corpus("lists_poly.p")) == 0);
  std::string out = output();
  CHECK(out.find("list(A): monotonic") != std::string::npos);
  CHECK(out.find("w: nonmonotonic") != std::string::npos);
  CHECK(out.find("cons: {1}") != std::string::npos);
}

TEST_CASE("monomorphise emits TFF0 that re-parses") {
  CHECK(run("monomorphise " + corpus("lists_poly.p") + " -o /tmp/polyenc_mono.p") == 0);
  CHECK(run("check --from tff0 --expect unsat /tmp/polyenc_mono.p") == 0);
}

TEST_CASE("stats prints the four metrics") {
  CHECK(run("encode --scheme g --from tff1 " + corpus("lists_poly.p") +
            " -o /tmp/polyenc_g.p") == 0);
  CHECK(run("stats --from fof --clausify /tmp/polyenc_g.p") == 0);
  std::string out = output();
  CHECK(out.find("clauses:") != std::string::npos);
  CHECK(out.find("literals_per_clause:") != std::string::npos);
  CHECK(out.find("symbols_per_atom:") != std::string::npos);
  CHECK(out.find("symbols:") != std::string::npos);
}

TEST_CASE("cover policy and protection overrides thread through") {
  // Maximal covers make the cover-based guards coincide with the
  // traditional ones.
  CHECK(run("encode --scheme g_at --cover-policy maximal --from tff1 " +
            corpus("lists_poly.p") + " -o /tmp/polyenc_gat_max.p") == 0);
  CHECK(run("encode --scheme g --from tff1 " + corpus("lists_poly.p") +
            " -o /tmp/polyenc_g_ref.p") == 0);
  std::string a = polyenc::testing::read_file("/tmp/polyenc_gat_max.p");
  std::string b = polyenc::testing::read_file("/tmp/polyenc_g_ref.p");
  CHECK(a == b);

  // Forcing protection of list(A) brings the identity tags back.
  shell("printf 'list(A)\n' > /tmp/polyenc_protect.txt");
  CHECK(run("encode --scheme t_q --from tff1 --infinite-types " + corpus("lists_poly.inf") +
            " --protect-extra /tmp/polyenc_protect.txt " + corpus("lists_poly.p") +
            " -o /tmp/polyenc_tq_prot.p") == 0);
  std::string prot = polyenc::testing::read_file("/tmp/polyenc_tq_prot.p");
  CHECK(prot.find("$$tag(list(") != std::string::npos);
}

TEST_CASE("provenance sidecar lists sources") {
  CHECK(run("encode --scheme g --from tff1 " + corpus("lists_poly.p") +
            " -o /tmp/polyenc_g.p --emit-provenance /tmp/polyenc_prov.txt") == 0);
  std::string prov = polyenc::testing::read_file("/tmp/polyenc_prov.txt");
  CHECK(prov.find("f_0\tax1") != std::string::npos);
  CHECK(prov.find("ax_guard_cons\tschema") != std::string::npos);
}

TEST_CASE("the external prover bridge reports a missing configuration") {
  ::unsetenv("POLYENC_PROVER");
  CHECK(run("check --external --from tff0 --expect unsat " + corpus("lists_mono.p")) == 1);
  CHECK(output().find("POLYENC_PROVER") != std::string::npos);
}

TEST_CASE("the external prover bridge parses SZS statuses") {
  shell(
      "cat > /tmp/polyenc_fake_prover.sh <<'SH'\n"
      "#!/bin/sh\n"
      "echo '% SZS status Unsatisfiable'\n"
      "SH\n"
      "chmod +x /tmp/polyenc_fake_prover.sh");
  ::setenv("POLYENC_PROVER", "/tmp/polyenc_fake_prover.sh", 1);
  CHECK(run("check --external --from tff0 --expect unsat " + corpus("lists_mono.p")) == 0);
  CHECK(output().find("SZS status Unsatisfiable") != std::string::npos);
  ::unsetenv("POLYENC_PROVER");
}
