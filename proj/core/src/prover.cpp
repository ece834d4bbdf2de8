#include "polyenc/prover.hpp"

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

#include "polyenc/tptp.hpp"

namespace polyenc {

std::string szs_name(SzsStatus s) {
  switch (s) {
    case SzsStatus::theorem: return "Theorem";
    case SzsStatus::unsatisfiable: return "Unsatisfiable";
    case SzsStatus::satisfiable: return "Satisfiable";
    case SzsStatus::counter_satisfiable: return "CounterSatisfiable";
    case SzsStatus::timeout: return "Timeout";
    case SzsStatus::unknown: return "Unknown";
  }
  return "Unknown";
}

namespace {

SzsStatus parse_szs(const std::string& output) {
  auto pos = output.find("SZS status ");
  if (pos == std::string::npos) return SzsStatus::unknown;
  std::string rest = output.substr(pos + 11);
  auto starts = [&](const char* s) { return rest.rfind(s, 0) == 0; };
  if (starts("Theorem")) return SzsStatus::theorem;
  if (starts("Unsatisfiable")) return SzsStatus::unsatisfiable;
  if (starts("Satisfiable")) return SzsStatus::satisfiable;
  if (starts("CounterSatisfiable")) return SzsStatus::counter_satisfiable;
  if (starts("Timeout")) return SzsStatus::timeout;
  return SzsStatus::unknown;
}

} // namespace

std::optional<ExternalProverResult> run_external_prover(const Problem& p,
                                                        const std::string& executable) {
  std::string exe = executable;
  if (exe.empty()) {
    const char* env = std::getenv("POLYENC_PROVER");
    if (env == nullptr || *env == '\0') return std::nullopt;
    exe = env;
  }

  std::string path = "/tmp/polyenc_prover_XXXXXX";
  {
    // mkstemp keeps the temp name collision-free.
    std::vector<char> buf(path.begin(), path.end());
    buf.push_back('\0');
    int fd = mkstemp(buf.data());
    if (fd < 0) throw std::runtime_error("cannot create a temporary problem file");
    path.assign(buf.data());
    std::ofstream out(path);
    out << print(p, p.sig.level);
  }

  std::string command = exe + " " + path + " 2>&1";
  FILE* pipe = popen(command.c_str(), "r");
  if (pipe == nullptr) {
    std::remove(path.c_str());
    throw std::runtime_error("cannot spawn external prover: " + exe);
  }
  ExternalProverResult result;
  std::array<char, 4096> chunk{};
  std::size_t n;
  while ((n = fread(chunk.data(), 1, chunk.size(), pipe)) > 0)
    result.output.append(chunk.data(), n);
  result.exit_code = pclose(pipe);
  std::remove(path.c_str());
  result.status = parse_szs(result.output);
  return result;
}

} // namespace polyenc
