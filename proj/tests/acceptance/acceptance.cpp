// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failing criteria.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "broken_congruence.hpp"
#include "differential.hpp"
#include "generators.hpp"
#include "oracle.hpp"
#include "pruning_check.hpp"
#include "spi/bisim.hpp"
#include "spi/frontend.hpp"
#include "spi/report.hpp"

using namespace spi;

namespace {

constexpr double kRemarkSeconds = 5.0;
constexpr std::size_t kReflexivityCount = 200;
constexpr double kReflexivitySeconds = 60.0;
constexpr std::uint64_t kReflexivitySeed = 2;
constexpr std::size_t kDifferentialCount = 300;
constexpr std::uint64_t kDifferentialSeed = 11;
// Oracle blow-ups are skipped; at least this many must complete.
constexpr std::size_t kDifferentialMinCompleted = 270;
constexpr double kGoldenSeconds = 5.0;
constexpr std::size_t kCoherenceSamples = 1000;
constexpr std::size_t kCoherenceDepth = 4;
constexpr std::uint64_t kCoherenceSeed = 7;
constexpr std::size_t kPruningCount = 500;
constexpr std::uint64_t kPruningSeed = 5;
constexpr std::size_t kDepthOffsets[] = {0, 1, 2};
constexpr std::size_t kExtraFresh = 2;
constexpr std::size_t kTightPairCap = 5;

const CongruencePlugin& dflt = default_congruence();
const CongruencePlugin& comm = commutative_congruence();

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Process proc(const std::string& text) { return desugar(parse_process(text)); }

std::string name(VerdictKind k) { return std::string(to_string(k)); }

Message msg(const std::string& text) { return parse_term(text); }

Hedge ids(std::initializer_list<const char*> names) {
  std::set<Name> s;
  for (auto n : names) s.emplace(n);
  return identity_hedge(s);
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::filesystem::path> corpus() {
  std::vector<std::filesystem::path> out;
  for (const auto& e : std::filesystem::directory_iterator(SPI_CORPUS_DIR))
    if (e.path().extension() == ".spi") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

struct Result {
  bool pass;
  std::string detail;
};

Result remark1() {
  auto t0 = std::chrono::steady_clock::now();
  Process p = proc("a(x). [x = enc(a, a)] a<a>.0"), q = proc("a(x). 0");
  Verdict v = decide(ids({"a"}), p, q, {});
  double s = seconds_since(t0);
  bool ok = v.kind == VerdictKind::Distinguished && v.witness && !v.witness->steps.empty() &&
            v.witness->steps[0].label.kind == LabelKind::In &&
            v.witness->steps[0].messages == MessagePair{msg("enc(a, a)"), msg("enc(a, a)")} && s < kRemarkSeconds;
  return {ok, name(v.kind) + ", first input " +
                  (v.witness && !v.witness->steps.empty() && v.witness->steps[0].messages
                       ? to_string(v.witness->steps[0].messages->first)
                       : std::string("none")) +
                  ", " + std::to_string(s) + " s"};
}

Result reflexivity() {
  gen::Rng rng(kReflexivitySeed);
  gen::ProcessShape shape;  // three names, at most five prefixes
  std::size_t ok = 0;
  auto t0 = std::chrono::steady_clock::now();
  for (std::size_t i = 0; i < kReflexivityCount; ++i) {
    Process p = gen::affordable_process(rng, shape);
    if (decide(identity_hedge(free_names(p)), p, p, {}).kind == VerdictKind::Bisimilar) ++ok;
  }
  double s = seconds_since(t0);
  return {ok == kReflexivityCount && s < kReflexivitySeconds,
          std::to_string(ok) + "/" + std::to_string(kReflexivityCount) + " bisimilar, " + std::to_string(s) + " s"};
}

Result differential_suite() {
  std::string detail;
  bool ok = true;
  for (const CongruencePlugin* plugin : {&dflt, &comm}) {
    auto t = differential::run(kDifferentialCount, kDifferentialSeed, *plugin);
    std::size_t completed = t.agree + t.disagree;
    ok = ok && t.disagree == 0 && completed >= kDifferentialMinCompleted;
    detail += std::string(plugin->id()) + ": " + std::to_string(t.agree) + " agree, " + std::to_string(t.disagree) +
              " disagree, " + std::to_string(t.skipped) + " skipped; ";
    if (t.first_disagreement) detail += *t.first_disagreement + "; ";
  }
  return {ok, detail};
}

Result secrecy_and_key_leak() {
  struct Case {
    Hedge h;
    std::string p, q;
    VerdictKind expected;
  };
  std::vector<Case> cases = {
      {ids({"a", "m1", "m2"}), "new k. a<enc(m1, k)>.0", "new k. a<enc(m2, k)>.0", VerdictKind::Bisimilar},
      {ids({"a", "b"}), "new k. a<k>. a<enc(a, k)>.0", "new k. a<k>. a<enc(b, k)>.0", VerdictKind::Distinguished},
  };
  oracle::Limits limits;
  limits.max_names = 5;
  bool ok = true;
  std::string detail;
  for (const auto& c : cases) {
    Process p = proc(c.p), q = proc(c.q);
    auto t0 = std::chrono::steady_clock::now();
    Verdict v = decide(c.h, p, q, {});
    double s = seconds_since(t0);
    bool oracle_bisim =
        oracle::naive_d_bisim({c.h.begin(), c.h.end()}, p, q, critical_depth(c.h, p, q), dflt, limits);
    bool agree = oracle_bisim == (c.expected == VerdictKind::Bisimilar);
    ok = ok && v.kind == c.expected && agree && s < kGoldenSeconds;
    detail += name(v.kind) + (agree ? " (oracle agrees)" : " (oracle disagrees)") + ", " + std::to_string(s) +
              " s; ";
  }
  return {ok, detail};
}

Result double_encryption() {
  Hedge h = ids({"a", "k"});
  Process p = proc("new j. a<enc(enc(a, k), j)>.0"), q = proc("new j. a<enc(enc(a, j), k)>.0");
  CheckConfig c_default, c_comm;
  c_comm.plugin = &comm;
  h = make_hedge(std::vector<MessagePair>(h.begin(), h.end()), comm);
  VerdictKind d = decide(h, p, q, c_default).kind, c = decide(h, p, q, c_comm).kind;
  return {d == VerdictKind::Distinguished && c == VerdictKind::Bisimilar,
          "default " + name(d) + ", commutative " + name(c)};
}

Result coherence() {
  bool ok = true;
  std::string detail;
  for (const CongruencePlugin* plugin : {&dflt, &comm}) {
    std::size_t bad = 0;
    for (const auto& r : check_coherence(*plugin, kCoherenceSamples, kCoherenceDepth, kCoherenceSeed))
      bad += r.counterexamples.size();
    ok = ok && bad == 0;
    detail += std::string(plugin->id()) + " " + std::to_string(bad) + " counterexamples; ";
  }
  test::BrokenCongruence broken;
  bool caught = false;
  for (const auto& r : check_coherence(broken, kCoherenceSamples, kCoherenceDepth, kCoherenceSeed))
    caught = caught || !r.passed();
  detail += caught ? "broken theory caught" : "broken theory not caught";
  return {ok && caught, detail};
}

Result pruning_suite() {
  gen::Rng rng(kPruningSeed);
  std::size_t ok = 0, pruned = 0;
  std::string first;
  for (std::size_t i = 0; i < kPruningCount; ++i) {
    auto t = pruning::random_triple(rng, dflt);
    auto problem = pruning::check_triple(t, dflt);
    if (!problem) ++ok;
    else if (first.empty()) first = "; first failure: " + *problem;
    if (mcd(t.message) > t.depth) ++pruned;
  }
  return {ok == kPruningCount, std::to_string(ok) + "/" + std::to_string(kPruningCount) + " hold, " +
                                   std::to_string(pruned) + " actually pruned" + first};
}

std::vector<std::string> corpus_verdicts(const CheckConfig& cfg) {
  std::vector<std::string> out;
  for (const auto& path : corpus()) {
    CheckRun run = run_checks(parse(slurp(path)), path.filename().string(), std::nullopt, cfg);
    for (const auto& c : run.checks)
      out.push_back(path.filename().string() + "#" + std::to_string(c.index) + " " +
                    (c.verdict ? name(c.verdict->kind) : "error"));
  }
  return out;
}

Result bound_stability() {
  std::vector<std::vector<std::string>> runs;
  for (std::size_t offset : kDepthOffsets) {
    CheckConfig cfg;
    cfg.depth_offset = offset;
    runs.push_back(corpus_verdicts(cfg));
    cfg.extra_fresh = kExtraFresh;
    runs.push_back(corpus_verdicts(cfg));
  }
  bool ok = true;
  std::string detail;
  for (const auto& v : runs[0]) ok = ok && v.find("resource_exceeded") == std::string::npos && v.find("error") == std::string::npos;
  for (std::size_t i = 1; i < runs.size(); ++i)
    if (runs[i] != runs[0]) {
      ok = false;
      detail = "run " + std::to_string(i) + " differs; ";
    }
  return {ok, detail + std::to_string(runs[0].size()) + " checks x " + std::to_string(runs.size()) + " settings"};
}

std::string full_report() {
  std::string out;
  for (const auto& path : corpus())
    out += report_json(run_checks(parse(slurp(path)), path.filename().string(), std::nullopt, {}));
  return out;
}

Result determinism() {
  std::string a = full_report(), b = full_report();
  return {a == b, std::to_string(a.size()) + " bytes" + (a == b ? ", identical" : ", different")};
}

Result resource_discipline() {
  SourceFile f = parse("names a; check a(x). [x = enc(a, a)] a<a>.0 ~ a(x). [x = enc(a, a)] a<a>.0;");
  CheckConfig cfg;
  cfg.pair_cap = kTightPairCap;
  CheckRun run = run_checks(f, "tight", std::nullopt, cfg);
  const auto& v = run.checks.at(0).verdict;
  bool ok = v && v->kind == VerdictKind::ResourceExceeded && !v->witness && run.exit_code() == 2;
  return {ok, (v ? name(v->kind) : std::string("error")) + ", exit code " + std::to_string(run.exit_code())};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Result()>>> criteria = {
      {"Remark 1 golden verdict and witness", remark1},
      {"reflexivity on random processes", reflexivity},
      {"oracle differential", differential_suite},
      {"secrecy and key leak", secrecy_and_key_leak},
      {"congruence sensitivity", double_encryption},
      {"coherence properties", coherence},
      {"pruning correspondence", pruning_suite},
      {"bound stability on the corpus", bound_stability},
      {"report determinism", determinism},
      {"resource discipline", resource_discipline},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Result r;
    try {
      r = criteria[i].second();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    failures += !r.pass;
    std::cout << (r.pass ? "PASS" : "FAIL") << " " << i + 1 << " " << criteria[i].first << ": " << r.detail << "\n";
  }
  return failures;
}
