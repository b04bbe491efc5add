#include <deque>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "spi/bisim.hpp"
#include "spi/evaluation.hpp"
#include "spi/frontend.hpp"
#include "spi/lts.hpp"
#include "spi/report.hpp"

using namespace spi;
using nlohmann::ordered_json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_check(const std::string& path, const std::optional<std::string>& congruence, const CheckConfig& cfg,
              bool json, bool timing) {
  SourceFile file = parse(read_file(path));
  const bool trace = cfg.trace;
  CheckRun run = run_checks(file, path, congruence, cfg);
  std::cout << (json ? report_json(run, timing) : report_text(run, trace, timing));
  return run.exit_code();
}

int run_eval(const std::string& expr, const std::string& congruence) {
  const CongruencePlugin& plugin = congruence_by_id(congruence);
  EvalResult r = EvalResult::undefined();
  try {
    r = eval_term(parse_term(expr), plugin);
  } catch (const ParseError&) {
    r = eval_formula(parse_formula(expr), plugin);
  }
  switch (r.kind()) {
    case EvalResult::Kind::Value: std::cout << to_string(r.message()) << "\n"; break;
    case EvalResult::Kind::Truth: std::cout << (r.truth_value() ? "true" : "false") << "\n"; break;
    case EvalResult::Kind::Undefined: std::cout << "undefined\n"; break;
  }
  return 0;
}

struct Edge {
  std::size_t from;
  std::string label;
  std::size_t to;
};

int run_lts(const std::string& path, const std::string& process, const std::optional<std::string>& congruence,
            std::size_t max_states, bool json, bool dot) {
  SourceFile file = parse(read_file(path));
  const Definition* def = file.find(process);
  if (!def) throw std::invalid_argument("no definition named " + process);
  const CongruencePlugin& plugin = congruence_by_id(congruence.value_or(file.congruence.value_or("default")));
  Process root = desugar(def->body);
  if (!is_finite(root)) throw ValidationError("process uses replication");
  if (!is_closed(root)) throw ValidationError("process is not closed");

  TransitionSystem ts(plugin);
  std::vector<std::string> nodes;
  std::vector<bool> leaf;
  std::map<Process, std::size_t> index;
  std::deque<Process> queue;
  std::vector<Edge> edges;
  bool truncated = false;

  auto node_of = [&](const Process& p) -> std::optional<std::size_t> {
    if (auto it = index.find(p); it != index.end()) return it->second;
    if (nodes.size() >= max_states) {
      truncated = true;
      return std::nullopt;
    }
    index.emplace(p, nodes.size());
    nodes.push_back(to_string(p));
    leaf.push_back(false);
    queue.push_back(p);
    return nodes.size() - 1;
  };

  node_of(ts.prepare(root));
  while (!queue.empty()) {
    Process s = queue.front();
    queue.pop_front();
    std::size_t from = index.at(s);
    for (const auto& t : ts.step(s)) {
      std::string label = to_string(t.label);
      std::optional<std::size_t> to;
      if (t.agent.kind() == AgentKind::Proc) {
        to = node_of(t.agent.body());
      } else if (t.agent.kind() == AgentKind::Concretion) {
        std::set<Name> avoid = free_names(s);
        std::vector<Name> fresh;
        for (std::size_t i = 0; i < t.agent.bound().size(); ++i) {
          fresh.push_back(fresh_name(avoid, "n"));
          avoid.insert(fresh.back());
        }
        auto [m, body] = open_concretion(t.agent, fresh, plugin);
        if (!fresh.empty()) {
          label += " (new";
          for (const auto& n : fresh) label += " " + n.str();
          label += ")";
        }
        label += " <" + to_string(m) + ">";
        to = node_of(body);
      } else {
        nodes.push_back(to_string(t.agent));
        leaf.push_back(true);
        to = nodes.size() - 1;
      }
      if (to) edges.push_back({from, label, *to});
    }
  }

  if (dot) {
    std::cout << "digraph lts {\n";
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      ordered_json l = nodes[i];
      std::cout << "  s" << i << " [label=" << l.dump() << (leaf[i] ? ", shape=box" : "") << "];\n";
    }
    for (const auto& e : edges) {
      ordered_json l = e.label;
      std::cout << "  s" << e.from << " -> s" << e.to << " [label=" << l.dump() << "];\n";
    }
    std::cout << "}\n";
  } else if (json) {
    ordered_json doc;
    doc["version"] = kReportVersion;
    doc["process"] = process;
    doc["congruence"] = plugin.id();
    doc["states"] = ordered_json::array();
    for (std::size_t i = 0; i < nodes.size(); ++i)
      doc["states"].push_back({{"id", i}, {"term", nodes[i]}, {"kind", leaf[i] ? "abstraction" : "process"}});
    doc["transitions"] = ordered_json::array();
    for (const auto& e : edges) doc["transitions"].push_back({{"from", e.from}, {"label", e.label}, {"to", e.to}});
    doc["truncated"] = truncated;
    std::cout << doc.dump(2) << "\n";
  } else {
    for (std::size_t i = 0; i < nodes.size(); ++i) std::cout << "s" << i << ": " << nodes[i] << "\n";
    for (const auto& e : edges) std::cout << "s" << e.from << " --" << e.label << "--> s" << e.to << "\n";
    if (truncated) std::cout << "truncated at " << max_states << " states\n";
  }
  return 0;
}

int run_coherence(const std::string& congruence, std::size_t samples, std::uint64_t seed, std::size_t depth,
                  bool json) {
  const CongruencePlugin& plugin = congruence_by_id(congruence);
  auto reports = check_coherence(plugin, samples, depth, seed);
  bool ok = true;
  for (const auto& r : reports) ok = ok && r.passed();
  if (json) {
    ordered_json doc;
    doc["version"] = kReportVersion;
    doc["congruence"] = plugin.id();
    doc["samples"] = samples;
    doc["seed"] = seed;
    doc["depth"] = depth;
    doc["conditions"] = ordered_json::array();
    for (const auto& r : reports) {
      ordered_json c;
      c["condition"] = to_string(r.condition);
      c["samples_tested"] = r.samples_tested;
      c["passed"] = r.passed();
      c["counterexamples"] = ordered_json::array();
      for (const auto& ce : r.counterexamples) {
        ordered_json x = {{"lhs", to_string(ce.lhs)}, {"rhs", to_string(ce.rhs)}};
        if (ce.renaming) x["renaming"] = {ce.renaming->first.str(), ce.renaming->second.str()};
        c["counterexamples"].push_back(std::move(x));
      }
      doc["conditions"].push_back(std::move(c));
    }
    doc["passed"] = ok;
    std::cout << doc.dump(2) << "\n";
  } else {
    for (const auto& r : reports) {
      std::cout << to_string(r.condition) << ": " << (r.passed() ? "pass" : "FAIL") << " (" << r.samples_tested
                << " samples";
      if (!r.passed()) std::cout << ", " << r.counterexamples.size() << " counterexamples";
      std::cout << ")\n";
      for (std::size_t i = 0; i < r.counterexamples.size() && i < 3; ++i)
        std::cout << "  " << r.counterexamples[i].lhs << " vs " << r.counterexamples[i].rhs << "\n";
    }
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hedged bisimilarity checker for finite spi-calculus processes"};
  app.require_subcommand(1);

  std::string file, expr, process, congruence = "default";
  std::optional<std::string> congruence_override;
  std::size_t pair_cap = 200000, depth_offset = 0, extra_fresh = 0, max_states = 1000, samples = 1000, depth = 4;
  std::uint64_t seed = 1;
  double budget = 60;
  bool json = false, trace = false, timing = false, dot = false, no_quotient = false;

  auto* check = app.add_subcommand("check", "decide every check directive in a file");
  check->add_option("FILE", file)->required();
  check->add_option("--congruence", congruence_override, "override the file's congruence directive");
  check->add_option("--pair-cap", pair_cap, "input pairs enumerated per step")->check(CLI::PositiveNumber);
  check->add_option("--time-budget", budget, "seconds per check")->check(CLI::PositiveNumber);
  check->add_option("--depth-offset", depth_offset, "explore inputs this much past the critical depth");
  check->add_option("--extra-fresh", extra_fresh, "extra fresh names offered to inputs");
  check->add_flag("--no-quotient", no_quotient, "enumerate inputs without identifying fresh-name permutations");
  check->add_flag("--json", json);
  check->add_flag("--trace", trace, "print states along the witness");
  check->add_flag("--timing", timing, "include wall time");

  auto* eval = app.add_subcommand("eval", "evaluate a ground term or formula");
  eval->add_option("EXPR", expr)->required();
  eval->add_option("--congruence", congruence);

  auto* lts = app.add_subcommand("lts", "explore the transitions of a defined process");
  lts->add_option("FILE", file)->required();
  lts->add_option("--process", process)->required();
  lts->add_option("--congruence", congruence_override);
  lts->add_option("--max-states", max_states)->check(CLI::PositiveNumber);
  lts->add_flag("--json", json);
  lts->add_flag("--dot", dot);

  auto* coherence = app.add_subcommand("coherence", "falsify the coherence conditions on random messages");
  coherence->add_option("--congruence", congruence)->required();
  coherence->add_option("--samples", samples);
  coherence->add_option("--seed", seed);
  coherence->add_option("--depth", depth);
  coherence->add_flag("--json", json);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*check) {
      CheckConfig cfg;
      cfg.pair_cap = pair_cap;
      cfg.time_budget = std::chrono::milliseconds(static_cast<long long>(budget * 1000));
      cfg.trace = trace;
      cfg.depth_offset = depth_offset;
      cfg.extra_fresh = extra_fresh;
      cfg.fresh_quotient = !no_quotient;
      return run_check(file, congruence_override, cfg, json, timing);
    }
    if (*eval) return run_eval(expr, congruence);
    if (*lts) return run_lts(file, process, congruence_override, max_states, json, dot);
    if (*coherence) return run_coherence(congruence, samples, seed, depth, json);
  } catch (const std::exception& e) {
    std::cerr << "spicheck: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
