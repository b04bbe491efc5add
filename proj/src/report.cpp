#include "spi/report.hpp"

#include <sstream>

#include "json.hpp"

namespace spi {

using nlohmann::ordered_json;

int CheckRun::exit_code() const {
  int code = 0;
  for (const auto& c : checks) {
    if (!c.verdict || c.verdict->kind == VerdictKind::ResourceExceeded) return 2;
    if (c.verdict->kind == VerdictKind::Distinguished) code = 1;
  }
  return code;
}

CheckRun run_checks(const SourceFile& file, std::string file_label, const std::optional<std::string>& congruence,
                    CheckConfig cfg) {
  CheckRun run;
  run.file = std::move(file_label);
  run.congruence = congruence.value_or(file.congruence.value_or("default"));
  cfg.plugin = &congruence_by_id(run.congruence);
  for (std::size_t i = 0; i < file.checks.size(); ++i) {
    const auto& c = file.checks[i];
    CheckOutcome out;
    out.index = i + 1;
    out.location = c.location;
    out.left_text = c.left_text;
    out.right_text = c.right_text;
    try {
      validate_check(file, c);
      Process p = desugar(c.left), q = desugar(c.right);
      Hedge h = c.explicit_hedge ? make_hedge(c.hedge, *cfg.plugin) : identity_hedge(file.names);
      out.verdict = decide(h, p, q, cfg);
      out.critical_depth = critical_depth(out.verdict->initial_hedge, p, q);
    } catch (const ParseError& e) {
      out.error = e.what();
    } catch (const std::invalid_argument& e) {
      out.error = e.what();
    }
    run.checks.push_back(std::move(out));
  }
  return run;
}

namespace {

ordered_json hedge_json(const Hedge& h) {
  ordered_json out = ordered_json::array();
  for (const auto& [m, n] : h) out.push_back({to_string(m), to_string(n)});
  return out;
}

ordered_json names_json(const std::vector<Name>& names) {
  ordered_json out = ordered_json::array();
  for (const auto& n : names) out.push_back(n.str());
  return out;
}

ordered_json step_json(const WitnessStep& s) {
  ordered_json j;
  j["side"] = to_string(s.side);
  j["label"] = to_string(s.label);
  j["answer"] = to_string(s.answer);
  if (s.messages) j["messages"] = {to_string(s.messages->first), to_string(s.messages->second)};
  if (!s.left_fresh.empty() || !s.right_fresh.empty()) {
    j["left_fresh"] = names_json(s.left_fresh);
    j["right_fresh"] = names_json(s.right_fresh);
  }
  j["hedge_after"] = hedge_json(s.hedge_after);
  j["left_after"] = to_string(s.left_after);
  j["right_after"] = to_string(s.right_after);
  return j;
}

ordered_json witness_json(const Witness& w) {
  ordered_json j;
  j["steps"] = ordered_json::array();
  for (const auto& s : w.steps) j["steps"].push_back(step_json(s));
  ordered_json f;
  f["kind"] = to_string(w.failure);
  f["side"] = to_string(w.side);
  f["label"] = to_string(w.label);
  f["left_state"] = to_string(w.left_state);
  f["right_state"] = to_string(w.right_state);
  f["hedge"] = hedge_json(w.hedge);
  if (w.messages) f["messages"] = {to_string(w.messages->first), to_string(w.messages->second)};
  if (w.rejected_hedge) f["rejected_hedge"] = hedge_json(*w.rejected_hedge);
  j["failure"] = std::move(f);
  return j;
}

std::string join(const std::vector<Name>& names) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) out += (i ? ", " : "") + names[i].str();
  return out;
}

Side other(Side s) { return s == Side::Left ? Side::Right : Side::Left; }

}  // namespace

std::string report_json(const CheckRun& run, bool timing) {
  ordered_json doc;
  doc["version"] = kReportVersion;
  doc["file"] = run.file;
  doc["congruence"] = run.congruence;
  doc["channel_matching"] = "hedge_membership";
  ordered_json checks = ordered_json::array();
  std::size_t counts[4] = {0, 0, 0, 0};
  for (const auto& c : run.checks) {
    ordered_json j;
    j["index"] = c.index;
    j["line"] = c.location.line;
    j["left"] = c.left_text;
    j["right"] = c.right_text;
    if (!c.verdict) {
      j["verdict"] = "error";
      j["error"] = c.error;
      ++counts[3];
      checks.push_back(std::move(j));
      continue;
    }
    const Verdict& v = *c.verdict;
    ++counts[static_cast<int>(v.kind)];
    j["verdict"] = to_string(v.kind);
    if (v.kind == VerdictKind::ResourceExceeded) j["reason"] = v.reason;
    j["initial_hedge"] = hedge_json(v.initial_hedge);
    j["critical_depth"] = c.critical_depth;
    if (!v.warnings.empty()) j["warnings"] = v.warnings;
    if (v.witness) j["witness"] = witness_json(*v.witness);
    ordered_json stats;
    stats["hb_calls"] = v.stats.hb_calls;
    stats["states"] = v.stats.states;
    stats["pairs_enumerated"] = v.stats.pairs_enumerated;
    stats["memo_hits"] = v.stats.memo_hits;
    stats["max_recursion"] = v.stats.max_depth;
    if (timing) stats["wall_seconds"] = v.seconds;
    j["stats"] = std::move(stats);
    checks.push_back(std::move(j));
  }
  doc["checks"] = std::move(checks);
  doc["summary"] = {{"bisimilar", counts[0]},
                    {"distinguished", counts[1]},
                    {"resource_exceeded", counts[2]},
                    {"errors", counts[3]}};
  doc["exit_code"] = run.exit_code();
  return doc.dump(2) + "\n";
}

std::string report_text(const CheckRun& run, bool trace, bool timing) {
  std::ostringstream os;
  std::size_t counts[4] = {0, 0, 0, 0};
  for (const auto& c : run.checks) {
    os << "check " << c.index << " (line " << c.location.line << "): " << c.left_text << " ~ " << c.right_text
       << "\n";
    if (!c.verdict) {
      os << "  error: " << c.error << "\n";
      ++counts[3];
      continue;
    }
    const Verdict& v = *c.verdict;
    ++counts[static_cast<int>(v.kind)];
    os << "  verdict: " << to_string(v.kind) << "\n";
    for (const auto& w : v.warnings) os << "  warning: " << w << "\n";
    if (v.kind == VerdictKind::ResourceExceeded) os << "  reason: " << v.reason << "\n";
    os << "  hedge: " << to_string(v.initial_hedge) << "\n";
    os << "  critical depth: " << c.critical_depth << "\n";
    if (v.witness) {
      const Witness& w = *v.witness;
      os << "  witness:\n";
      for (std::size_t i = 0; i < w.steps.size(); ++i) {
        const auto& s = w.steps[i];
        os << "    " << i + 1 << ". " << to_string(s.side) << " does " << to_string(s.label) << ", "
           << to_string(other(s.side)) << " answers " << to_string(s.answer) << "\n";
        if (s.messages) {
          bool input = (s.label.kind == LabelKind::In);
          os << "       " << (input ? "received: " : "sent: ") << s.messages->first << " / " << s.messages->second
             << "\n";
        }
        if (s.label.kind == LabelKind::In && !s.left_fresh.empty())
          os << "       fresh: " << join(s.left_fresh) << "\n";
        if (s.label.kind == LabelKind::Out && (!s.left_fresh.empty() || !s.right_fresh.empty()))
          os << "       extruded: " << join(s.left_fresh) << " / " << join(s.right_fresh) << "\n";
        if (trace) {
          os << "       hedge: " << to_string(s.hedge_after) << "\n";
          os << "       left: " << s.left_after << "\n";
          os << "       right: " << s.right_after << "\n";
        }
      }
      os << "    then " << to_string(w.side) << " does " << to_string(w.label) << " and ";
      if (w.failure == FailureKind::NoMatch) {
        os << to_string(other(w.side)) << " has no matching transition\n";
      } else {
        os << "every answer makes the hedge inconsistent";
        if (w.messages) os << " (first: " << w.messages->first << " / " << w.messages->second << ")";
        os << "\n";
      }
      if (trace) {
        os << "       hedge: " << to_string(w.hedge) << "\n";
        os << "       left: " << w.left_state << "\n";
        os << "       right: " << w.right_state << "\n";
      }
    }
    os << "  stats: " << v.stats.hb_calls << " calls, " << v.stats.states << " states, " << v.stats.pairs_enumerated
       << " input pairs, " << v.stats.memo_hits << " memo hits";
    if (timing) os << ", " << v.seconds << " s";
    os << "\n";
  }
  os << "summary: " << counts[0] << " bisimilar, " << counts[1] << " distinguished, " << counts[2]
     << " resource exceeded, " << counts[3] << " errors\n";
  return os.str();
}

}  // namespace spi
