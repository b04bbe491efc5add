#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spi/bisim.hpp"
#include "spi/frontend.hpp"

namespace spi {

inline constexpr int kReportVersion = 1;

struct CheckOutcome {
  std::size_t index = 0;
  SourceLocation location;
  std::string left_text;
  std::string right_text;
  std::optional<Verdict> verdict;
  /// Validation failure; set instead of verdict.
  std::string error;
  std::size_t critical_depth = 0;
};

struct CheckRun {
  std::string file;
  std::string congruence;
  std::vector<CheckOutcome> checks;

  /// 0 when every check is bisimilar, 1 when some check is distinguished,
  /// 2 when any check errored or ran out of resources.
  int exit_code() const;
};

/// Runs every check directive of a file. `congruence` overrides the file's
/// directive. Throws std::invalid_argument for unknown theories.
CheckRun run_checks(const SourceFile& file, std::string file_label, const std::optional<std::string>& congruence,
                    CheckConfig cfg);

/// A single JSON document. Wall time is included only when `timing` is set,
/// so that reports are byte-stable by default.
std::string report_json(const CheckRun& run, bool timing = false);
std::string report_text(const CheckRun& run, bool trace = false, bool timing = false);

}  // namespace spi
