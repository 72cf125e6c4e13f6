#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "segloss/loss_spec.hpp"
#include "segloss/metrics.hpp"

namespace segloss {

// Per-pair evaluation outcome. When `error` is set the pair failed and the
// loss/metric fields are absent from the serialized report.
struct PairResult {
  std::string pred;
  std::string truth;
  std::map<std::string, double> losses;  // keyed by the loss spec token
  MetricReport metrics;
  std::vector<std::string> flags;
  std::optional<std::string> error;
};

struct EvalReport {
  std::vector<PairResult> pairs;
  // Resolved specs keyed by the same tokens used in per-pair loss maps.
  std::map<std::string, LossSpec> config_losses;
  double threshold = 0.5;

  bool any_error() const;
};

// Evaluate every requested loss and all four metrics for each (pred, truth)
// path pair. Pair-level failures become error entries instead of aborting
// the batch.
EvalReport evaluate_pairs(
    const std::vector<std::pair<std::filesystem::path, std::filesystem::path>>& pairs,
    const std::map<std::string, LossSpec>& specs, double threshold);

// Deterministic JSON: keys sorted, floats with 17 significant digits,
// undefined metrics as null, trailing newline. Identical reports produce
// byte-identical output.
void write_report_json(const EvalReport& report, std::ostream& out);
void write_report_json(const EvalReport& report, const std::filesystem::path& path);

}  // namespace segloss
