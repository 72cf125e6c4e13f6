#pragma once

#include <cstdint>
#include <optional>

#include "segloss/field.hpp"

namespace segloss {

struct ConfusionCounts {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t tn = 0;
  std::int64_t fn = 0;
};

// Binarize p at threshold (ties count as foreground) and tally against y.
ConfusionCounts confusion(const ProbField& p, const MaskField& y,
                          double threshold = 0.5);

// A metric is absent (serialized as null) exactly when its denominator is 0.
struct MetricReport {
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> specificity;
  std::optional<double> dice;
};

MetricReport metric_report(const ConfusionCounts& c);

}  // namespace segloss
