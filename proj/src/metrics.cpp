#include "segloss/metrics.hpp"

#include "segloss/geometry.hpp"

namespace segloss {

ConfusionCounts confusion(const ProbField& p, const MaskField& y,
                          double threshold) {
  require_same_shape(p, y);
  const MaskField pred = binarize(p, threshold);
  ConfusionCounts c;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (pred[i] != 0) {
      y[i] != 0 ? ++c.tp : ++c.fp;
    } else {
      y[i] != 0 ? ++c.fn : ++c.tn;
    }
  }
  return c;
}

namespace {

std::optional<double> ratio(std::int64_t num, std::int64_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

MetricReport metric_report(const ConfusionCounts& c) {
  MetricReport r;
  r.precision = ratio(c.tp, c.tp + c.fp);
  r.recall = ratio(c.tp, c.tp + c.fn);
  r.specificity = ratio(c.tn, c.tn + c.fp);
  r.dice = ratio(2 * c.tp, 2 * c.tp + c.fp + c.fn);
  return r;
}

}  // namespace segloss
