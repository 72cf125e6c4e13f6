#include <algorithm>
#include <cmath>

#include "kernels.hpp"
#include "segloss/geometry.hpp"
#include "segloss/losses.hpp"

namespace segloss {
namespace detail {

namespace {

// Mean cross-entropy with frozen per-pixel weights; the core of the
// shape-aware and distance-map-penalty losses.
double weighted_pixel_ce(const ProbField& p, const MaskField& y,
                         const std::vector<double>& weights) {
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double q = clip_prob(p[i]);
    const double ce = y[i] != 0 ? -std::log(q) : -std::log(1.0 - q);
    sum += weights[i] * ce;
  }
  return sum / static_cast<double>(p.size());
}

void weighted_pixel_ce_grad(const ProbField& p, const MaskField& y,
                            const std::vector<double>& weights,
                            std::vector<double>& out) {
  const double inv_n = 1.0 / static_cast<double>(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (clip_active(p[i])) {
      out[i] = 0.0;
      continue;
    }
    out[i] = weights[i] * (y[i] != 0 ? -1.0 / p[i] : 1.0 / (1.0 - p[i])) * inv_n;
  }
}

}  // namespace

Frozen hausdorff_freeze(const LossSpec& spec, const ProbField& p,
                        const MaskField& y) {
  const double alpha = spec.param("alpha");
  const double threshold = spec.param("threshold");
  const MaskField pred = binarize(p, threshold);
  const bool truth_empty = y.foreground_count() == 0;
  const bool pred_empty = pred.foreground_count() == 0;

  Frozen frozen;
  frozen.degenerate = truth_empty || pred_empty;
  if (truth_empty && pred_empty) {
    frozen.weights.assign(p.size(), 0.0);
    return frozen;
  }
  // An empty source set contributes an identically-zero distance map.
  std::vector<double> d_truth(p.size(), 0.0);
  std::vector<double> d_pred(p.size(), 0.0);
  if (!truth_empty) d_truth = edt_exact(y).values;
  if (!pred_empty) d_pred = edt_exact(pred).values;
  frozen.weights.resize(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    frozen.weights[i] = std::pow(d_truth[i], alpha) + std::pow(d_pred[i], alpha);
  }
  return frozen;
}

double hausdorff_value(const LossSpec&, const ProbField& p, const MaskField& y,
                       const Frozen& frozen) {
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double diff = p[i] - static_cast<double>(y[i]);
    sum += diff * diff * frozen.weights[i];
  }
  return sum / static_cast<double>(p.size());
}

void hausdorff_grad(const LossSpec&, const ProbField& p, const MaskField& y,
                    const Frozen& frozen, std::vector<double>& out) {
  const double inv_n = 1.0 / static_cast<double>(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double diff = p[i] - static_cast<double>(y[i]);
    out[i] = 2.0 * diff * frozen.weights[i] * inv_n;
  }
}

Frozen shape_aware_freeze(const LossSpec& spec, const ProbField& p,
                          const MaskField& y) {
  const double threshold = spec.param("threshold");
  const MaskField pred_boundary = extract_boundary(binarize(p, threshold));
  const MaskField truth_boundary = extract_boundary(y);

  Frozen frozen;
  if (truth_boundary.foreground_count() == 0) {
    frozen.weights.assign(p.size(), 1.0);
    frozen.degenerate = true;
    return frozen;
  }
  const DistanceField dist = edt_exact(truth_boundary);
  frozen.weights.resize(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    frozen.weights[i] = pred_boundary[i] != 0 ? 1.0 + dist[i] : 1.0;
  }
  return frozen;
}

double shape_aware_value(const LossSpec&, const ProbField& p, const MaskField& y,
                         const Frozen& frozen) {
  return weighted_pixel_ce(p, y, frozen.weights);
}

void shape_aware_grad(const LossSpec&, const ProbField& p, const MaskField& y,
                      const Frozen& frozen, std::vector<double>& out) {
  weighted_pixel_ce_grad(p, y, frozen.weights, out);
}

Frozen dist_map_penalty_freeze(const LossSpec&, const ProbField& p,
                               const MaskField& y) {
  Frozen frozen;
  const MaskField truth_boundary = extract_boundary(y);
  if (truth_boundary.foreground_count() == 0) {
    frozen.weights.assign(p.size(), 1.0);
    frozen.degenerate = true;
    return frozen;
  }
  const DistanceField dist = edt_exact(truth_boundary);
  const double max_dist =
      *std::max_element(dist.values.begin(), dist.values.end());
  if (max_dist <= 0.0) {
    frozen.weights.assign(p.size(), 1.0);
    frozen.degenerate = true;
    return frozen;
  }
  frozen.weights.resize(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    frozen.weights[i] = 1.0 + dist[i] / max_dist;
  }
  return frozen;
}

double dist_map_penalty_value(const LossSpec&, const ProbField& p,
                              const MaskField& y, const Frozen& frozen) {
  return weighted_pixel_ce(p, y, frozen.weights);
}

void dist_map_penalty_grad(const LossSpec&, const ProbField& p,
                           const MaskField& y, const Frozen& frozen,
                           std::vector<double>& out) {
  weighted_pixel_ce_grad(p, y, frozen.weights, out);
}

}  // namespace detail

Flagged hausdorff_dt_loss(const ProbField& p, const MaskField& y,
                          double alpha_exp, double threshold) {
  require_same_shape(p, y);
  const LossSpec spec = make_loss_spec(
      "hausdorff_dt", {{"alpha", alpha_exp}, {"threshold", threshold}});
  const detail::Frozen frozen = detail::hausdorff_freeze(spec, p, y);
  return {detail::hausdorff_value(spec, p, y, frozen), frozen.degenerate};
}

Flagged shape_aware_loss(const ProbField& p, const MaskField& y,
                         double threshold) {
  require_same_shape(p, y);
  const LossSpec spec = make_loss_spec("shape_aware", {{"threshold", threshold}});
  const detail::Frozen frozen = detail::shape_aware_freeze(spec, p, y);
  return {detail::shape_aware_value(spec, p, y, frozen), frozen.degenerate};
}

Flagged distance_map_penalty_loss(const ProbField& p, const MaskField& y) {
  require_same_shape(p, y);
  const LossSpec spec = make_loss_spec("dist_map_penalty");
  const detail::Frozen frozen = detail::dist_map_penalty_freeze(spec, p, y);
  return {detail::dist_map_penalty_value(spec, p, y, frozen), frozen.degenerate};
}

}  // namespace segloss
