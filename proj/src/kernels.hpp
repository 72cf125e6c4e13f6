#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "segloss/field.hpp"
#include "segloss/loss_spec.hpp"
#include "segloss/losses.hpp"

namespace segloss::detail {

// Everything a loss derives from its inputs that is treated as a constant of
// p under differentiation: distance-map weights, boundary weights, label
// weights. Smooth losses carry an empty context. `degenerate` marks results
// produced by a documented fallback.
struct Frozen {
  std::vector<double> weights;
  bool degenerate = false;
};

using FreezeFn = Frozen (*)(const LossSpec&, const ProbField&, const MaskField&);
using ValueFn = double (*)(const LossSpec&, const ProbField&, const MaskField&,
                           const Frozen&);
using GradFn = void (*)(const LossSpec&, const ProbField&, const MaskField&,
                        const Frozen&, std::vector<double>&);

struct LossKernel {
  FreezeFn freeze;
  ValueFn value;
  GradFn grad;
};

// Throws UnknownLoss for names outside the catalog.
const LossKernel& find_kernel(const std::string& name);

Frozen freeze_none(const LossSpec&, const ProbField&, const MaskField&);

inline double clip_prob(double v) {
  return std::min(std::max(v, kClipEpsilon), 1.0 - kClipEpsilon);
}
inline bool clip_active(double v) {
  return v < kClipEpsilon || v > 1.0 - kClipEpsilon;
}

// distribution
double bce_value(const LossSpec&, const ProbField&, const MaskField&, const Frozen&);
void bce_grad(const LossSpec&, const ProbField&, const MaskField&, const Frozen&,
              std::vector<double>&);
double wce_value(const LossSpec&, const ProbField&, const MaskField&, const Frozen&);
void wce_grad(const LossSpec&, const ProbField&, const MaskField&, const Frozen&,
              std::vector<double>&);
double balanced_ce_value(const LossSpec&, const ProbField&, const MaskField&,
                         const Frozen&);
void balanced_ce_grad(const LossSpec&, const ProbField&, const MaskField&,
                      const Frozen&, std::vector<double>&);
double focal_value(const LossSpec&, const ProbField&, const MaskField&, const Frozen&);
void focal_grad(const LossSpec&, const ProbField&, const MaskField&, const Frozen&,
                std::vector<double>&);

// region
double dice_value(const LossSpec&, const ProbField&, const MaskField&, const Frozen&);
void dice_grad(const LossSpec&, const ProbField&, const MaskField&, const Frozen&,
               std::vector<double>&);
double tversky_value(const LossSpec&, const ProbField&, const MaskField&,
                     const Frozen&);
void tversky_grad(const LossSpec&, const ProbField&, const MaskField&, const Frozen&,
                  std::vector<double>&);
double focal_tversky_value(const LossSpec&, const ProbField&, const MaskField&,
                           const Frozen&);
void focal_tversky_grad(const LossSpec&, const ProbField&, const MaskField&,
                        const Frozen&, std::vector<double>&);
double log_cosh_dice_value(const LossSpec&, const ProbField&, const MaskField&,
                           const Frozen&);
void log_cosh_dice_grad(const LossSpec&, const ProbField&, const MaskField&,
                        const Frozen&, std::vector<double>&);
double sens_spec_value(const LossSpec&, const ProbField&, const MaskField&,
                       const Frozen&);
void sens_spec_grad(const LossSpec&, const ProbField&, const MaskField&,
                    const Frozen&, std::vector<double>&);

// boundary
Frozen hausdorff_freeze(const LossSpec&, const ProbField&, const MaskField&);
double hausdorff_value(const LossSpec&, const ProbField&, const MaskField&,
                       const Frozen&);
void hausdorff_grad(const LossSpec&, const ProbField&, const MaskField&,
                    const Frozen&, std::vector<double>&);
Frozen shape_aware_freeze(const LossSpec&, const ProbField&, const MaskField&);
double shape_aware_value(const LossSpec&, const ProbField&, const MaskField&,
                         const Frozen&);
void shape_aware_grad(const LossSpec&, const ProbField&, const MaskField&,
                      const Frozen&, std::vector<double>&);
Frozen dist_map_penalty_freeze(const LossSpec&, const ProbField&, const MaskField&);
double dist_map_penalty_value(const LossSpec&, const ProbField&, const MaskField&,
                              const Frozen&);
void dist_map_penalty_grad(const LossSpec&, const ProbField&, const MaskField&,
                           const Frozen&, std::vector<double>&);

// compound
double combo_value(const LossSpec&, const ProbField&, const MaskField&, const Frozen&);
void combo_grad(const LossSpec&, const ProbField&, const MaskField&, const Frozen&,
                std::vector<double>&);
Frozen exp_log_freeze(const LossSpec&, const ProbField&, const MaskField&);
double exp_log_value(const LossSpec&, const ProbField&, const MaskField&,
                     const Frozen&);
void exp_log_grad(const LossSpec&, const ProbField&, const MaskField&, const Frozen&,
                  std::vector<double>&);

}  // namespace segloss::detail
