#pragma once

#include <utility>
#include <vector>

#include "segloss/field.hpp"
#include "segloss/loss_spec.hpp"

namespace segloss {

// Per-pixel dL/dp, same shape as the probability field it differentiates.
struct GradField {
  int height = 0;
  int width = 0;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
};

// Loss value together with the analytic gradient dL/dp. Differentiation
// contract: the clip region is constant (gradient 0 where clamping is
// active), and distance maps, boundary masks and thresholded masks are
// constants of p. The value component shares the code path of the standalone
// loss operations.
std::pair<double, GradField> loss_and_grad(const LossSpec& spec,
                                           const ProbField& p,
                                           const MaskField& y);

// Central-difference oracle (L(p + h e_i) - L(p - h e_i)) / 2h, with the
// non-smooth inputs (distance maps, binarization, label counts) frozen at the
// base point, i.e. it differentiates the same smooth surrogate the analytic
// gradient claims. Callers keep every p value inside [2h, 1 - 2h].
GradField fd_grad(const LossSpec& spec, const ProbField& p, const MaskField& y,
                  double h = 1e-5);

struct FitResult {
  int steps_taken = 0;
  std::vector<double> loss_trace;  // one entry per step
  ProbField final_p;
};

// Plain gradient-descent fit of a logit field z toward the target mask:
// p = sigmoid(z), z <- z - lr * N * dL/dp * p * (1 - p). The pixel-count
// factor makes step sizes independent of image size. Deterministic for a
// fixed seed (z initialized from uniform noise in [-0.1, 0.1]).
FitResult fit_logits(const MaskField& y, const LossSpec& spec, int steps = 500,
                     double lr = 1.0, std::uint32_t seed = 7);

// Max over pixels and seeded random pairs of
// |analytic - fd| / max(|fd|, 1e-8), with p drawn from [0.05, 0.95] and mixed
// labels. The oracle behind the `gradcheck` command.
double grad_check_max_rel_err(const LossSpec& spec, int height, int width,
                              int num_seeds = 20, double fd_h = 1e-5);

}  // namespace segloss
