#include "segloss/gradients.hpp"

#include <cmath>
#include <random>
#include <string>

#include "kernels.hpp"
#include "segloss/losses.hpp"

namespace segloss {

std::pair<double, GradField> loss_and_grad(const LossSpec& spec,
                                           const ProbField& p,
                                           const MaskField& y) {
  require_same_shape(p, y);
  const detail::LossKernel& kernel = detail::find_kernel(spec.name);
  const detail::Frozen frozen = kernel.freeze(spec, p, y);
  const double value = kernel.value(spec, p, y, frozen);
  GradField grad{p.height, p.width, std::vector<double>(p.size(), 0.0)};
  kernel.grad(spec, p, y, frozen, grad.values);
  return {value, std::move(grad)};
}

GradField fd_grad(const LossSpec& spec, const ProbField& p, const MaskField& y,
                  double h) {
  require_same_shape(p, y);
  if (!(h > 0.0)) {
    throw_error(ErrorCode::ParamOutOfRange,
                "finite-difference step must be positive, got " +
                    std::to_string(h));
  }
  const detail::LossKernel& kernel = detail::find_kernel(spec.name);
  // Freeze every non-smooth derived quantity at the base point so the
  // difference quotient probes the same surrogate the analytic gradient
  // differentiates.
  const detail::Frozen frozen = kernel.freeze(spec, p, y);

  GradField grad{p.height, p.width, std::vector<double>(p.size(), 0.0)};
  ProbField probe = p;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double base = p[i];
    probe.values[i] = base + h;
    const double up = kernel.value(spec, probe, y, frozen);
    probe.values[i] = base - h;
    const double down = kernel.value(spec, probe, y, frozen);
    probe.values[i] = base;
    grad.values[i] = (up - down) / (2.0 * h);
  }
  return grad;
}

FitResult fit_logits(const MaskField& y, const LossSpec& spec, int steps,
                     double lr, std::uint32_t seed) {
  if (steps < 1) {
    throw_error(ErrorCode::ParamOutOfRange,
                "steps must be >= 1, got " + std::to_string(steps));
  }
  if (!(lr > 0.0)) {
    throw_error(ErrorCode::ParamOutOfRange,
                "learning rate must be positive, got " + std::to_string(lr));
  }
  detail::find_kernel(spec.name);  // UnknownLoss before any work

  const std::size_t n = y.size();
  std::vector<double> logits(n);
  std::mt19937 rng(seed);
  for (double& z : logits) {
    // uniform in [-0.1, 0.1); mapped by hand so traces are reproducible
    // independent of the standard library's distribution implementation
    z = -0.1 + 0.2 * (static_cast<double>(rng()) / 4294967296.0);
  }

  // Step in sum-reduction scale: the per-pixel gradients of the mean-reduced
  // losses shrink with image area, so the raw step would stall on anything
  // bigger than a few pixels.
  const double scale = lr * static_cast<double>(n);

  FitResult result;
  result.loss_trace.reserve(static_cast<std::size_t>(steps));
  ProbField p{y.height, y.width, std::vector<double>(n)};
  for (int step = 0; step < steps; ++step) {
    for (std::size_t i = 0; i < n; ++i) {
      p.values[i] = 1.0 / (1.0 + std::exp(-logits[i]));
    }
    auto [value, grad] = loss_and_grad(spec, p, y);
    result.loss_trace.push_back(value);
    for (std::size_t i = 0; i < n; ++i) {
      const double sigmoid_slope = p.values[i] * (1.0 - p.values[i]);
      logits[i] -= scale * grad.values[i] * sigmoid_slope;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    p.values[i] = 1.0 / (1.0 + std::exp(-logits[i]));
  }
  result.steps_taken = steps;
  result.final_p = std::move(p);
  return result;
}

double grad_check_max_rel_err(const LossSpec& spec, int height, int width,
                              int num_seeds, double fd_h) {
  if (height < 1 || width < 1 || num_seeds < 1) {
    throw_error(ErrorCode::ParamOutOfRange,
                "grad check needs positive size and seed count");
  }
  const std::size_t n =
      static_cast<std::size_t>(height) * static_cast<std::size_t>(width);
  double worst = 0.0;
  for (int seed = 0; seed < num_seeds; ++seed) {
    std::mt19937 rng(0x5e6105u + static_cast<std::uint32_t>(seed));
    std::vector<double> probs(n);
    std::vector<std::uint8_t> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
      probs[i] = 0.05 + 0.9 * (static_cast<double>(rng()) / 4294967296.0);
      labels[i] = static_cast<std::uint8_t>(rng() & 1u);
    }
    // keep both classes present
    labels[0] = 1;
    if (n > 1) labels[n - 1] = 0;
    const ProbField p{height, width, std::move(probs)};
    const MaskField y{height, width, std::move(labels)};

    const GradField analytic = loss_and_grad(spec, p, y).second;
    const GradField numeric = fd_grad(spec, p, y, fd_h);
    for (std::size_t i = 0; i < n; ++i) {
      const double denom = std::max(std::abs(numeric[i]), 1e-8);
      worst = std::max(worst, std::abs(analytic[i] - numeric[i]) / denom);
    }
  }
  return worst;
}

}  // namespace segloss
