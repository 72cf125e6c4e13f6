#include <cmath>

#include "kernels.hpp"
#include "segloss/losses.hpp"

namespace segloss {
namespace detail {

struct RegionStats {
  double inter = 0.0;   // sum p*y
  double sum_p = 0.0;
  double sum_y = 0.0;
  double fp = 0.0;      // sum (1-y) p
  double fn = 0.0;      // sum y (1-p)
};

RegionStats region_stats(const ProbField& p, const MaskField& y) {
  RegionStats s;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double pi = p[i];
    s.sum_p += pi;
    if (y[i] != 0) {
      s.sum_y += 1.0;
      s.inter += pi;
      s.fn += 1.0 - pi;
    } else {
      s.fp += pi;
    }
  }
  return s;
}

double dice_coeff_from(const RegionStats& s, double smooth) {
  const double num = 2.0 * s.inter + smooth;
  const double den = s.sum_p + s.sum_y + smooth;
  // den == 0 only for smooth = 0 with both fields empty; treat as perfect.
  return den > 0.0 ? num / den : 1.0;
}

double tversky_from(const RegionStats& s, double alpha, double beta,
                    double smooth) {
  const double num = s.inter + smooth;
  const double den = s.inter + alpha * s.fp + beta * s.fn + smooth;
  return den > 0.0 ? num / den : 1.0;
}

double dice_value(const LossSpec& spec, const ProbField& p, const MaskField& y,
                  const Frozen&) {
  return 1.0 - dice_coeff_from(region_stats(p, y), spec.param("smooth"));
}

void dice_grad(const LossSpec& spec, const ProbField& p, const MaskField& y,
               const Frozen&, std::vector<double>& out) {
  const RegionStats s = region_stats(p, y);
  const double smooth = spec.param("smooth");
  const double num = 2.0 * s.inter + smooth;
  const double den = s.sum_p + s.sum_y + smooth;
  if (den <= 0.0) {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }
  const double den2 = den * den;
  for (std::size_t i = 0; i < p.size(); ++i) {
    // d(1 - num/den)/dp_i with d num = 2 y_i, d den = 1
    out[i] = (num - 2.0 * (y[i] != 0 ? 1.0 : 0.0) * den) / den2;
  }
}

double tversky_value(const LossSpec& spec, const ProbField& p, const MaskField& y,
                     const Frozen&) {
  return 1.0 - tversky_from(region_stats(p, y), spec.param("alpha"),
                            spec.param("beta"), spec.param("smooth"));
}

void tversky_grad(const LossSpec& spec, const ProbField& p, const MaskField& y,
                  const Frozen&, std::vector<double>& out) {
  const double alpha = spec.param("alpha");
  const double beta = spec.param("beta");
  const double smooth = spec.param("smooth");
  const RegionStats s = region_stats(p, y);
  const double num = s.inter + smooth;
  const double den = s.inter + alpha * s.fp + beta * s.fn + smooth;
  if (den <= 0.0) {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }
  const double den2 = den * den;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d_num = y[i] != 0 ? 1.0 : 0.0;
    const double d_den = y[i] != 0 ? 1.0 - beta : alpha;
    out[i] = -(d_num * den - num * d_den) / den2;
  }
}

double focal_tversky_value(const LossSpec& spec, const ProbField& p,
                           const MaskField& y, const Frozen&) {
  const double complement =
      1.0 - tversky_from(region_stats(p, y), spec.param("alpha"),
                         spec.param("beta"), spec.param("smooth"));
  return std::pow(complement, spec.param("gamma"));
}

void focal_tversky_grad(const LossSpec& spec, const ProbField& p,
                        const MaskField& y, const Frozen& frozen,
                        std::vector<double>& out) {
  const double gamma = spec.param("gamma");
  const double complement =
      1.0 - tversky_from(region_stats(p, y), spec.param("alpha"),
                         spec.param("beta"), spec.param("smooth"));
  tversky_grad(spec, p, y, frozen, out);
  double factor;
  if (complement > 0.0) {
    factor = gamma * std::pow(complement, gamma - 1.0);
  } else {
    // At the loss floor the true derivative is unbounded for gamma < 1;
    // report the zero subgradient so gradients stay finite.
    factor = gamma == 1.0 ? 1.0 : 0.0;
  }
  for (double& g : out) g *= factor;
}

double log_cosh_dice_value(const LossSpec& spec, const ProbField& p,
                           const MaskField& y, const Frozen& frozen) {
  return std::log(std::cosh(dice_value(spec, p, y, frozen)));
}

void log_cosh_dice_grad(const LossSpec& spec, const ProbField& p,
                        const MaskField& y, const Frozen& frozen,
                        std::vector<double>& out) {
  const double factor = std::tanh(dice_value(spec, p, y, frozen));
  dice_grad(spec, p, y, frozen, out);
  for (double& g : out) g *= factor;
}

double sens_spec_value(const LossSpec& spec, const ProbField& p,
                       const MaskField& y, const Frozen&) {
  const double w = spec.param("w");
  const double smooth = spec.param("smooth");
  double sens_num = 0.0;
  double spec_num = 0.0;
  double fg = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double diff = p[i] - static_cast<double>(y[i]);
    const double sq = diff * diff;
    if (y[i] != 0) {
      sens_num += sq;
      fg += 1.0;
    } else {
      spec_num += sq;
    }
  }
  const double bg = static_cast<double>(p.size()) - fg;
  const double sens_den = fg + smooth;
  const double spec_den = bg + smooth;
  const double sens_term = sens_den > 0.0 ? sens_num / sens_den : 0.0;
  const double spec_term = spec_den > 0.0 ? spec_num / spec_den : 0.0;
  return w * sens_term + (1.0 - w) * spec_term;
}

void sens_spec_grad(const LossSpec& spec, const ProbField& p, const MaskField& y,
                    const Frozen&, std::vector<double>& out) {
  const double w = spec.param("w");
  const double smooth = spec.param("smooth");
  const double fg = static_cast<double>(y.foreground_count());
  const double bg = static_cast<double>(p.size()) - fg;
  const double sens_den = fg + smooth;
  const double spec_den = bg + smooth;
  const double sens_scale = sens_den > 0.0 ? w / sens_den : 0.0;
  const double spec_scale = spec_den > 0.0 ? (1.0 - w) / spec_den : 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double diff = p[i] - static_cast<double>(y[i]);
    out[i] = 2.0 * diff * (y[i] != 0 ? sens_scale : spec_scale);
  }
}

}  // namespace detail

double soft_dice_coeff(const ProbField& p, const MaskField& y, double smooth) {
  require_same_shape(p, y);
  make_loss_spec("dice", {{"smooth", smooth}});  // range-check
  // single division, not 1 - (1 - coeff): the crisp coefficient then equals
  // the hard dice metric bit for bit
  return detail::dice_coeff_from(detail::region_stats(p, y), smooth);
}

double dice_loss(const ProbField& p, const MaskField& y, double smooth) {
  require_same_shape(p, y);
  return detail::dice_value(make_loss_spec("dice", {{"smooth", smooth}}), p, y, {});
}

double tversky_index(const ProbField& p, const MaskField& y, double alpha,
                     double beta, double smooth) {
  require_same_shape(p, y);
  make_loss_spec("tversky",
                 {{"alpha", alpha}, {"beta", beta}, {"smooth", smooth}});
  return detail::tversky_from(detail::region_stats(p, y), alpha, beta, smooth);
}

double tversky_loss(const ProbField& p, const MaskField& y, double alpha,
                    double beta, double smooth) {
  require_same_shape(p, y);
  return detail::tversky_value(
      make_loss_spec("tversky",
                     {{"alpha", alpha}, {"beta", beta}, {"smooth", smooth}}),
      p, y, {});
}

double focal_tversky_loss(const ProbField& p, const MaskField& y, double alpha,
                          double beta, double smooth, double gamma) {
  require_same_shape(p, y);
  return detail::focal_tversky_value(
      make_loss_spec("focal_tversky", {{"alpha", alpha},
                                       {"beta", beta},
                                       {"smooth", smooth},
                                       {"gamma", gamma}}),
      p, y, {});
}

double log_cosh_dice_loss(const ProbField& p, const MaskField& y, double smooth) {
  require_same_shape(p, y);
  return detail::log_cosh_dice_value(
      make_loss_spec("log_cosh_dice", {{"smooth", smooth}}), p, y, {});
}

double sens_spec_loss(const ProbField& p, const MaskField& y, double w,
                      double smooth) {
  require_same_shape(p, y);
  return detail::sens_spec_value(
      make_loss_spec("sens_spec", {{"w", w}, {"smooth", smooth}}), p, y, {});
}

}  // namespace segloss
