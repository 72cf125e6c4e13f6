#include <cmath>

#include "kernels.hpp"
#include "segloss/losses.hpp"

namespace segloss {
namespace detail {

namespace {

constexpr double kDscFloor = 1e-7;  // keeps -ln DSC finite when smooth = 0

struct DiceParts {
  double num = 0.0;  // 2 sum(p y) + smooth
  double den = 0.0;  // sum p + sum y + smooth
  double coeff = 1.0;
};

DiceParts dice_parts(const ProbField& p, const MaskField& y, double smooth) {
  double inter = 0.0;
  double sum_p = 0.0;
  double sum_y = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    sum_p += p[i];
    if (y[i] != 0) {
      sum_y += 1.0;
      inter += p[i];
    }
  }
  DiceParts parts;
  parts.num = 2.0 * inter + smooth;
  parts.den = sum_p + sum_y + smooth;
  parts.coeff = parts.den > 0.0 ? parts.num / parts.den : 1.0;
  return parts;
}

}  // namespace

double combo_value(const LossSpec& spec, const ProbField& p, const MaskField& y,
                   const Frozen&) {
  const double alpha = spec.param("alpha");
  const double ce_beta = spec.param("ce_beta");
  const double smooth = spec.param("smooth");
  double ce_sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double q = clip_prob(p[i]);
    ce_sum -= y[i] != 0 ? ce_beta * std::log(q)
                        : (1.0 - ce_beta) * std::log(1.0 - q);
  }
  const double mean_ce = ce_sum / static_cast<double>(p.size());
  return alpha * mean_ce - (1.0 - alpha) * dice_parts(p, y, smooth).coeff;
}

void combo_grad(const LossSpec& spec, const ProbField& p, const MaskField& y,
                const Frozen&, std::vector<double>& out) {
  const double alpha = spec.param("alpha");
  const double ce_beta = spec.param("ce_beta");
  const double smooth = spec.param("smooth");
  const DiceParts parts = dice_parts(p, y, smooth);
  const double den2 = parts.den * parts.den;
  const double inv_n = 1.0 / static_cast<double>(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    double ce_term = 0.0;
    if (!clip_active(p[i])) {
      ce_term = y[i] != 0 ? -ce_beta / p[i] : (1.0 - ce_beta) / (1.0 - p[i]);
    }
    double dsc_term = 0.0;
    if (parts.den > 0.0) {
      dsc_term = (2.0 * (y[i] != 0 ? 1.0 : 0.0) * parts.den - parts.num) / den2;
    }
    out[i] = alpha * ce_term * inv_n - (1.0 - alpha) * dsc_term;
  }
}

Frozen exp_log_freeze(const LossSpec&, const ProbField& p, const MaskField& y) {
  Frozen frozen;
  const double n = static_cast<double>(p.size());
  const double fg = static_cast<double>(y.foreground_count());
  const double bg = n - fg;
  if (fg == 0.0 || bg == 0.0) {
    // Single-label image: per-label weights fall back to uniform 1.
    frozen.weights.assign(p.size(), 1.0);
    frozen.degenerate = true;
    return frozen;
  }
  const double w_fg = std::sqrt(n / fg);
  const double w_bg = std::sqrt(n / bg);
  frozen.weights.resize(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    frozen.weights[i] = y[i] != 0 ? w_fg : w_bg;
  }
  return frozen;
}

double exp_log_value(const LossSpec& spec, const ProbField& p, const MaskField& y,
                     const Frozen& frozen) {
  const double w_dice = spec.param("w_dice");
  const double w_ce = spec.param("w_ce");
  const double gamma_dice = spec.param("gamma_dice");
  const double gamma_ce = spec.param("gamma_ce");
  const double smooth = spec.param("smooth");

  const double dsc =
      std::max(dice_parts(p, y, smooth).coeff, kDscFloor);
  const double l_dice = std::pow(-std::log(dsc), gamma_dice);

  double ce_sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double q = clip_prob(p[i]);
    const double pt = y[i] != 0 ? q : 1.0 - q;
    ce_sum += frozen.weights[i] * std::pow(-std::log(pt), gamma_ce);
  }
  const double l_ce = ce_sum / static_cast<double>(p.size());
  return w_dice * l_dice + w_ce * l_ce;
}

void exp_log_grad(const LossSpec& spec, const ProbField& p, const MaskField& y,
                  const Frozen& frozen, std::vector<double>& out) {
  const double w_dice = spec.param("w_dice");
  const double w_ce = spec.param("w_ce");
  const double gamma_dice = spec.param("gamma_dice");
  const double gamma_ce = spec.param("gamma_ce");
  const double smooth = spec.param("smooth");

  const DiceParts parts = dice_parts(p, y, smooth);
  // d L_dice / d DSC, zero while the floor (or the den == 0 guard) is active
  // and at the DSC = 1 endpoint where the gamma_dice < 1 derivative blows up.
  double dice_outer = 0.0;
  if (parts.den > 0.0 && parts.coeff > kDscFloor) {
    const double neg_log = -std::log(parts.coeff);
    if (neg_log > 0.0) {
      dice_outer = gamma_dice * std::pow(neg_log, gamma_dice - 1.0) *
                   (-1.0 / parts.coeff);
    } else if (gamma_dice == 1.0) {
      dice_outer = -1.0 / parts.coeff;
    }
  }
  const double den2 = parts.den * parts.den;
  const double inv_n = 1.0 / static_cast<double>(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    double dsc_grad = 0.0;
    if (parts.den > 0.0) {
      dsc_grad = (2.0 * (y[i] != 0 ? 1.0 : 0.0) * parts.den - parts.num) / den2;
    }
    double ce_term = 0.0;
    if (!clip_active(p[i])) {
      const double pt = y[i] != 0 ? p[i] : 1.0 - p[i];
      const double neg_log = -std::log(pt);  // >= -ln(1 - eps) > 0
      ce_term = frozen.weights[i] * gamma_ce *
                std::pow(neg_log, gamma_ce - 1.0) * (-1.0 / pt) *
                (y[i] != 0 ? 1.0 : -1.0);
    }
    out[i] = w_dice * dice_outer * dsc_grad + w_ce * ce_term * inv_n;
  }
}

}  // namespace detail

double combo_loss(const ProbField& p, const MaskField& y, double alpha,
                  double ce_beta, double smooth) {
  require_same_shape(p, y);
  return detail::combo_value(
      make_loss_spec("combo",
                     {{"alpha", alpha}, {"ce_beta", ce_beta}, {"smooth", smooth}}),
      p, y, {});
}

Flagged exp_log_loss(const ProbField& p, const MaskField& y, double w_dice,
                     double w_ce, double gamma_dice, double gamma_ce,
                     double smooth) {
  require_same_shape(p, y);
  const LossSpec spec = make_loss_spec("exp_log", {{"w_dice", w_dice},
                                                   {"w_ce", w_ce},
                                                   {"gamma_dice", gamma_dice},
                                                   {"gamma_ce", gamma_ce},
                                                   {"smooth", smooth}});
  const detail::Frozen frozen = detail::exp_log_freeze(spec, p, y);
  return {detail::exp_log_value(spec, p, y, frozen), frozen.degenerate};
}

}  // namespace segloss
