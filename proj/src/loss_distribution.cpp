#include <cmath>

#include "kernels.hpp"
#include "segloss/losses.hpp"

namespace segloss {
namespace detail {

Frozen freeze_none(const LossSpec&, const ProbField&, const MaskField&) {
  return {};
}

double bce_value(const LossSpec&, const ProbField& p, const MaskField& y,
                 const Frozen&) {
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double q = clip_prob(p[i]);
    sum -= y[i] != 0 ? std::log(q) : std::log(1.0 - q);
  }
  return sum / static_cast<double>(p.size());
}

void bce_grad(const LossSpec&, const ProbField& p, const MaskField& y,
              const Frozen&, std::vector<double>& out) {
  const double inv_n = 1.0 / static_cast<double>(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (clip_active(p[i])) {
      out[i] = 0.0;
      continue;
    }
    out[i] = (y[i] != 0 ? -1.0 / p[i] : 1.0 / (1.0 - p[i])) * inv_n;
  }
}

double wce_value(const LossSpec& spec, const ProbField& p, const MaskField& y,
                 const Frozen&) {
  const double beta = spec.param("beta");
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double q = clip_prob(p[i]);
    sum -= y[i] != 0 ? beta * std::log(q) : std::log(1.0 - q);
  }
  return sum / static_cast<double>(p.size());
}

void wce_grad(const LossSpec& spec, const ProbField& p, const MaskField& y,
              const Frozen&, std::vector<double>& out) {
  const double beta = spec.param("beta");
  const double inv_n = 1.0 / static_cast<double>(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (clip_active(p[i])) {
      out[i] = 0.0;
      continue;
    }
    out[i] = (y[i] != 0 ? -beta / p[i] : 1.0 / (1.0 - p[i])) * inv_n;
  }
}

namespace {

// Per-image background fraction; constant with respect to p.
double background_fraction(const MaskField& y) {
  const double n = static_cast<double>(y.size());
  return (n - static_cast<double>(y.foreground_count())) / n;
}

}  // namespace

double balanced_ce_value(const LossSpec&, const ProbField& p, const MaskField& y,
                         const Frozen&) {
  const double beta = background_fraction(y);
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double q = clip_prob(p[i]);
    sum -= y[i] != 0 ? beta * std::log(q) : (1.0 - beta) * std::log(1.0 - q);
  }
  return sum / static_cast<double>(p.size());
}

void balanced_ce_grad(const LossSpec&, const ProbField& p, const MaskField& y,
                      const Frozen&, std::vector<double>& out) {
  const double beta = background_fraction(y);
  const double inv_n = 1.0 / static_cast<double>(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (clip_active(p[i])) {
      out[i] = 0.0;
      continue;
    }
    out[i] = (y[i] != 0 ? -beta / p[i] : (1.0 - beta) / (1.0 - p[i])) * inv_n;
  }
}

double focal_value(const LossSpec& spec, const ProbField& p, const MaskField& y,
                   const Frozen&) {
  const double alpha = spec.param("alpha");
  const double gamma = spec.param("gamma");
  const bool balanced = alpha != 1.0;  // alpha = 1 means alpha_t == 1 everywhere
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double q = clip_prob(p[i]);
    const double pt = y[i] != 0 ? q : 1.0 - q;
    const double at = balanced ? (y[i] != 0 ? alpha : 1.0 - alpha) : 1.0;
    sum -= at * std::pow(1.0 - pt, gamma) * std::log(pt);
  }
  return sum / static_cast<double>(p.size());
}

void focal_grad(const LossSpec& spec, const ProbField& p, const MaskField& y,
                const Frozen&, std::vector<double>& out) {
  const double alpha = spec.param("alpha");
  const double gamma = spec.param("gamma");
  const bool balanced = alpha != 1.0;
  const double inv_n = 1.0 / static_cast<double>(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (clip_active(p[i])) {
      out[i] = 0.0;
      continue;
    }
    const double q = p[i];
    const double pt = y[i] != 0 ? q : 1.0 - q;
    const double at = balanced ? (y[i] != 0 ? alpha : 1.0 - alpha) : 1.0;
    const double one_minus = 1.0 - pt;  // >= kClipEpsilon after clipping
    double d_pt;
    if (gamma == 0.0) {
      d_pt = -at / pt;
    } else {
      d_pt = at * (gamma * std::pow(one_minus, gamma - 1.0) * std::log(pt) -
                   std::pow(one_minus, gamma) / pt);
    }
    out[i] = d_pt * (y[i] != 0 ? 1.0 : -1.0) * inv_n;
  }
}

}  // namespace detail

double bce(const ProbField& p, const MaskField& y) {
  require_same_shape(p, y);
  return detail::bce_value(make_loss_spec("bce"), p, y, {});
}

double weighted_ce(const ProbField& p, const MaskField& y, double beta) {
  require_same_shape(p, y);
  return detail::wce_value(make_loss_spec("wce", {{"beta", beta}}), p, y, {});
}

double balanced_ce(const ProbField& p, const MaskField& y) {
  require_same_shape(p, y);
  return detail::balanced_ce_value(make_loss_spec("balanced_ce"), p, y, {});
}

double focal(const ProbField& p, const MaskField& y, double alpha, double gamma) {
  require_same_shape(p, y);
  return detail::focal_value(
      make_loss_spec("focal", {{"alpha", alpha}, {"gamma", gamma}}), p, y, {});
}

}  // namespace segloss
