#pragma once

#include <string>

#include "segloss/field.hpp"
#include "segloss/loss_spec.hpp"

namespace segloss {

// Probabilities feeding any logarithm are clamped into
// [kClipEpsilon, 1 - kClipEpsilon] at loss entry so ln p and ln(1-p) stay
// finite. Losses without logarithms (dice/tversky families, sensitivity-
// specificity, the Hausdorff surrogate) use the raw values.
inline constexpr double kClipEpsilon = 1e-7;

// Value plus a marker for results computed under a documented degenerate
// fallback (e.g. empty ground-truth boundary) rather than the nominal formula.
struct Flagged {
  double value = 0.0;
  bool degenerate = false;
};

// ---- Distribution-based losses ----------------------------------------
// All reduce by the arithmetic mean over every pixel.

double bce(const ProbField& p, const MaskField& y);
double weighted_ce(const ProbField& p, const MaskField& y, double beta = 1.0);
// beta = fraction of background pixels, computed per image.
double balanced_ce(const ProbField& p, const MaskField& y);
// alpha weights the foreground term, (1 - alpha) the background term;
// alpha = 1 disables class balancing.
double focal(const ProbField& p, const MaskField& y, double alpha = 0.25,
             double gamma = 2.0);

// ---- Region-based losses -----------------------------------------------

double soft_dice_coeff(const ProbField& p, const MaskField& y, double smooth = 1.0);
double dice_loss(const ProbField& p, const MaskField& y, double smooth = 1.0);
// alpha weights false positives (sum (1-y) p), beta weights false negatives
// (sum y (1-p)); alpha = beta = 0.5 recovers the dice coefficient.
double tversky_index(const ProbField& p, const MaskField& y, double alpha = 0.3,
                     double beta = 0.7, double smooth = 1.0);
double tversky_loss(const ProbField& p, const MaskField& y, double alpha = 0.3,
                    double beta = 0.7, double smooth = 1.0);
double focal_tversky_loss(const ProbField& p, const MaskField& y,
                          double alpha = 0.3, double beta = 0.7,
                          double smooth = 1.0, double gamma = 0.75);
double log_cosh_dice_loss(const ProbField& p, const MaskField& y,
                          double smooth = 1.0);
double sens_spec_loss(const ProbField& p, const MaskField& y, double w = 0.5,
                      double smooth = 1e-6);

// ---- Boundary-based losses ---------------------------------------------
// Distance maps and boundaries are recomputed from the inputs on every call
// and are treated as constants of p for differentiation. Empty source sets
// fall back to a zero distance map (or to plain cross-entropy) and set the
// degenerate flag instead of erroring.

Flagged hausdorff_dt_loss(const ProbField& p, const MaskField& y,
                          double alpha_exp = 2.0, double threshold = 0.5);
Flagged shape_aware_loss(const ProbField& p, const MaskField& y,
                         double threshold = 0.5);
Flagged distance_map_penalty_loss(const ProbField& p, const MaskField& y);

// ---- Compounded losses --------------------------------------------------

// alpha * weighted-CE - (1 - alpha) * dice coefficient; negative values legal.
double combo_loss(const ProbField& p, const MaskField& y, double alpha = 0.5,
                  double ce_beta = 0.5, double smooth = 1.0);
// Degenerate flag is set when the image is single-label and the per-label
// weights fall back to 1.
Flagged exp_log_loss(const ProbField& p, const MaskField& y,
                     double w_dice = 0.8, double w_ce = 0.2,
                     double gamma_dice = 0.3, double gamma_ce = 0.3,
                     double smooth = 1.0);

// ---- Registry dispatch ---------------------------------------------------

struct LossResult {
  double value = 0.0;
  bool degenerate = false;
};

// Evaluate any cataloged loss from a validated spec.
LossResult evaluate_loss(const LossSpec& spec, const ProbField& p,
                         const MaskField& y);

}  // namespace segloss
