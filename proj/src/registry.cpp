#include <map>

#include "kernels.hpp"
#include "segloss/losses.hpp"

namespace segloss {
namespace detail {

const LossKernel& find_kernel(const std::string& name) {
  static const std::map<std::string, LossKernel> kernels = {
      {"bce", {freeze_none, bce_value, bce_grad}},
      {"wce", {freeze_none, wce_value, wce_grad}},
      {"balanced_ce", {freeze_none, balanced_ce_value, balanced_ce_grad}},
      {"focal", {freeze_none, focal_value, focal_grad}},
      {"dice", {freeze_none, dice_value, dice_grad}},
      {"sens_spec", {freeze_none, sens_spec_value, sens_spec_grad}},
      {"tversky", {freeze_none, tversky_value, tversky_grad}},
      {"focal_tversky", {freeze_none, focal_tversky_value, focal_tversky_grad}},
      {"log_cosh_dice", {freeze_none, log_cosh_dice_value, log_cosh_dice_grad}},
      {"hausdorff_dt", {hausdorff_freeze, hausdorff_value, hausdorff_grad}},
      {"shape_aware", {shape_aware_freeze, shape_aware_value, shape_aware_grad}},
      {"dist_map_penalty",
       {dist_map_penalty_freeze, dist_map_penalty_value, dist_map_penalty_grad}},
      {"combo", {freeze_none, combo_value, combo_grad}},
      {"exp_log", {exp_log_freeze, exp_log_value, exp_log_grad}},
  };
  auto it = kernels.find(name);
  if (it == kernels.end()) {
    throw_error(ErrorCode::UnknownLoss,
                "\"" + name + "\" is not a recognized loss");
  }
  return it->second;
}

}  // namespace detail

LossResult evaluate_loss(const LossSpec& spec, const ProbField& p,
                         const MaskField& y) {
  require_same_shape(p, y);
  const detail::LossKernel& kernel = detail::find_kernel(spec.name);
  const detail::Frozen frozen = kernel.freeze(spec, p, y);
  return {kernel.value(spec, p, y, frozen), frozen.degenerate};
}

}  // namespace segloss
