#include "segloss/field.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace segloss {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ValueOutOfRange: return "ValueOutOfRange";
    case ErrorCode::InvalidEpsilon: return "InvalidEpsilon";
    case ErrorCode::UnknownLoss: return "UnknownLoss";
    case ErrorCode::UnknownParam: return "UnknownParam";
    case ErrorCode::ParamOutOfRange: return "ParamOutOfRange";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::EmptySource: return "EmptySource";
    case ErrorCode::InvalidThreshold: return "InvalidThreshold";
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::UnexpectedEof: return "UnexpectedEof";
    case ErrorCode::UnsupportedMaxval: return "UnsupportedMaxval";
    case ErrorCode::RaggedRows: return "RaggedRows";
    case ErrorCode::NotADirectory: return "NotADirectory";
    case ErrorCode::IoError: return "IoError";
  }
  return "Error";
}

namespace {

constexpr double kSnapTolerance = 1e-12;

void check_dims(int height, int width, std::size_t n_values) {
  if (height < 1 || width < 1) {
    throw_error(ErrorCode::DimensionMismatch,
                "field dimensions must be positive, got " +
                    std::to_string(height) + "x" + std::to_string(width));
  }
  const std::size_t expected =
      static_cast<std::size_t>(height) * static_cast<std::size_t>(width);
  if (n_values != expected) {
    throw_error(ErrorCode::DimensionMismatch,
                "expected " + std::to_string(expected) + " values for " +
                    std::to_string(height) + "x" + std::to_string(width) +
                    " field, got " + std::to_string(n_values));
  }
}

}  // namespace

std::int64_t MaskField::foreground_count() const {
  return std::accumulate(values.begin(), values.end(), std::int64_t{0});
}

ProbField make_prob_field(int height, int width, std::vector<double> values) {
  check_dims(height, width, values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    double v = values[i];
    if (!std::isfinite(v)) {
      throw_error(ErrorCode::ValueOutOfRange,
                  "non-finite probability at index " + std::to_string(i));
    }
    if (v < 0.0) {
      if (v < -kSnapTolerance) {
        throw_error(ErrorCode::ValueOutOfRange,
                    "probability " + std::to_string(v) + " at index " +
                        std::to_string(i) + " below 0");
      }
      values[i] = 0.0;
    } else if (v > 1.0) {
      if (v > 1.0 + kSnapTolerance) {
        throw_error(ErrorCode::ValueOutOfRange,
                    "probability " + std::to_string(v) + " at index " +
                        std::to_string(i) + " above 1");
      }
      values[i] = 1.0;
    }
  }
  return ProbField{height, width, std::move(values)};
}

MaskField make_mask_field(int height, int width, std::vector<std::uint8_t> values) {
  check_dims(height, width, values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] > 1) {
      throw_error(ErrorCode::ValueOutOfRange,
                  "mask label " + std::to_string(values[i]) + " at index " +
                      std::to_string(i) + " is not 0 or 1");
    }
  }
  return MaskField{height, width, std::move(values)};
}

ProbField prob_from_mask(const MaskField& mask) {
  std::vector<double> values(mask.size());
  std::transform(mask.values.begin(), mask.values.end(), values.begin(),
                 [](std::uint8_t v) { return static_cast<double>(v); });
  return ProbField{mask.height, mask.width, std::move(values)};
}

ProbField clip_probabilities(const ProbField& p, double eps_clip) {
  if (!(eps_clip > 0.0 && eps_clip < 0.5)) {
    throw_error(ErrorCode::InvalidEpsilon,
                "eps_clip must lie in (0, 0.5), got " + std::to_string(eps_clip));
  }
  std::vector<double> values(p.size());
  const double hi = 1.0 - eps_clip;
  std::transform(p.values.begin(), p.values.end(), values.begin(),
                 [&](double v) { return std::min(std::max(v, eps_clip), hi); });
  return ProbField{p.height, p.width, std::move(values)};
}

void require_same_shape(const ProbField& p, const MaskField& y) {
  if (!same_shape(p, y)) {
    throw_error(ErrorCode::ShapeMismatch,
                "prediction is " + std::to_string(p.height) + "x" +
                    std::to_string(p.width) + " but truth is " +
                    std::to_string(y.height) + "x" + std::to_string(y.width));
  }
}

}  // namespace segloss
