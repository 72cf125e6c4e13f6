#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "segloss/error.hpp"

namespace segloss {

// Dense row-major grid of predicted foreground probabilities, one per pixel.
// Pixel index i = row * width + col. Values always lie in [0, 1].
struct ProbField {
  int height = 0;
  int width = 0;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  double at(int row, int col) const {
    return values[static_cast<std::size_t>(row) * width + col];
  }
};

// Dense row-major grid of ground-truth labels, each exactly 0 or 1.
struct MaskField {
  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> values;

  std::size_t size() const { return values.size(); }
  std::uint8_t operator[](std::size_t i) const { return values[i]; }
  std::uint8_t at(int row, int col) const {
    return values[static_cast<std::size_t>(row) * width + col];
  }
  std::int64_t foreground_count() const;
};

// Validating constructors. make_prob_field snaps values within 1e-12 of the
// [0, 1] boundary onto it; anything farther out is a ValueOutOfRange error.
ProbField make_prob_field(int height, int width, std::vector<double> values);
MaskField make_mask_field(int height, int width, std::vector<std::uint8_t> values);

// Crisp 0/1 promotion of a mask to a probability field.
ProbField prob_from_mask(const MaskField& mask);

// Clamp every value into [eps_clip, 1 - eps_clip]. Idempotent.
ProbField clip_probabilities(const ProbField& p, double eps_clip = 1e-7);

template <typename A, typename B>
bool same_shape(const A& a, const B& b) {
  return a.height == b.height && a.width == b.width;
}

void require_same_shape(const ProbField& p, const MaskField& y);

}  // namespace segloss
