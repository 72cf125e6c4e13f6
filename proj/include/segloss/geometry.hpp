#pragma once

#include <cstdint>
#include <vector>

#include "segloss/field.hpp"

namespace segloss {

// Row-major grid of nonnegative Euclidean distances, in pixel units.
// Zero exactly at source-set pixels.
struct DistanceField {
  int height = 0;
  int width = 0;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
};

// Threshold a probability field into a crisp mask: pixel = 1 iff p >= threshold.
MaskField binarize(const ProbField& p, double threshold = 0.5);

// Exact Euclidean distance transform via the two-pass 1-D lower-envelope
// squared-distance transform (columns then rows). The squared distances are
// integer-exact; edt_exact is their square root. Throws EmptySource when the
// mask has no foreground pixel.
DistanceField edt_exact(const MaskField& source);
std::vector<std::int64_t> edt_exact_squared(const MaskField& source);

// Exhaustive all-pairs oracle with identical contract. O(N^2); test use.
DistanceField edt_bruteforce(const MaskField& source);
std::vector<std::int64_t> edt_bruteforce_squared(const MaskField& source);

// Boundary pixels: foreground with at least one 4-neighbor background, where
// out-of-bounds neighbors count as background.
MaskField extract_boundary(const MaskField& mask);

}  // namespace segloss
