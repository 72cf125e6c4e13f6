#include "segloss/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace segloss {

MaskField binarize(const ProbField& p, double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw_error(ErrorCode::InvalidThreshold,
                "threshold must lie in (0, 1), got " + std::to_string(threshold));
  }
  std::vector<std::uint8_t> out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    out[i] = p.values[i] >= threshold ? 1 : 0;
  }
  return MaskField{p.height, p.width, std::move(out)};
}

namespace {

// Sentinel for "no source in this scanline yet". Large enough to lose to any
// real parabola, small enough that envelope intersections stay well-behaved.
constexpr double kFar = 1e20;

// 1-D squared-distance transform of a sampled function f over n entries via
// the lower envelope of parabolas. Output values are (q - v)^2 + f[v], which
// stays integer-exact whenever f holds exact integers.
void squared_dt_1d(const std::vector<double>& f, int n, std::vector<double>& d,
                   std::vector<int>& v, std::vector<double>& z) {
  int k = 0;
  v[0] = 0;
  z[0] = -kFar;
  z[1] = kFar;
  for (int q = 1; q < n; ++q) {
    double s = ((f[q] + static_cast<double>(q) * q) -
                (f[v[k]] + static_cast<double>(v[k]) * v[k])) /
               (2.0 * (q - v[k]));
    while (s <= z[k]) {
      --k;
      s = ((f[q] + static_cast<double>(q) * q) -
           (f[v[k]] + static_cast<double>(v[k]) * v[k])) /
          (2.0 * (q - v[k]));
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = kFar;
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    const double dq = q - v[k];
    d[q] = dq * dq + f[v[k]];
  }
}

std::vector<double> squared_dt_2d(const MaskField& source) {
  if (source.foreground_count() == 0) {
    throw_error(ErrorCode::EmptySource,
                "distance transform needs at least one foreground pixel");
  }
  const int h = source.height;
  const int w = source.width;
  std::vector<double> grid(source.size());
  for (std::size_t i = 0; i < source.size(); ++i) {
    grid[i] = source.values[i] != 0 ? 0.0 : kFar;
  }

  const int n = std::max(h, w);
  std::vector<double> f(n), d(n), z(n + 1);
  std::vector<int> v(n);

  // columns, then rows
  for (int x = 0; x < w; ++x) {
    for (int y = 0; y < h; ++y) f[y] = grid[static_cast<std::size_t>(y) * w + x];
    squared_dt_1d(f, h, d, v, z);
    for (int y = 0; y < h; ++y) grid[static_cast<std::size_t>(y) * w + x] = d[y];
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) f[x] = grid[static_cast<std::size_t>(y) * w + x];
    squared_dt_1d(f, w, d, v, z);
    for (int x = 0; x < w; ++x) grid[static_cast<std::size_t>(y) * w + x] = d[x];
  }
  return grid;
}

}  // namespace

std::vector<std::int64_t> edt_exact_squared(const MaskField& source) {
  const std::vector<double> grid = squared_dt_2d(source);
  std::vector<std::int64_t> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out[i] = static_cast<std::int64_t>(grid[i]);
  }
  return out;
}

DistanceField edt_exact(const MaskField& source) {
  std::vector<double> grid = squared_dt_2d(source);
  for (double& v : grid) v = std::sqrt(v);
  return DistanceField{source.height, source.width, std::move(grid)};
}

std::vector<std::int64_t> edt_bruteforce_squared(const MaskField& source) {
  if (source.foreground_count() == 0) {
    throw_error(ErrorCode::EmptySource,
                "distance transform needs at least one foreground pixel");
  }
  const int h = source.height;
  const int w = source.width;
  std::vector<std::pair<int, int>> sources;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (source.at(y, x) != 0) sources.emplace_back(y, x);
    }
  }
  std::vector<std::int64_t> out(source.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      std::int64_t best = std::numeric_limits<std::int64_t>::max();
      for (const auto& [sy, sx] : sources) {
        const std::int64_t dy = y - sy;
        const std::int64_t dx = x - sx;
        best = std::min(best, dy * dy + dx * dx);
      }
      out[static_cast<std::size_t>(y) * w + x] = best;
    }
  }
  return out;
}

DistanceField edt_bruteforce(const MaskField& source) {
  const std::vector<std::int64_t> squared = edt_bruteforce_squared(source);
  std::vector<double> values(squared.size());
  for (std::size_t i = 0; i < squared.size(); ++i) {
    values[i] = std::sqrt(static_cast<double>(squared[i]));
  }
  return DistanceField{source.height, source.width, std::move(values)};
}

MaskField extract_boundary(const MaskField& mask) {
  const int h = mask.height;
  const int w = mask.width;
  std::vector<std::uint8_t> out(mask.size(), 0);
  auto background = [&](int y, int x) {
    if (y < 0 || y >= h || x < 0 || x >= w) return true;  // border is background
    return mask.at(y, x) == 0;
  };
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (mask.at(y, x) == 0) continue;
      if (background(y - 1, x) || background(y + 1, x) || background(y, x - 1) ||
          background(y, x + 1)) {
        out[static_cast<std::size_t>(y) * w + x] = 1;
      }
    }
  }
  return MaskField{h, w, std::move(out)};
}

}  // namespace segloss
