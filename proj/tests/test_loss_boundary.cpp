#include <doctest.h>

#include <cmath>
#include <random>

#include "segloss/losses.hpp"
#include "testutil.hpp"

using namespace segloss;

TEST_CASE("hausdorff loss vanishes on a perfect crisp prediction") {
  const MaskField y = make_mask_field(2, 3, {1, 1, 0, 0, 0, 1});
  const Flagged r = hausdorff_dt_loss(prob_from_mask(y), y);
  CHECK(r.value == 0.0);
  CHECK_FALSE(r.degenerate);
}

TEST_CASE("hausdorff 1x3 hand computation") {
  // y = [1,0,0] gives d_y = [0,1,2]; binarized p = [0,0,1] gives d_p = [2,1,0];
  // with exponent 2 the weights are [4,2,4] and (p-y)^2 = [1,0,1],
  // so the loss is (4 + 0 + 4) / 3.
  const ProbField p = make_prob_field(1, 3, {0.0, 0.0, 1.0});
  const MaskField y = make_mask_field(1, 3, {1, 0, 0});
  const Flagged r = hausdorff_dt_loss(p, y, 2.0, 0.5);
  CHECK(r.value == doctest::Approx(8.0 / 3.0).epsilon(1e-15));
  CHECK_FALSE(r.degenerate);
}

TEST_CASE("hausdorff degenerate fallbacks never abort") {
  const ProbField zero_p = make_prob_field(1, 3, {0.0, 0.0, 0.0});
  const MaskField zero_y = make_mask_field(1, 3, {0, 0, 0});
  const Flagged both = hausdorff_dt_loss(zero_p, zero_y);
  CHECK(both.value == 0.0);
  CHECK(both.degenerate);

  // empty prediction set only: d_p is identically zero
  const MaskField y = make_mask_field(1, 3, {1, 0, 0});
  const Flagged pred_empty = hausdorff_dt_loss(zero_p, y, 2.0, 0.5);
  CHECK(pred_empty.degenerate);
  // pixels: (0-1)^2*(0+0) + 0 + 0
  CHECK(pred_empty.value == 0.0);

  // empty truth only
  const ProbField p = make_prob_field(1, 3, {0.0, 0.0, 1.0});
  const Flagged truth_empty = hausdorff_dt_loss(p, zero_y, 2.0, 0.5);
  CHECK(truth_empty.degenerate);
  // d_p = [2,1,0], only pixel 2 differs and its weight is 0
  CHECK(truth_empty.value == 0.0);

  // empty truth, soft probabilities: binarized p = [1,0,0], d_p^2 = [0,1,4],
  // (p-y)^2 = [1, 0.16, 0.09], so loss = (0.16 + 0.36) / 3
  const ProbField p2 = make_prob_field(1, 3, {1.0, 0.4, 0.3});
  const Flagged r2 = hausdorff_dt_loss(p2, zero_y, 2.0, 0.5);
  CHECK(r2.degenerate);
  CHECK(r2.value == doctest::Approx(0.52 / 3.0).epsilon(1e-14));
}

TEST_CASE("shape aware 1x3 hand computation") {
  // predicted boundary = {pixel 2}, truth boundary = {pixel 0},
  // D = [0,1,2], E = [0,0,2], weights (1+E) = [1,1,3];
  // loss = (-ln 0.1 - ln 0.9 - 3 ln 0.1) / 3.
  const ProbField p = make_prob_field(1, 3, {0.1, 0.1, 0.9});
  const MaskField y = make_mask_field(1, 3, {1, 0, 0});
  const Flagged r = shape_aware_loss(p, y, 0.5);
  const double expected = (4.0 * std::log(10.0) - std::log(0.9)) / 3.0;
  CHECK(r.value == doctest::Approx(expected).epsilon(1e-14));
  CHECK_FALSE(r.degenerate);
}

TEST_CASE("shape aware equals bce when the boundaries coincide") {
  std::mt19937 rng(53);
  for (int trial = 0; trial < 50; ++trial) {
    const MaskField y = testutil::random_mask(rng, 6, 6);
    std::vector<double> values(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
      const double u = testutil::unit_uniform(rng);
      values[i] = y[i] != 0 ? 0.55 + 0.4 * u : 0.05 + 0.4 * u;
    }
    const ProbField p = make_prob_field(6, 6, std::move(values));
    const Flagged r = shape_aware_loss(p, y, 0.5);
    CHECK(std::abs(r.value - bce(p, y)) <= 1e-12);
  }
}

TEST_CASE("shape aware falls back to bce on an empty truth boundary") {
  const ProbField p = make_prob_field(1, 3, {0.2, 0.6, 0.9});
  const MaskField y = make_mask_field(1, 3, {0, 0, 0});
  const Flagged r = shape_aware_loss(p, y);
  CHECK(r.degenerate);
  CHECK(std::abs(r.value - bce(p, y)) <= 1e-15);
}

TEST_CASE("distance map penalty 1x3 hand computation") {
  // boundary = {0}, D = [0,1,2], phi = [0,0.5,1], weights = [1,1.5,2];
  // p = 0.5 everywhere so CE_i = ln 2 and loss = ln2 * 4.5 / 3.
  const ProbField p = make_prob_field(1, 3, {0.5, 0.5, 0.5});
  const MaskField y = make_mask_field(1, 3, {1, 0, 0});
  const Flagged r = distance_map_penalty_loss(p, y);
  CHECK(r.value == doctest::Approx(std::log(2.0) * 4.5 / 3.0).epsilon(1e-15));
  CHECK_FALSE(r.degenerate);
}

TEST_CASE("distance map penalty normalizes its map to max 1") {
  // weights peak at 1 + 1 on the farthest pixel, so loss <= 2 * bce
  std::mt19937 rng(59);
  for (int trial = 0; trial < 20; ++trial) {
    const ProbField p = testutil::random_prob(rng, 6, 6, 0.05, 0.95);
    MaskField y = testutil::random_mask(rng, 6, 6);
    const Flagged r = distance_map_penalty_loss(p, y);
    if (!r.degenerate) {
      CHECK(r.value <= 2.0 * bce(p, y) + 1e-12);
    }
  }
}

TEST_CASE("distance map penalty degenerate fallbacks equal bce") {
  const ProbField p = make_prob_field(1, 3, {0.2, 0.6, 0.9});

  const MaskField empty = make_mask_field(1, 3, {0, 0, 0});
  const Flagged no_boundary = distance_map_penalty_loss(p, empty);
  CHECK(no_boundary.degenerate);
  CHECK(std::abs(no_boundary.value - bce(p, empty)) <= 1e-15);

  // every pixel of an all-ones 1x3 mask is boundary, so max distance is 0
  const MaskField solid = make_mask_field(1, 3, {1, 1, 1});
  const Flagged all_boundary = distance_map_penalty_loss(p, solid);
  CHECK(all_boundary.degenerate);
  CHECK(std::abs(all_boundary.value - bce(p, solid)) <= 1e-15);
}

TEST_CASE("weighted boundary losses dominate bce") {
  std::mt19937 rng(61);
  for (int trial = 0; trial < 50; ++trial) {
    const ProbField p = testutil::random_prob(rng, 5, 5);
    const MaskField y = testutil::random_mask(rng, 5, 5);
    const double base = bce(p, y);
    CHECK(shape_aware_loss(p, y).value >= base - 1e-12);
    CHECK(distance_map_penalty_loss(p, y).value >= base - 1e-12);
    CHECK(hausdorff_dt_loss(p, y).value >= 0.0);
  }
}

TEST_CASE("boundary losses are pure functions of their inputs") {
  std::mt19937 rng(67);
  const ProbField p = testutil::random_prob(rng, 7, 7);
  const MaskField y = testutil::random_mask(rng, 7, 7);
  CHECK(hausdorff_dt_loss(p, y).value == hausdorff_dt_loss(p, y).value);
  CHECK(shape_aware_loss(p, y).value == shape_aware_loss(p, y).value);
  CHECK(distance_map_penalty_loss(p, y).value ==
        distance_map_penalty_loss(p, y).value);
}

TEST_CASE("boundary losses reject bad parameters and shapes") {
  const ProbField p = make_prob_field(1, 2, {0.5, 0.5});
  const MaskField y = make_mask_field(1, 2, {1, 0});
  CHECK_THROWS_AS(hausdorff_dt_loss(p, y, -1.0, 0.5), Error);
  CHECK_THROWS_AS(hausdorff_dt_loss(p, y, 2.0, 1.5), Error);
  CHECK_THROWS_AS(shape_aware_loss(p, y, 0.0), Error);
  const MaskField tall = make_mask_field(2, 1, {1, 0});
  CHECK_THROWS_AS(hausdorff_dt_loss(p, tall), Error);
  CHECK_THROWS_AS(shape_aware_loss(p, tall), Error);
  CHECK_THROWS_AS(distance_map_penalty_loss(p, tall), Error);
}
