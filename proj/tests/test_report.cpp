#include <doctest.h>

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "segloss/io.hpp"
#include "segloss/losses.hpp"
#include "segloss/report.hpp"
#include "testutil.hpp"

using namespace segloss;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = testutil::test_scratch_dir() / "report";
  fs::create_directories(dir);
  return dir / name;
}

std::map<std::string, LossSpec> specs_for(const std::vector<std::string>& tokens) {
  std::map<std::string, LossSpec> specs;
  for (const std::string& token : tokens) {
    specs.emplace(token, parse_loss_spec(token));
  }
  return specs;
}

}  // namespace

TEST_CASE("a single-pair report round-trips through a JSON parser") {
  const MaskField y = make_mask_field(2, 2, {1, 0, 0, 1});
  const fs::path truth = scratch("t.pgm");
  write_pgm(y, truth);
  const fs::path pred = scratch("p.csv");
  write_float_grid(2, 2, std::vector<double>{1.0, 0.0, 0.0, 1.0}, pred);

  const EvalReport report =
      evaluate_pairs({{pred, truth}}, specs_for({"dice", "bce"}), 0.5);
  REQUIRE(report.pairs.size() == 1);
  CHECK_FALSE(report.any_error());

  std::ostringstream buffer;
  write_report_json(report, buffer);
  const std::string text = buffer.str();
  CHECK(text.back() == '\n');

  const nlohmann::json j = nlohmann::json::parse(text);
  CHECK(j["pairs"].size() == 1);
  CHECK(j["pairs"][0]["losses"]["dice"].get<double>() == 0.0);
  CHECK(j["pairs"][0]["metrics"]["dice"].get<double>() == 1.0);
  CHECK(j["config"]["threshold"].get<double>() == 0.5);
  CHECK(j["config"]["losses"]["dice"]["params"]["smooth"].get<double>() == 1.0);

  // aggregate of one pair equals that pair
  CHECK(j["aggregate"]["losses"]["bce"].get<double>() ==
        j["pairs"][0]["losses"]["bce"].get<double>());
  CHECK(j["aggregate"]["metrics"]["dice"]["mean"].get<double>() == 1.0);
  CHECK(j["aggregate"]["metrics"]["dice"]["undefined_count"].get<int>() == 0);
}

TEST_CASE("undefined metrics serialize as null and stay out of aggregates") {
  const MaskField y = make_mask_field(1, 2, {0, 0});
  const fs::path truth = scratch("blank_t.pgm");
  write_pgm(y, truth);
  const fs::path pred = scratch("blank_p.csv");
  write_float_grid(1, 2, std::vector<double>{0.0, 0.0}, pred);

  const EvalReport report =
      evaluate_pairs({{pred, truth}}, specs_for({"bce"}), 0.5);
  std::ostringstream buffer;
  write_report_json(report, buffer);
  const nlohmann::json j = nlohmann::json::parse(buffer.str());
  CHECK(j["pairs"][0]["metrics"]["precision"].is_null());
  CHECK(j["pairs"][0]["metrics"]["specificity"].get<double>() == 1.0);
  CHECK(j["aggregate"]["metrics"]["precision"]["mean"].is_null());
  CHECK(j["aggregate"]["metrics"]["precision"]["undefined_count"].get<int>() == 1);
}

TEST_CASE("degenerate boundary fallbacks are flagged in the report") {
  const MaskField y = make_mask_field(1, 2, {0, 0});
  const fs::path truth = scratch("flag_t.pgm");
  write_pgm(y, truth);
  const fs::path pred = scratch("flag_p.csv");
  write_float_grid(1, 2, std::vector<double>{0.2, 0.3}, pred);

  const EvalReport report =
      evaluate_pairs({{pred, truth}}, specs_for({"hausdorff_dt", "dice"}), 0.5);
  REQUIRE(report.pairs.size() == 1);
  CHECK(report.pairs[0].flags ==
        std::vector<std::string>{"hausdorff_dt:degenerate"});
}

TEST_CASE("pair-level failures become error entries, not aborts") {
  const MaskField y = make_mask_field(1, 3, {1, 0, 0});
  const fs::path truth = scratch("err_t.pgm");
  write_pgm(y, truth);
  const fs::path good_pred = scratch("err_good.csv");
  write_float_grid(1, 3, std::vector<double>{1.0, 0.0, 0.0}, good_pred);
  const fs::path bad_pred = scratch("err_bad.csv");
  write_float_grid(1, 2, std::vector<double>{1.0, 0.0}, bad_pred);

  const EvalReport report = evaluate_pairs(
      {{good_pred, truth}, {bad_pred, truth}}, specs_for({"dice"}), 0.5);
  REQUIRE(report.pairs.size() == 2);
  CHECK_FALSE(report.pairs[0].error.has_value());
  REQUIRE(report.pairs[1].error.has_value());
  CHECK(report.pairs[1].error->find("ShapeMismatch") != std::string::npos);
  CHECK(report.any_error());

  // errored pairs contribute nothing to the aggregate
  std::ostringstream buffer;
  write_report_json(report, buffer);
  const nlohmann::json j = nlohmann::json::parse(buffer.str());
  CHECK(j["aggregate"]["losses"]["dice"].get<double>() ==
        j["pairs"][0]["losses"]["dice"].get<double>());
  CHECK(j["pairs"][1]["error"].get<std::string>().find("ShapeMismatch") !=
        std::string::npos);
}

TEST_CASE("report writing is byte-deterministic") {
  const MaskField y = make_mask_field(2, 2, {1, 0, 1, 0});
  const fs::path truth = scratch("det_t.pgm");
  write_pgm(y, truth);
  const fs::path pred = scratch("det_p.csv");
  write_float_grid(2, 2, std::vector<double>{0.9, 0.2, 0.7, 0.1}, pred);

  const auto specs = specs_for({"dice", "tversky:alpha=0.5,beta=0.5", "bce"});
  const EvalReport a = evaluate_pairs({{pred, truth}}, specs, 0.5);
  const EvalReport b = evaluate_pairs({{pred, truth}}, specs, 0.5);
  std::ostringstream sa;
  std::ostringstream sb;
  write_report_json(a, sa);
  write_report_json(b, sb);
  CHECK(sa.str() == sb.str());
}

TEST_CASE("report loss values equal direct library calls") {
  const MaskField y = make_mask_field(2, 2, {1, 0, 1, 0});
  const fs::path truth = scratch("direct_t.pgm");
  write_pgm(y, truth);
  const std::vector<double> probs{0.9, 0.2, 0.7, 0.1};
  const fs::path pred = scratch("direct_p.csv");
  write_float_grid(2, 2, probs, pred);
  const ProbField p = make_prob_field(2, 2, probs);

  std::map<std::string, LossSpec> specs;
  for (const std::string& name : canonical_loss_names()) {
    specs.emplace(name, make_loss_spec(name));
  }
  const EvalReport report = evaluate_pairs({{pred, truth}}, specs, 0.5);
  REQUIRE(report.pairs.size() == 1);
  for (const auto& [key, spec] : specs) {
    const double direct = evaluate_loss(spec, p, y).value;
    CHECK_MESSAGE(std::abs(report.pairs[0].losses.at(key) - direct) <= 1e-12, key);
  }
}
