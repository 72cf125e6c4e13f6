#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "segloss/geometry.hpp"
#include "segloss/gradients.hpp"
#include "segloss/io.hpp"
#include "segloss/losses.hpp"
#include "segloss/metrics.hpp"
#include "segloss/report.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// A token containing ':' is one spec (its commas separate parameters);
// otherwise commas separate bare loss names.
std::vector<std::string> expand_loss_tokens(const std::vector<std::string>& tokens) {
  std::vector<std::string> out;
  for (const std::string& token : tokens) {
    if (token.find(':') != std::string::npos) {
      out.push_back(token);
      continue;
    }
    std::size_t start = 0;
    while (start <= token.size()) {
      const std::size_t comma = token.find(',', start);
      const std::string piece =
          token.substr(start, comma == std::string::npos ? std::string::npos
                                                         : comma - start);
      if (!piece.empty()) out.push_back(piece);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }
  return out;
}

std::map<std::string, segloss::LossSpec> resolve_specs(
    const std::vector<std::string>& tokens) {
  std::map<std::string, segloss::LossSpec> specs;
  std::vector<std::string> expanded = tokens.empty()
                                          ? segloss::canonical_loss_names()
                                          : expand_loss_tokens(tokens);
  for (const std::string& token : expanded) {
    specs.emplace(token, segloss::parse_loss_spec(token));
  }
  return specs;
}

struct EvalArgs {
  std::string pred;
  std::string truth;
  std::vector<std::string> losses;
  double threshold = 0.5;
  std::string out;
};

int run_eval(const EvalArgs& args) {
  std::map<std::string, segloss::LossSpec> specs;
  try {
    specs = resolve_specs(args.losses);
  } catch (const segloss::Error& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }
  if (specs.empty()) {
    std::cerr << "--losses expanded to an empty list\n";
    return kExitUsage;
  }
  if (!(args.threshold > 0.0 && args.threshold < 1.0)) {
    std::cerr << "InvalidThreshold: --threshold must lie in (0, 1)\n";
    return kExitUsage;
  }

  std::vector<std::pair<fs::path, fs::path>> pairs;
  const fs::path pred_path(args.pred);
  const fs::path truth_path(args.truth);
  if (fs::is_directory(pred_path) && fs::is_directory(truth_path)) {
    const segloss::PairManifest manifest =
        segloss::build_manifest(pred_path, truth_path);
    for (const std::string& warning : manifest.warnings) {
      std::cerr << "warning: " << warning << "\n";
    }
    for (const auto& pair : manifest.pairs) {
      pairs.emplace_back(pair.pred, pair.truth);
    }
  } else if (fs::is_regular_file(pred_path) && fs::is_regular_file(truth_path)) {
    pairs.emplace_back(pred_path, truth_path);
  } else {
    std::cerr << "--pred and --truth must both be files or both be directories\n";
    return kExitUsage;
  }

  const segloss::EvalReport report =
      segloss::evaluate_pairs(pairs, specs, args.threshold);
  try {
    if (args.out.empty()) {
      segloss::write_report_json(report, std::cout);
    } else {
      segloss::write_report_json(report, fs::path(args.out));
    }
  } catch (const segloss::Error& e) {
    std::cerr << e.what() << "\n";
    return kExitRuntime;
  }
  for (const segloss::PairResult& pair : report.pairs) {
    if (pair.error) {
      std::cerr << "error: " << pair.pred << " vs " << pair.truth << ": "
                << *pair.error << "\n";
    }
  }
  return report.any_error() ? kExitRuntime : kExitOk;
}

struct GradcheckArgs {
  std::string loss;
  bool all = false;
  std::string size = "8x8";
  int seeds = 20;
  double tol = 1e-4;
};

int run_gradcheck(const GradcheckArgs& args) {
  int height = 0;
  int width = 0;
  if (std::sscanf(args.size.c_str(), "%dx%d", &height, &width) != 2 ||
      height < 1 || width < 1) {
    std::cerr << "--size expects <H>x<W>, got \"" << args.size << "\"\n";
    return kExitUsage;
  }
  if (args.seeds < 1) {
    std::cerr << "--seeds must be >= 1\n";
    return kExitUsage;
  }
  std::vector<segloss::LossSpec> specs;
  try {
    if (args.all) {
      for (const std::string& name : segloss::canonical_loss_names()) {
        specs.push_back(segloss::make_loss_spec(name));
      }
    } else {
      specs.push_back(segloss::parse_loss_spec(args.loss));
    }
  } catch (const segloss::Error& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }

  bool all_pass = true;
  for (const segloss::LossSpec& spec : specs) {
    const double err =
        segloss::grad_check_max_rel_err(spec, height, width, args.seeds);
    const bool pass = err < args.tol;
    all_pass = all_pass && pass;
    std::printf("%-18s max_rel_err=%.6e  %s\n", spec.name.c_str(), err,
                pass ? "ok" : "FAIL");
  }
  return all_pass ? kExitOk : kExitRuntime;
}

struct FitArgs {
  std::string truth;
  std::string loss;
  int steps = 500;
  double lr = 1.0;
  std::uint32_t seed = 7;
  std::string trace;
};

int run_fit(const FitArgs& args) {
  if (args.steps < 1 || !(args.lr > 0.0)) {
    std::cerr << "--steps must be >= 1 and --lr positive\n";
    return kExitUsage;
  }
  segloss::MaskField truth;
  segloss::LossSpec spec;
  try {
    spec = segloss::parse_loss_spec(args.loss);
    truth = segloss::read_truth(fs::path(args.truth));
  } catch (const segloss::Error& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }
  try {
    const segloss::FitResult result =
        segloss::fit_logits(truth, spec, args.steps, args.lr, args.seed);
    if (!args.trace.empty()) {
      std::ofstream out(args.trace, std::ios::binary | std::ios::trunc);
      if (!out) {
        std::cerr << "IoError: cannot open " << args.trace << " for writing\n";
        return kExitRuntime;
      }
      for (std::size_t i = 0; i < result.loss_trace.size(); ++i) {
        out << i << "," << format_double(result.loss_trace[i]) << "\n";
      }
    }
    std::cout << "final_loss " << format_double(result.loss_trace.back()) << "\n";
    const segloss::MetricReport metrics = segloss::metric_report(
        segloss::confusion(result.final_p, truth, 0.5));
    std::cout << "hard_dice "
              << (metrics.dice ? format_double(*metrics.dice) : "undefined")
              << "\n";
  } catch (const segloss::Error& e) {
    std::cerr << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}

struct DtArgs {
  std::string in;
  std::string out;
  std::string of = "region";
};

int run_dt(const DtArgs& args) {
  const std::string ext = fs::path(args.out).extension().string();
  if (ext != ".csv" && ext != ".slf") {
    std::cerr << "--out must end in .csv or .slf\n";
    return kExitUsage;
  }
  if (args.of != "region" && args.of != "boundary") {
    std::cerr << "--of must be region or boundary\n";
    return kExitUsage;
  }
  try {
    segloss::MaskField mask = segloss::read_pgm(fs::path(args.in));
    if (args.of == "boundary") {
      mask = segloss::extract_boundary(mask);
    }
    const segloss::DistanceField dist = segloss::edt_exact(mask);
    segloss::write_float_grid(dist.height, dist.width, dist.values,
                              fs::path(args.out));
  } catch (const segloss::Error& e) {
    std::cerr << e.what() << "\n";
    return e.code() == segloss::ErrorCode::IoError ? kExitUsage : kExitRuntime;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "segloss: semantic-segmentation loss functions, metrics and distance "
      "transforms over binary probability fields"};
  app.require_subcommand(1);

  EvalArgs eval_args;
  CLI::App* eval_cmd = app.add_subcommand(
      "eval", "Evaluate losses and metrics over prediction/truth pairs");
  eval_cmd->add_option("--pred", eval_args.pred,
                       "Prediction file or directory (.pgm, .csv, .slf)")
      ->required();
  eval_cmd->add_option("--truth", eval_args.truth,
                       "Ground-truth file or directory")
      ->required();
  eval_cmd->add_option(
      "--losses", eval_args.losses,
      "Loss specs, e.g. dice bce tversky:alpha=0.3,beta=0.7 "
      "(default: all 14 with default parameters)")
      ->expected(-1);
  eval_cmd->add_option("--threshold", eval_args.threshold,
                       "Binarization threshold for metrics (default 0.5)");
  eval_cmd->add_option("--out", eval_args.out,
                       "Report path (default: stdout)");

  GradcheckArgs gradcheck_args;
  CLI::App* gradcheck_cmd = app.add_subcommand(
      "gradcheck",
      "Compare analytic gradients against the central-difference oracle");
  gradcheck_cmd->add_option("--loss", gradcheck_args.loss, "Loss spec to check");
  gradcheck_cmd->add_flag("--all", gradcheck_args.all, "Check every loss");
  gradcheck_cmd->add_option("--size", gradcheck_args.size,
                            "Field size as <H>x<W> (default 8x8)");
  gradcheck_cmd->add_option("--seeds", gradcheck_args.seeds,
                            "Number of random pairs (default 20)");
  gradcheck_cmd->add_option("--tol", gradcheck_args.tol,
                            "Max relative error to pass (default 1e-4)");

  FitArgs fit_args;
  CLI::App* fit_cmd = app.add_subcommand(
      "fit", "Gradient-descent fit of a logit field toward a mask");
  fit_cmd->add_option("--truth", fit_args.truth, "Target mask file")->required();
  fit_cmd->add_option("--loss", fit_args.loss, "Loss spec to optimize")
      ->required();
  fit_cmd->add_option("--steps", fit_args.steps, "Step count (default 500)");
  fit_cmd->add_option("--lr", fit_args.lr, "Learning rate (default 1.0)");
  fit_cmd->add_option("--seed", fit_args.seed, "RNG seed (default 7)");
  fit_cmd->add_option("--trace", fit_args.trace,
                      "Optional CSV of per-step loss values");

  DtArgs dt_args;
  CLI::App* dt_cmd = app.add_subcommand(
      "dt", "Exact Euclidean distance transform of a PGM mask");
  dt_cmd->add_option("--in", dt_args.in, "Input PGM mask")->required();
  dt_cmd->add_option("--out", dt_args.out, "Output float grid (.csv or .slf)")
      ->required();
  dt_cmd->add_option("--of", dt_args.of,
                     "Distance to the mask region or to its boundary "
                     "(region|boundary, default region)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (gradcheck_cmd->parsed()) {
    if (gradcheck_args.all == !gradcheck_args.loss.empty()) {
      std::cerr << "gradcheck needs exactly one of --loss or --all\n";
      return kExitUsage;
    }
    return run_gradcheck(gradcheck_args);
  }
  if (eval_cmd->parsed()) return run_eval(eval_args);
  if (fit_cmd->parsed()) return run_fit(fit_args);
  if (dt_cmd->parsed()) return run_dt(dt_args);
  return kExitUsage;
}
