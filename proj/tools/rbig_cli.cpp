// rbig: benchmark harness, one-off estimation and model persistence.
//
//   rbig bench    --measure tc --family gaussian --dims 3,10 --trials 5 --out report.json
//   rbig estimate --measure mi --x a.csv --y b.csv
//   rbig model save --x data.csv --out model.json
//   rbig model load --model model.json [--x data.csv --out gaussianized.csv]
//
// Exit status: 0 success, 2 usage error, 1 runtime error.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rbig/benchmark.hpp"
#include "rbig/csv.hpp"
#include "rbig/errors.hpp"
#include "rbig/log.hpp"
#include "rbig/model_io.hpp"
#include "rbig/version.hpp"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct RbigFlags {
  std::optional<int> max_layers;
  std::string rotation;
  std::string entropy_est;
  std::uint64_t seed = 0;

  void add_to(CLI::App* app) {
    app->add_option("--seed", seed, "master seed")->capture_default_str();
    app->add_option("--max-layers", max_layers, "RBIG layer cap (default 100)");
    app->add_option("--rotation", rotation, "random_orthogonal | pca");
    app->add_option("--entropy-est", entropy_est, "histogram_mm | spacing");
  }

  rbig::RbigConfig config() const {
    rbig::RbigConfig c;
    if (max_layers) c.max_layers = *max_layers;
    if (!rotation.empty()) c.rotation = rbig::parse_rotation_kind(rotation);
    if (!entropy_est.empty()) c.entropy.estimator = rbig::parse_entropy_estimator(entropy_est);
    c.rng_seed = seed;
    c.validate();
    return c;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rotation-based iterative Gaussianization: information measures and benchmarks"};
  app.set_version_flag("--version", rbig::kToolVersion);
  app.require_subcommand(1);
  bool quiet = false;
  app.add_flag("-q,--quiet", quiet, "suppress warnings");

  // bench
  auto* bench = app.add_subcommand("bench", "run a synthetic ground-truth benchmark");
  std::string b_measure = "tc", b_family = "gaussian", b_format = "json", b_out = "-";
  std::vector<int> b_dims{3, 10, 50, 100};
  std::vector<long> b_samples{316, 1000, 3162, 10000};  // log-spaced up to 1e4
  std::vector<std::string> b_estimators{"rbig"};
  int b_trials = 5;
  std::optional<double> b_param;
  bool b_no_timing = false;
  RbigFlags b_flags;
  bench->add_option("--measure", b_measure, "tc | h | kl | mi")->capture_default_str();
  bench->add_option("--family", b_family, "distribution family (see --help-families)")->capture_default_str();
  bench->add_option("--dims", b_dims, "comma-separated dimensions")->delimiter(',')->capture_default_str();
  bench->add_option("--samples", b_samples, "comma-separated sample sizes")->delimiter(',')->capture_default_str();
  bench->add_option("--trials", b_trials, "trials per cell")->capture_default_str();
  bench->add_option("--estimators", b_estimators, "rbig,expf,knn")->delimiter(',')->capture_default_str();
  bench->add_option("--param", b_param, "protocol parameter: nu, mu2, sigma2 or nu2");
  bench->add_option("--out", b_out, "output path, - for stdout")->capture_default_str();
  bench->add_option("--format", b_format, "json | csv")->capture_default_str();
  bench->add_flag("--no-timing", b_no_timing, "write wall_time as 0 for byte-reproducible reports");
  b_flags.add_to(bench);
  bool list_families = false;
  bench->add_flag("--help-families", list_families, "list supported measure/family pairs");

  // estimate
  auto* estimate = app.add_subcommand("estimate", "estimate a measure from CSV data");
  std::string e_measure, e_x, e_estimator = "rbig";
  std::optional<std::string> e_y;
  bool e_no_timing = false;
  RbigFlags e_flags;
  estimate->add_option("--measure", e_measure, "tc | h | kl | mi")->required();
  estimate->add_option("--x", e_x, "CSV file (rows = samples)")->required();
  estimate->add_option("--y", e_y, "second CSV file (kl: reference distribution; mi: second variable)");
  estimate->add_option("--estimator", e_estimator, "rbig | expf | knn")->capture_default_str();
  estimate->add_flag("--no-timing", e_no_timing, "write wall_time as 0");
  e_flags.add_to(estimate);

  // model
  auto* model = app.add_subcommand("model", "save or load a fitted rbig-model/1 document");
  model->require_subcommand(1);
  auto* save = model->add_subcommand("save", "fit RBIG on a CSV file and write the model");
  std::string s_x, s_out;
  RbigFlags s_flags;
  save->add_option("--x", s_x, "CSV training data")->required();
  save->add_option("--out", s_out, "model path")->required();
  s_flags.add_to(save);
  auto* load = model->add_subcommand("load", "validate a model; optionally transform data with it");
  std::string l_model, l_x, l_out = "-";
  bool l_inverse = false;
  load->add_option("--model", l_model, "model path")->required();
  load->add_option("--x", l_x, "CSV data to transform");
  load->add_option("--out", l_out, "output CSV, - for stdout")->capture_default_str();
  load->add_flag("--inverse", l_inverse, "apply the inverse transform");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }
  rbig::set_warnings_enabled(!quiet);

  try {
    if (*bench) {
      if (list_families) {
        std::cout << rbig::supported_pairs() << "\n";
        return 0;
      }
      rbig::BenchmarkRequest req;
      req.measure = rbig::parse_measure(b_measure);
      req.family = rbig::resolve_family(req.measure, b_family);
      req.dims = b_dims;
      req.samples = b_samples;
      req.trials = b_trials;
      req.estimators.clear();
      for (const auto& e : b_estimators) req.estimators.push_back(rbig::parse_estimator_id(e));
      req.seed = b_flags.seed;
      req.param = b_param;
      req.config = b_flags.config();
      const auto format = rbig::parse_report_format(b_format);
      const auto reports = rbig::run_benchmark(req);
      rbig::emit_report(reports, format, b_out, {.include_timing = !b_no_timing});
      return 0;
    }
    if (*estimate) {
      const auto measure = rbig::parse_measure(e_measure);
      const auto id = rbig::parse_estimator_id(e_estimator);
      const auto rec = rbig::estimate_from_files(measure, e_x, e_y, id, e_flags.config());
      std::cout << rbig::estimate_to_json(rec, {.include_timing = !e_no_timing});
      return 0;
    }
    if (*save) {
      const auto table = rbig::read_csv_file(s_x);
      const auto fitted = rbig::fit(table.data, s_flags.config());
      rbig::save_model(fitted, s_out);
      std::cout << "{\"layers\": " << fitted.layers.size() << ", \"total_correlation\": " << fitted.total_correlation()
                << ", \"stop_reason\": \"" << rbig::to_string(fitted.stop_reason) << "\"}\n";
      return 0;
    }
    if (*load) {
      const auto loaded = rbig::load_model(l_model);
      if (l_x.empty()) {
        std::cout << "{\"format\": \"" << rbig::kModelFormat << "\", \"dims\": " << loaded.dims
                  << ", \"layers\": " << loaded.layers.size() << ", \"total_correlation\": "
                  << loaded.total_correlation() << "}\n";
        return 0;
      }
      const auto table = rbig::read_csv_file(l_x);
      const auto out = l_inverse ? rbig::inverse_transform(loaded, table.data) : rbig::transform(loaded, table.data);
      if (l_out == "-") {
        rbig::write_csv(std::cout, out, table.header);
      } else {
        rbig::write_csv_file(l_out, out, table.header);
      }
      return 0;
    }
  } catch (const rbig::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const rbig::DomainError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
