#include "moplms/cli.hpp"

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "moplms/baselines.hpp"
#include "moplms/csv.hpp"
#include "moplms/detail/format.hpp"
#include "moplms/experiments.hpp"
#include "moplms/landmark.hpp"
#include "moplms/model_io.hpp"
#include "moplms/prox.hpp"

namespace moplms {
namespace {

namespace fs = std::filesystem;
using detail::format_real;

// Removes everything written so far unless the command completed and called
// commit(), so failed invocations leave no partial artifacts behind.
class ArtifactGuard {
 public:
  ArtifactGuard() = default;
  ArtifactGuard(const ArtifactGuard&) = delete;
  ArtifactGuard& operator=(const ArtifactGuard&) = delete;
  ~ArtifactGuard() {
    if (committed_) return;
    for (const std::string& path : paths_) {
      std::error_code ec;
      fs::remove(path, ec);
    }
  }

  // Call immediately before writing the file.
  void track(const std::string& path) { paths_.push_back(path); }
  void commit() { committed_ = true; }

 private:
  std::vector<std::string> paths_;
  bool committed_ = false;
};

Task parse_task(const std::string& name) { return task_from_name(name); }

void write_text_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open '" + path + "' for writing");
  }
  out << body;
  if (!out.flush()) {
    throw std::runtime_error("write to '" + path + "' failed");
  }
}

// ---------------------------------------------------------------------------
// synth

struct SynthArgs {
  std::string task = "regression";
  std::size_t k = 0, d = 0, s = 0, n_train = 0, n_test = 0;
  double sigma_landmark = 0.1, sigma_dependent = 0.1;
  double within_row_density = 0.1;
  std::uint64_t seed = 0;
  std::string out;
};

SyntheticSpec to_spec(const SynthArgs& args) {
  SyntheticSpec spec;
  spec.k = args.k;
  spec.d = args.d;
  spec.s = args.s;
  spec.n_train = args.n_train;
  spec.n_test = args.n_test;
  spec.sigma_landmark = args.sigma_landmark;
  spec.sigma_dependent = args.sigma_dependent;
  spec.within_row_density = args.within_row_density;
  spec.seed = args.seed;
  return spec;
}

std::string planted_document(const SyntheticSpec& spec, Task task,
                             const PlantedTruth& planted) {
  std::string body;
  body += "{\"schema_version\":1,\"document\":\"planted_truth\"";
  body += ",\"task\":\"" + task_name(task) + '"';
  body += ",\"k\":" + std::to_string(spec.k);
  body += ",\"d\":" + std::to_string(spec.d);
  body += ",\"s\":" + std::to_string(spec.s);
  body += ",\"n_train\":" + std::to_string(spec.n_train);
  body += ",\"n_test\":" + std::to_string(spec.n_test);
  body += ",\"sigma_landmark\":" + format_real(spec.sigma_landmark);
  body += ",\"sigma_dependent\":" + format_real(spec.sigma_dependent);
  body += ",\"within_row_density\":" + format_real(spec.within_row_density);
  body += ",\"seed\":" + std::to_string(spec.seed);
  body += ",\"l_star\":[";
  for (std::size_t i = 0; i < planted.l_star.size(); ++i) {
    if (i != 0) body += ',';
    body += std::to_string(planted.l_star[i]);
  }
  body += "],";
  detail::append_matrix_json(body, "w_star", planted.w_star);
  body += ',';
  detail::append_matrix_json(body, "a_star", planted.a_star);
  body += "}\n";
  return body;
}

int cmd_synth(const SynthArgs& args) {
  const SyntheticSpec spec = to_spec(args);
  const Task task = parse_task(args.task);
  const SyntheticData data = task == Task::regression
                                 ? gen_synthetic_regression(spec)
                                 : gen_synthetic_classification(spec);

  fs::create_directories(args.out);
  ArtifactGuard guard;
  const auto emit = [&](const char* name, const Matrix& m) {
    const std::string path = (fs::path(args.out) / name).string();
    guard.track(path);
    write_csv(m, path);
  };
  emit("x_train.csv", data.train.x);
  emit("y_train.csv", data.train.y);
  emit("x_test.csv", data.test.x);
  emit("y_test.csv", data.test.y);
  const std::string planted_path = (fs::path(args.out) / "planted.json").string();
  guard.track(planted_path);
  write_text_file(planted_path, planted_document(spec, task, data.planted));
  guard.commit();

  std::cout << "wrote x_train.csv y_train.csv x_test.csv y_test.csv "
               "planted.json to "
            << args.out << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// fit

struct FitArgs {
  std::string x_path, y_path;
  std::string task = "regression";
  std::string method = "moplms";
  double lambda1 = 0.1, lambda2 = 0.0, lambda_stage2 = 1e-3;
  double lambda = 1e-3;  // baseline penalty
  std::string out;
};

int cmd_fit(const FitArgs& args) {
  const Dataset dataset(read_csv(args.x_path), read_csv(args.y_path),
                        parse_task(args.task));
  ArtifactGuard guard;
  guard.track(args.out);

  std::cout << "method: " << args.method << "\n";
  if (args.method == "moplms") {
    CoefficientEstimate stage1;
    const LandmarkModel model =
        fit_landmark_model(dataset, args.lambda1, args.lambda2,
                           args.lambda_stage2, SolverConfig{}, &stage1);
    save_model(args.out, model);
    std::cout << "landmarks: " << model.landmarks.size() << "\n"
              << "objective: " << format_real(stage1.objective_trace.back())
              << "\n"
              << "iterations: " << stage1.iterations << "\n";
  } else if (args.method == "one-vs-all") {
    save_model(args.out, fit_one_vs_all(dataset, args.lambda));
  } else if (args.method == "group-lasso") {
    const BaselineModel model = fit_group_lasso(dataset, args.lambda);
    std::size_t nonzero_rows = 0;
    for (double norm : row_l2_norms(model.b)) {
      if (norm != 0.0) ++nonzero_rows;
    }
    save_model(args.out, model);
    std::cout << "nonzero rows: " << nonzero_rows << "\n";
  } else {
    const BaselineModel model = fit_low_rank(dataset, args.lambda);
    save_model(args.out, model);
    std::cout << "rank: " << model.rank << "\n";
  }
  guard.commit();
  return 0;
}

// ---------------------------------------------------------------------------
// predict

struct PredictArgs {
  std::string model_path, x_path, out;
  bool propagate_probabilities = false;
};

int cmd_predict(const PredictArgs& args) {
  const AnyModel model = load_any_model(args.model_path);
  const Matrix x = read_csv(args.x_path);

  Matrix y_hat;
  if (std::holds_alternative<LandmarkModel>(model)) {
    const LandmarkModel& landmark = std::get<LandmarkModel>(model);
    if (args.propagate_probabilities && landmark.task != Task::classification) {
      throw std::runtime_error(
          "--propagate-probabilities only applies to classification models");
    }
    PredictOptions options;
    options.propagate_probabilities = args.propagate_probabilities;
    y_hat = predict(landmark, x, options);
  } else {
    if (args.propagate_probabilities) {
      throw std::runtime_error(
          "--propagate-probabilities only applies to the moplms method");
    }
    y_hat = predict_baseline(std::get<BaselineModel>(model), x);
  }

  ArtifactGuard guard;
  guard.track(args.out);
  write_csv(y_hat, args.out);
  guard.commit();
  return 0;
}

// ---------------------------------------------------------------------------
// eval

struct EvalArgs {
  std::string truth_path, pred_path;
  std::string task = "regression";
  std::string out;  // optional CSV copy
};

int cmd_eval(const EvalArgs& args) {
  const Matrix truth = read_csv(args.truth_path);
  const Matrix pred = read_csv(args.pred_path);

  std::string csv = "metric,value\n";
  if (parse_task(args.task) == Task::regression) {
    const double value = mse(truth, pred);
    std::cout << "mse: " << format_real(value) << "\n";
    csv += "mse," + format_real(value) + "\n";
  } else {
    const double hamming = hamming_loss(truth, pred);
    const double f1 = f1_score(truth, pred);
    std::cout << "hamming: " << format_real(hamming) << "\n"
              << "f1: " << format_real(f1) << "\n";
    csv += "hamming," + format_real(hamming) + "\n";
    csv += "f1," + format_real(f1) + "\n";
  }
  std::cout << csv;

  if (!args.out.empty()) {
    ArtifactGuard guard;
    guard.track(args.out);
    write_text_file(args.out, csv);
    guard.commit();
  }
  return 0;
}

// ---------------------------------------------------------------------------
// cv

struct CvArgs {
  std::string x_path, y_path;
  std::string task = "regression";
  std::size_t folds = 5;
  std::vector<double> lambda1_grid;
  std::vector<double> lambda2_grid = {0.0};
  std::vector<double> lambda_stage2_grid = {1e-3};
  std::string out;
};

int cmd_cv(const CvArgs& args) {
  const Dataset dataset(read_csv(args.x_path), read_csv(args.y_path),
                        parse_task(args.task));

  std::vector<CvPoint> grid;
  grid.reserve(args.lambda1_grid.size() * args.lambda2_grid.size() *
               args.lambda_stage2_grid.size());
  for (double l1 : args.lambda1_grid) {
    for (double l2 : args.lambda2_grid) {
      for (double ls : args.lambda_stage2_grid) {
        grid.push_back(CvPoint{l1, l2, ls});
      }
    }
  }

  const CvResult result = cross_validate(dataset, grid, args.folds);

  std::string csv = "lambda1,lambda2,lambda_stage2,mean_loss\n";
  for (const CvCell& cell : result.cells) {
    csv += format_real(cell.point.lambda1) + ',' +
           format_real(cell.point.lambda2) + ',' +
           format_real(cell.point.lambda_stage2) + ',';
    csv += std::isinf(cell.mean_loss) ? "inf" : format_real(cell.mean_loss);
    csv += '\n';
  }
  ArtifactGuard guard;
  guard.track(args.out);
  write_text_file(args.out, csv);
  guard.commit();

  std::cout << "best lambda1: " << format_real(result.best.lambda1) << "\n"
            << "best lambda2: " << format_real(result.best.lambda2) << "\n"
            << "best lambda_stage2: " << format_real(result.best.lambda_stage2)
            << "\n"
            << "best mean loss: " << format_real(result.best_loss) << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// recover

struct RecoverArgs {
  std::size_t k = 0, s = 0;
  std::vector<std::size_t> n_grid;
  std::size_t trials = 20;
  double sigma = 0.1;
  std::uint64_t seed = 0;
  double lambda_scale = kRecoveryLambdaScale;
  std::string out;
};

int cmd_recover(const RecoverArgs& args) {
  const RecoveryResult result = recovery_experiment(
      args.k, args.s, args.n_grid, args.trials, args.sigma, args.seed,
      args.lambda_scale);

  std::string csv = "n,recovery_rate\n";
  for (std::size_t i = 0; i < result.n_grid.size(); ++i) {
    csv += std::to_string(result.n_grid[i]) + ',' +
           format_real(result.recovery_rate[i]) + '\n';
  }
  ArtifactGuard guard;
  guard.track(args.out);
  write_text_file(args.out, csv);
  guard.commit();

  std::cout << "phi_star: " << format_real(result.phi_star) << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// bench

struct BenchArgs {
  std::string task = "regression";
  std::size_t k = 100, d = 100, s = 10;
  std::vector<std::size_t> n_grid;
  std::size_t n_test = 200;
  std::size_t seeds = 10;
  std::uint64_t seed = 0;
  double sigma_landmark = 0.1, sigma_dependent = 0.1;
  double within_row_density = 0.1;
  std::string out;
};

// Penalties for the sweep follow fixed fractions of each method's kill level
// (the smallest penalty that zeroes the fit), so every grid point is tuned to
// its own data scale without a nested search.
constexpr double kBenchKillFraction = 0.25;
constexpr double kBenchRidgePenalty = 1e-3;
constexpr double kBenchStage2Penalty = 1e-3;

SolverConfig bench_low_rank_config() {
  SolverConfig config;
  config.tol = 1e-6;      // singular value thresholding dominates runtime
  config.max_iter = 300;  // enough for desk-scale spectra to settle
  return config;
}

double bench_moplms_mse(const Dataset& train, const Dataset& test,
                        double stage2_penalty) {
  const std::vector<double> means = column_means(train.y);
  const Matrix centered = center_columns(train.y, means);
  const double lambda1 =
      kBenchKillFraction * kill_lambda(centered, centered, 0.0);
  const LandmarkModel model =
      fit_landmark_model(train, lambda1, 0.0, stage2_penalty);
  return mse(test.y, predict(model, test.x));
}

double bench_group_lasso_mse(const Dataset& train, const Dataset& test) {
  const Matrix xc = center_columns(train.x, column_means(train.x));
  const Matrix yc = center_columns(train.y, column_means(train.y));
  const double lambda = kBenchKillFraction * kill_lambda(xc, yc, 0.0);
  const BaselineModel model = fit_group_lasso(train, lambda);
  return mse(test.y, predict_baseline(model, test.x));
}

double bench_low_rank_mse(const Dataset& train, const Dataset& test) {
  const Matrix xc = center_columns(train.x, column_means(train.x));
  const Matrix yc = center_columns(train.y, column_means(train.y));
  const Matrix gradient_at_zero = scale(transpose_matmul(xc, yc), 2.0);
  const double lambda = kBenchKillFraction *
                        std::sqrt(largest_sq_singular_value(gradient_at_zero));
  const BaselineModel model =
      fit_low_rank(train, lambda, bench_low_rank_config());
  return mse(test.y, predict_baseline(model, test.x));
}

int cmd_bench(const BenchArgs& args) {
  std::string csv = "method,n,seed,metric,value\n";
  const auto record = [&csv](const std::string& method, std::size_t n,
                             std::uint64_t seed, const std::string& metric,
                             double value) {
    csv += method + ',' + std::to_string(n) + ',' + std::to_string(seed) +
           ',' + metric + ',' + format_real(value) + '\n';
  };

  for (std::size_t n : args.n_grid) {
    for (std::size_t seed_index = 0; seed_index < args.seeds; ++seed_index) {
      const std::uint64_t seed = args.seed + seed_index;
      SyntheticSpec spec;
      spec.k = args.k;
      spec.d = args.task == "ar1" ? args.k : args.d;
      spec.s = args.s;
      spec.n_train = n;
      spec.n_test = args.n_test;
      spec.sigma_landmark = args.sigma_landmark;
      spec.sigma_dependent = args.sigma_dependent;
      spec.within_row_density = args.within_row_density;
      spec.seed = seed;

      if (args.task == "classification") {
        const SyntheticData data = gen_synthetic_classification(spec);
        const double lambda1 =
            kBenchKillFraction * kill_lambda(data.train.y, data.train.y, 0.0);
        const LandmarkModel moplms = fit_landmark_model(
            data.train, lambda1, 0.0, kBenchStage2Penalty);
        const Matrix moplms_pred = predict(moplms, data.test.x);
        record("moplms", n, seed, "hamming",
               hamming_loss(data.test.y, moplms_pred));
        record("moplms", n, seed, "f1", f1_score(data.test.y, moplms_pred));

        const BaselineModel ova = fit_one_vs_all(data.train, kBenchRidgePenalty);
        const Matrix ova_pred = predict_baseline(ova, data.test.x);
        record("one_vs_all", n, seed, "hamming",
               hamming_loss(data.test.y, ova_pred));
        record("one_vs_all", n, seed, "f1", f1_score(data.test.y, ova_pred));
        continue;
      }

      const auto [train, test] = [&]() -> std::pair<Dataset, Dataset> {
        if (args.task == "ar1") {
          const Matrix b_star = gen_stable_ar_matrix(args.s, 0.8, seed);
          const Dataset series = gen_ar1_returns(spec, b_star, n + args.n_test);
          std::vector<std::size_t> train_rows(n);
          std::iota(train_rows.begin(), train_rows.end(), std::size_t{0});
          std::vector<std::size_t> test_rows(args.n_test);
          std::iota(test_rows.begin(), test_rows.end(), n);
          return {series.take_rows(train_rows), series.take_rows(test_rows)};
        }
        SyntheticData data = gen_synthetic_regression(spec);
        return {std::move(data.train), std::move(data.test)};
      }();

      // The lagged-return design is nearly collinear (dependent returns are
      // planted combinations of the landmark returns), so the stage-2 ridge
      // needs real strength there to keep the composed predictions bounded.
      const double stage2_penalty =
          args.task == "ar1" ? 1.0 : kBenchStage2Penalty;
      record("moplms", n, seed, "mse",
             bench_moplms_mse(train, test, stage2_penalty));
      const BaselineModel ova = fit_one_vs_all(train, kBenchRidgePenalty);
      record("one_vs_all", n, seed, "mse",
             mse(test.y, predict_baseline(ova, test.x)));
      record("group_lasso", n, seed, "mse", bench_group_lasso_mse(train, test));
      record("low_rank", n, seed, "mse", bench_low_rank_mse(train, test));
    }
  }

  ArtifactGuard guard;
  guard.track(args.out);
  write_text_file(args.out, csv);
  guard.commit();

  std::cout << "mlcs: not implemented (out of scope)\n"
            << "ml-cca: not implemented (out of scope)\n"
            << "wrote " << args.out << "\n";
  return 0;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"multi-output prediction by landmark output selection"};
  app.require_subcommand(1);

  SynthArgs synth_args;
  CLI::App* synth = app.add_subcommand(
      "synth", "generate a planted synthetic train/test dataset");
  synth->add_option("--task", synth_args.task, "regression | classification")
      ->check(CLI::IsMember({"regression", "classification"}));
  synth->add_option("--k", synth_args.k, "output dimension")
      ->required()
      ->check(CLI::PositiveNumber);
  synth->add_option("--d", synth_args.d, "input dimension")
      ->required()
      ->check(CLI::PositiveNumber);
  synth->add_option("--s", synth_args.s, "landmark count")
      ->required()
      ->check(CLI::PositiveNumber);
  synth->add_option("--n-train", synth_args.n_train, "training samples")
      ->required()
      ->check(CLI::PositiveNumber);
  synth->add_option("--n-test", synth_args.n_test, "test samples")
      ->required()
      ->check(CLI::PositiveNumber);
  synth->add_option("--sigma-landmark", synth_args.sigma_landmark,
                    "landmark noise standard deviation (default 0.1)");
  synth->add_option("--sigma-dependent", synth_args.sigma_dependent,
                    "dependent-output noise standard deviation (default 0.1)");
  synth->add_option("--within-row-density", synth_args.within_row_density,
                    "fraction of dependent outputs each landmark drives "
                    "(default 0.1)");
  synth->add_option("--seed", synth_args.seed, "generator seed (default 0)");
  synth->add_option("--out", synth_args.out, "output directory")->required();

  FitArgs fit_args;
  CLI::App* fit = app.add_subcommand("fit", "fit a model to X/Y CSV data");
  fit->add_option("--x", fit_args.x_path, "input CSV")->required();
  fit->add_option("--y", fit_args.y_path, "output CSV")->required();
  fit->add_option("--task", fit_args.task, "regression | classification")
      ->check(CLI::IsMember({"regression", "classification"}));
  fit->add_option("--method", fit_args.method,
                  "moplms | one-vs-all | group-lasso | low-rank")
      ->check(CLI::IsMember({"moplms", "one-vs-all", "group-lasso",
                             "low-rank"}));
  fit->add_option("--lambda1", fit_args.lambda1,
                  "row-sparsity penalty (moplms, default 0.1)")
      ->check(CLI::NonNegativeNumber);
  fit->add_option("--lambda2", fit_args.lambda2,
                  "within-row penalty (moplms, default 0)")
      ->check(CLI::NonNegativeNumber);
  fit->add_option("--lambda-stage2", fit_args.lambda_stage2,
                  "input-model penalty (moplms, default 1e-3)")
      ->check(CLI::PositiveNumber);
  fit->add_option("--lambda", fit_args.lambda,
                  "baseline penalty (default 1e-3)")
      ->check(CLI::NonNegativeNumber);
  fit->add_option("--out", fit_args.out, "model document path")->required();

  PredictArgs predict_args;
  CLI::App* predict_cmd =
      app.add_subcommand("predict", "predict outputs for X with a saved model");
  predict_cmd->add_option("--model", predict_args.model_path, "model document")
      ->required();
  predict_cmd->add_option("--x", predict_args.x_path, "input CSV")->required();
  predict_cmd->add_option("--out", predict_args.out, "prediction CSV")
      ->required();
  predict_cmd->add_flag("--propagate-probabilities",
                        predict_args.propagate_probabilities,
                        "route stage-2 probabilities instead of hard labels "
                        "through the composition (classification only)");

  EvalArgs eval_args;
  CLI::App* eval_cmd =
      app.add_subcommand("eval", "score predictions against the truth");
  eval_cmd->add_option("--truth", eval_args.truth_path, "truth CSV")
      ->required();
  eval_cmd->add_option("--pred", eval_args.pred_path, "prediction CSV")
      ->required();
  eval_cmd->add_option("--task", eval_args.task, "regression | classification")
      ->check(CLI::IsMember({"regression", "classification"}));
  eval_cmd->add_option("--out", eval_args.out, "also write the CSV report here");

  CvArgs cv_args;
  CLI::App* cv_cmd = app.add_subcommand(
      "cv", "grid-search hyperparameters by k-fold cross-validation");
  cv_cmd->add_option("--x", cv_args.x_path, "input CSV")->required();
  cv_cmd->add_option("--y", cv_args.y_path, "output CSV")->required();
  cv_cmd->add_option("--task", cv_args.task, "regression | classification")
      ->check(CLI::IsMember({"regression", "classification"}));
  cv_cmd->add_option("--folds", cv_args.folds, "fold count (default 5)")
      ->check(CLI::Range(std::size_t{2}, std::numeric_limits<std::size_t>::max()));
  cv_cmd->add_option("--lambda1-grid", cv_args.lambda1_grid,
                     "comma-separated lambda1 values")
      ->required()
      ->delimiter(',');
  cv_cmd->add_option("--lambda2-grid", cv_args.lambda2_grid,
                     "comma-separated lambda2 values (default 0)")
      ->delimiter(',');
  cv_cmd->add_option("--lambda-stage2-grid", cv_args.lambda_stage2_grid,
                     "comma-separated stage-2 penalties (default 1e-3)")
      ->delimiter(',');
  cv_cmd->add_option("--out", cv_args.out, "per-cell score CSV")->required();

  RecoverArgs recover_args;
  CLI::App* recover_cmd = app.add_subcommand(
      "recover", "empirical exact-support-recovery curve over sample sizes");
  recover_cmd->add_option("--k", recover_args.k, "output dimension")
      ->required()
      ->check(CLI::PositiveNumber);
  recover_cmd->add_option("--s", recover_args.s, "landmark count")
      ->required()
      ->check(CLI::PositiveNumber);
  recover_cmd
      ->add_option("--n-grid", recover_args.n_grid,
                   "comma-separated ascending sample counts")
      ->required()
      ->delimiter(',');
  recover_cmd->add_option("--trials", recover_args.trials,
                          "trials per grid point (default 20)")
      ->check(CLI::PositiveNumber);
  recover_cmd->add_option("--sigma", recover_args.sigma,
                          "dependent-output noise (default 0.1)")
      ->check(CLI::NonNegativeNumber);
  recover_cmd->add_option("--seed", recover_args.seed, "base seed (default 0)");
  recover_cmd->add_option("--lambda-scale", recover_args.lambda_scale,
                          "multiplier on the sqrt(n log k) penalty rule")
      ->check(CLI::PositiveNumber);
  recover_cmd->add_option("--out", recover_args.out, "rate table CSV")
      ->required();

  BenchArgs bench_args;
  CLI::App* bench_cmd = app.add_subcommand(
      "bench", "sample-size sweep of moplms against the baselines");
  bench_cmd->add_option("--task", bench_args.task,
                        "regression | classification | ar1")
      ->check(CLI::IsMember({"regression", "classification", "ar1"}));
  bench_cmd->add_option("--k", bench_args.k, "output dimension (default 100)")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--d", bench_args.d,
                        "input dimension (default 100; ar1 uses k)")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--s", bench_args.s, "landmark count (default 10)")
      ->check(CLI::PositiveNumber);
  bench_cmd
      ->add_option("--n-grid", bench_args.n_grid,
                   "comma-separated training sample counts")
      ->required()
      ->delimiter(',');
  bench_cmd->add_option("--n-test", bench_args.n_test,
                        "test samples per point (default 200)")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--seeds", bench_args.seeds,
                        "replicate count (default 10)")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--seed", bench_args.seed, "base seed (default 0)");
  bench_cmd->add_option("--sigma-landmark", bench_args.sigma_landmark,
                        "landmark noise (default 0.1)")
      ->check(CLI::NonNegativeNumber);
  bench_cmd->add_option("--sigma-dependent", bench_args.sigma_dependent,
                        "dependent noise (default 0.1)")
      ->check(CLI::NonNegativeNumber);
  bench_cmd->add_option("--within-row-density", bench_args.within_row_density,
                        "planted row density (default 0.1)");
  bench_cmd->add_option("--out", bench_args.out, "results table CSV")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    return app.exit(err);
  }

  try {
    if (synth->parsed()) return cmd_synth(synth_args);
    if (fit->parsed()) return cmd_fit(fit_args);
    if (predict_cmd->parsed()) return cmd_predict(predict_args);
    if (eval_cmd->parsed()) return cmd_eval(eval_args);
    if (cv_cmd->parsed()) return cmd_cv(cv_args);
    if (recover_cmd->parsed()) return cmd_recover(recover_args);
    if (bench_cmd->parsed()) return cmd_bench(bench_args);
  } catch (const std::exception& err) {
    std::cerr << "moplms: " << err.what() << "\n";
    return 1;
  }
  std::cerr << "moplms: no subcommand given\n";
  return 1;
}

}  // namespace moplms
