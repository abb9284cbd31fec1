// Command-line front end: fit / path / cv / predict / simulate.
//
// Exit codes: 0 success, 1 data or convergence error, 2 usage error.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "splam/splam.hpp"

namespace {

using nlohmann::ordered_json;
using namespace splam;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

struct CommonOpts {
  std::string input;
  std::string format = "auto";
  std::string loss = "quadratic";
  std::string solver = "auto";
  double tol = 1e-7;
  int max_sweeps = 10000;
  int knots = 10;
  bool linear_basis = false;
  int workers = hardware_workers();
  std::uint64_t seed = 1;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool needs_input = true) {
  if (needs_input) {
    cmd->add_option("--input", o.input, "input data file")->required();
    cmd->add_option("--format", o.format, "csv | svmlight | auto (default: by extension)")
        ->check(CLI::IsMember({"csv", "svmlight", "auto"}));
    cmd->add_option("--loss", o.loss, "quadratic | logistic")
        ->check(CLI::IsMember({"quadratic", "logistic"}));
    cmd->add_option("--knots", o.knots, "spline knots per feature (block width 3 + knots)");
    cmd->add_flag("--linear-basis", o.linear_basis, "use width-1 linear blocks (Lasso basis)");
  }
  cmd->add_option("--solver", o.solver, "auto | ista | fista | bcgd | bcd")
      ->check(CLI::IsMember({"auto", "ista", "fista", "bcgd", "bcd"}));
  cmd->add_option("--tol", o.tol, "relative objective tolerance");
  cmd->add_option("--max-sweeps", o.max_sweeps, "sweep budget per fit");
  cmd->add_option("--workers", o.workers, "parallel workers (default: cores)");
  cmd->add_option("--seed", o.seed, "random seed");
}

LossKind parse_loss(const std::string& s) {
  return s == "logistic" ? LossKind::logistic : LossKind::quadratic;
}

SolverConfig make_solver_config(const CommonOpts& o, LossKind loss) {
  SolverConfig cfg;
  cfg.algorithm = o.solver == "auto" ? default_algorithm(loss)
                  : o.solver == "ista" ? Algorithm::ista
                  : o.solver == "fista" ? Algorithm::fista
                  : o.solver == "bcgd" ? Algorithm::bcgd
                                        : Algorithm::bcd;
  cfg.tolerance = o.tol;
  cfg.max_sweeps = o.max_sweeps;
  return cfg;
}

BasisConfig make_basis(const CommonOpts& o) {
  BasisConfig b;
  b.knots = o.knots;
  b.linear_only = o.linear_basis;
  return b;
}

LoadedData load_input(const CommonOpts& o) {
  const DataFormat f = o.format == "csv"        ? DataFormat::csv
                       : o.format == "svmlight" ? DataFormat::svmlight
                                                : guess_format(o.input);
  LoadedData data = read_data(o.input, f);
  if (parse_loss(o.loss) == LossKind::logistic) {
    // Accept 0/1 labels as a convenience; the core requires exactly +-1.
    for (Eigen::Index i = 0; i < data.data.y.size(); ++i) {
      if (data.data.y[i] == 0.0) data.data.y[i] = -1.0;
    }
  }
  return data;
}

std::vector<double> parse_grid(const std::string& csv, const char* what) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(std::stod(tok));
  }
  if (out.empty()) throw std::runtime_error(std::string("empty ") + what + " grid");
  return out;
}

double train_score(const Model& model, const Mat& x, const Vec& y, LossKind loss) {
  const Vec u = model.predict(x);
  return loss == LossKind::quadratic ? rmse(u, y) : misclass(u, y);
}

ordered_json status_counts(const std::vector<FeatureStatus>& status) {
  ordered_json j;
  int zero = 0, lin = 0, nonlin = 0;
  for (auto s : status) {
    if (s == FeatureStatus::zero) ++zero;
    if (s == FeatureStatus::linear) ++lin;
    if (s == FeatureStatus::nonlinear) ++nonlin;
  }
  j["support"] = lin + nonlin;
  j["linear"] = lin;
  j["nonlinear"] = nonlin;
  return j;
}

/// Deterministic train/validation row split used by `path`.
std::pair<std::vector<int>, std::vector<int>> split_validation(Eigen::Index n, double fraction,
                                                               std::uint64_t seed) {
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(seed);
  rng.shuffle(perm);
  auto n_val = static_cast<std::size_t>(std::lround(fraction * static_cast<double>(n)));
  n_val = std::min(n_val, perm.size() - 1);
  if (n_val == 0 && perm.size() > 1) n_val = 1;
  std::vector<int> val(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_val));
  std::vector<int> train(perm.begin() + static_cast<std::ptrdiff_t>(n_val), perm.end());
  return {std::move(train), std::move(val)};
}

// ---------------------------------------------------------------------------
// fit
// ---------------------------------------------------------------------------

int cmd_fit(const CommonOpts& o, double lambda, double alpha, const std::string& bundle_path) {
  const LossKind loss = parse_loss(o.loss);
  const LoadedData data = load_input(o);
  const BlockDesign design = build_block_design(data.data.X, make_basis(o));
  Problem prob(design.Q, loss, data.data.y);
  const SolverConfig cfg = make_solver_config(o, loss);
  const FitResult fr = fit(prob, PenaltyParams(lambda, alpha), cfg);
  const Model model = Model::from_fit(design, prob, fr, lambda, alpha);
  model.save(bundle_path);

  ordered_json line;
  line["command"] = "fit";
  line["n"] = data.data.y.size();
  line["p"] = design.n_features;
  line["loss"] = o.loss;
  line["lambda"] = lambda;
  line["alpha"] = alpha;
  line["solver"] = algorithm_name(cfg.algorithm);
  line[loss == LossKind::quadratic ? "train_rmse" : "train_error"] =
      train_score(model, data.data.X, data.data.y, loss);
  line["objective"] = fr.final_objective();
  line.update(status_counts(fr.status));
  line["sweeps"] = fr.sweeps;
  line["converged"] = fr.converged;
  line["bundle"] = bundle_path;
  std::cout << line.dump() << '\n';
  return fr.converged ? 0 : 1;
}

// ---------------------------------------------------------------------------
// path
// ---------------------------------------------------------------------------

SelectionRule parse_selection(const std::string& s) {
  return s == "min" ? SelectionRule::min_validation : SelectionRule::one_se;
}

int cmd_path(const CommonOpts& o, const std::vector<double>& alphas, int n_lambda,
             double lambda_min_ratio, double val_fraction, const std::string& selection,
             const std::string& csv_path, const std::string& bundle_path) {
  const LossKind loss = parse_loss(o.loss);
  const LoadedData data = load_input(o);
  const auto [train_idx, val_idx] = split_validation(data.data.y.size(), val_fraction, o.seed);
  const Mat x_train = take_rows(data.data.X, train_idx);
  const Vec y_train = take(data.data.y, train_idx);
  const BlockDesign design = build_block_design(x_train, make_basis(o));
  Problem prob(design.Q, loss, y_train);
  const SolverConfig cfg = make_solver_config(o, loss);
  const PathGrid grid =
      fit_path_grid(prob, alphas, design.transform(take_rows(data.data.X, val_idx)),
                    take(data.data.y, val_idx), n_lambda, lambda_min_ratio, cfg, o.workers,
                    parse_selection(selection));

  std::ofstream csv(csv_path);
  if (!csv) throw std::runtime_error("cannot write " + csv_path);
  csv << "alpha,lambda,objective,support,linear,nonlinear,val_score\n";
  for (const auto& path : grid.paths) {
    for (std::size_t i = 0; i < path.fits.size(); ++i) {
      const auto& fr = path.fits[i];
      const auto counts = status_counts(fr.status);
      csv << fmt(path.alpha) << ',' << fmt(path.lambdas[i]) << ','
          << fmt(fr.final_objective()) << ',' << counts["support"].get<int>() << ','
          << counts["linear"].get<int>() << ',' << counts["nonlinear"].get<int>() << ','
          << fmt(grid.scores[static_cast<std::size_t>(&path - grid.paths.data())][i]) << '\n';
    }
  }
  csv.close();

  const Model model = Model::from_fit(design, prob, grid.selected_fit(),
                                      grid.selected_lambda_value(), grid.selected_alpha_value());
  model.save(bundle_path);

  ordered_json line;
  line["command"] = "path";
  line["n_train"] = y_train.size();
  line["n_val"] = static_cast<int>(val_idx.size());
  line["loss"] = o.loss;
  line["alpha"] = grid.selected_alpha_value();
  line["lambda"] = grid.selected_lambda_value();
  line["val_score"] = grid.selected_score();
  line.update(status_counts(grid.selected_fit().status));
  line["csv"] = csv_path;
  line["bundle"] = bundle_path;
  std::cout << line.dump() << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// cv
// ---------------------------------------------------------------------------

int cmd_cv(const CommonOpts& o, const std::vector<double>& alphas, int n_lambda,
           double lambda_min_ratio, int folds, const std::string& selection,
           const std::string& csv_path, const std::string& bundle_path) {
  const LossKind loss = parse_loss(o.loss);
  const LoadedData data = load_input(o);
  if (folds < 2) throw std::runtime_error("cross validation needs --folds >= 2");
  const CvFolds cv = make_cv_folds(data.data.y.size(), folds, o.seed);
  MethodSpec method;
  method.name = o.linear_basis ? "lasso" : "splam";
  method.alphas = alphas;
  method.basis = make_basis(o);
  const SolverConfig cfg = make_solver_config(o, loss);
  const CvSummary summary = cv_method(data.data, loss, method, cv, n_lambda, lambda_min_ratio,
                                      cfg, o.workers, parse_selection(selection));

  std::ofstream csv(csv_path);
  if (!csv) throw std::runtime_error("cannot write " + csv_path);
  csv << "fold,alpha,lambda,val_score,test_score,support,linear,nonlinear\n";
  int best_fold = 0;
  for (std::size_t f = 0; f < summary.per_fold.size(); ++f) {
    const auto& r = summary.per_fold[f];
    int lin = 0, nonlin = 0;
    for (auto s : r.status) {
      if (s == FeatureStatus::linear) ++lin;
      if (s == FeatureStatus::nonlinear) ++nonlin;
    }
    csv << f << ',' << fmt(r.alpha) << ',' << fmt(r.lambda) << ',' << fmt(r.val_score) << ','
        << fmt(r.test_score) << ',' << (lin + nonlin) << ',' << lin << ',' << nonlin << '\n';
    if (r.val_score < summary.per_fold[static_cast<std::size_t>(best_fold)].val_score) {
      best_fold = static_cast<int>(f);
    }
  }
  csv << "mean,,,," << fmt(summary.mean_score) << ",,,\n";
  csv << "sd,,,," << fmt(summary.sd_score) << ",,,\n";
  csv.close();

  // Bundle: refit of the best-validation fold's selection on that fold's
  // training portion.
  const auto bf = static_cast<std::size_t>(best_fold);
  const Mat x_train = take_rows(data.data.X, cv.train[bf]);
  const Vec y_train = take(data.data.y, cv.train[bf]);
  const BlockDesign design = build_block_design(x_train, method.basis);
  Problem prob(design.Q, loss, y_train);
  const auto& sel = summary.per_fold[bf];
  const FitResult fr = fit(prob, PenaltyParams(sel.lambda, sel.alpha), cfg);
  Model::from_fit(design, prob, fr, sel.lambda, sel.alpha).save(bundle_path);

  ordered_json line;
  line["command"] = "cv";
  line["n"] = data.data.y.size();
  line["folds"] = folds;
  line["loss"] = o.loss;
  line["mean_score"] = summary.mean_score;
  line["sd_score"] = summary.sd_score;
  line["best_fold"] = best_fold;
  line["csv"] = csv_path;
  line["bundle"] = bundle_path;
  std::cout << line.dump() << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// predict
// ---------------------------------------------------------------------------

int cmd_predict(const std::string& model_path, const CommonOpts& o,
                const std::string& out_path) {
  const Model model = Model::load(model_path);
  CommonOpts in = o;
  in.loss = model.loss == LossKind::logistic ? "logistic" : "quadratic";
  LoadedData data = load_input(in);
  if (data.data.X.cols() < model.n_features()) {
    // svmlight files omit trailing all-zero features.
    Mat padded = Mat::Zero(data.data.X.rows(), model.n_features());
    padded.leftCols(data.data.X.cols()) = data.data.X;
    data.data.X = std::move(padded);
  }
  const Vec u = model.predict(data.data.X);

  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  if (model.loss == LossKind::quadratic) {
    out << "prediction\n";
    for (Eigen::Index i = 0; i < u.size(); ++i) out << fmt(u[i]) << '\n';
  } else {
    out << "probability,label\n";
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      const double prob = splam::detail::sigmoid(u[i]);
      out << fmt(prob) << ',' << (u[i] >= 0.0 ? 1 : -1) << '\n';
    }
  }
  out.close();

  ordered_json line;
  line["command"] = "predict";
  line["n"] = u.size();
  line["model"] = model_path;
  line["output"] = out_path;
  std::cout << line.dump() << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

int cmd_simulate(const std::string& study, const CommonOpts& o, const ordered_json& flags,
                 const std::string& csv_path) {
  std::ofstream csv(csv_path);
  if (!csv) throw std::runtime_error("cannot write " + csv_path);

  if (study == "synth1") {
    Synth1Config cfg;
    cfg.n = flags.at("n").get<Eigen::Index>();
    cfg.folds = flags.at("folds").get<int>();
    cfg.sigma2_grid = parse_grid(flags.at("sigma2").get<std::string>(), "sigma2");
    cfg.alphas = parse_grid(flags.at("alpha_grid").get<std::string>(), "alpha");
    cfg.n_lambda = flags.at("nlambda").get<int>();
    cfg.knots = o.knots;
    cfg.workers = o.workers;
    const auto rows = run_synth1_study(cfg, o.seed);
    csv << "sigma2,lasso_mean,lasso_sd,splam_mean,splam_sd,spam_mean,spam_sd\n";
    for (const auto& r : rows) {
      csv << fmt(r.sigma2) << ',' << fmt(r.lasso.mean_score) << ',' << fmt(r.lasso.sd_score)
          << ',' << fmt(r.splam.mean_score) << ',' << fmt(r.splam.sd_score) << ','
          << fmt(r.spam.mean_score) << ',' << fmt(r.spam.sd_score) << '\n';
    }
  } else if (study == "winnermap") {
    WinnerMapConfig wm;
    wm.p = flags.at("p").get<int>();
    wm.n_train = flags.at("ntrain").get<Eigen::Index>();
    wm.n_val = flags.at("nval").get<Eigen::Index>();
    wm.n_test = flags.at("ntest").get<Eigen::Index>();
    wm.replicates = flags.at("replicates").get<int>();
    wm.alphas = parse_grid(flags.at("alpha_grid").get<std::string>(), "alpha");
    wm.n_lambda = flags.at("nlambda").get<int>();
    wm.knots = o.knots;
    wm.workers = o.workers;
    const auto cells = run_winner_map(wm, o.seed);
    csv << "gamma,delta,splam_rmse,spam_rmse,lasso_rmse,winner\n";
    for (const auto& c : cells) {
      csv << fmt(c.gamma) << ',' << fmt(c.delta) << ',' << fmt(c.splam_rmse) << ','
          << fmt(c.spam_rmse) << ',' << fmt(c.lasso_rmse) << ',' << c.winner << '\n';
    }
  } else if (study == "spamlb") {
    const auto m_grid = parse_grid(flags.at("m_list").get<std::string>(), "M");
    std::vector<int> m_list;
    for (double m : m_grid) m_list.push_back(static_cast<int>(m));
    const auto res =
        check_spam_lb(flags.at("p").get<int>(), flags.at("b").get<double>(),
                      flags.at("sigma").get<double>(), m_list, o.seed,
                      flags.at("reps").get<int>(), o.workers);
    csv << "m,n,spam_best_error,splam_limit_error\n";
    for (std::size_t i = 0; i < res.m_values.size(); ++i) {
      csv << res.m_values[i] << ',' << res.m_values[i] * flags.at("p").get<int>() << ','
          << fmt(res.spam_best_error[i]) << ',' << fmt(res.splam_limit_error[i]) << '\n';
    }
  } else if (study == "oraclebound") {
    const auto res = check_oracle_bound(
        flags.at("p").get<int>(), flags.at("m").get<int>(), flags.at("n").get<Eigen::Index>(),
        flags.at("reps").get<int>(), o.seed, flags.at("sigma").get<double>(),
        flags.at("lambda_scale").get<double>(), o.workers);
    csv << "p,m,n,reps,lambda,alpha,coverage,guarantee\n";
    csv << flags.at("p").get<int>() << ',' << flags.at("m").get<int>() << ','
        << flags.at("n").get<Eigen::Index>() << ',' << flags.at("reps").get<int>() << ','
        << fmt(res.lambda) << ',' << fmt(res.alpha) << ',' << fmt(res.coverage) << ','
        << fmt(1.0 - 4.0 / flags.at("p").get<double>()) << '\n';
  } else {
    throw std::runtime_error("unknown study: " + study);
  }
  csv.close();

  ordered_json line;
  line["command"] = "simulate";
  line["study"] = study;
  line["csv"] = csv_path;
  line["seed"] = o.seed;
  std::cout << line.dump() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse partially linear additive models"};
  app.require_subcommand(1);

  CommonOpts fit_opts;
  double fit_lambda = 0.0;
  double fit_alpha = theory_alpha();
  std::string fit_bundle = "model.json";
  auto* fit_cmd = app.add_subcommand("fit", "fit one (lambda, alpha) model");
  add_common(fit_cmd, fit_opts);
  fit_cmd->add_option("--lambda", fit_lambda, "penalty level")->required();
  fit_cmd->add_option("--alpha", fit_alpha, "mixing parameter (default: theory value)");
  fit_cmd->add_option("--output", fit_bundle, "bundle path");

  CommonOpts path_opts;
  std::string path_alpha_grid;
  int path_nlambda = 100;
  double path_ratio = 1e-3;
  double path_val_fraction = 0.2;
  std::string path_selection = "1se";
  std::string path_csv = "path.csv";
  std::string path_bundle = "model.json";
  auto* path_cmd = app.add_subcommand("path", "regularization path over a (lambda, alpha) grid");
  add_common(path_cmd, path_opts);
  path_cmd->add_option("--alpha-grid", path_alpha_grid,
                       "comma-separated alphas (default: 0.05..0.95,1)");
  path_cmd->add_option("--nlambda", path_nlambda, "lambdas per path");
  path_cmd->add_option("--lambda-min-ratio", path_ratio, "path floor as a fraction of lambda_max");
  path_cmd->add_option("--val-fraction", path_val_fraction, "held-out fraction for selection");
  path_cmd->add_option("--selection", path_selection, "1se | min (validation argmin)")
      ->check(CLI::IsMember({"1se", "min"}));
  path_cmd->add_option("--output-csv", path_csv, "path table");
  path_cmd->add_option("--output", path_bundle, "selected-model bundle");

  CommonOpts cv_opts;
  std::string cv_alpha_grid;
  int cv_nlambda = 100;
  double cv_ratio = 1e-3;
  int cv_folds = 5;
  std::string cv_selection = "1se";
  std::string cv_csv = "cv.csv";
  std::string cv_bundle = "model.json";
  auto* cv_cmd = app.add_subcommand("cv", "k-fold cross-validated selection");
  add_common(cv_cmd, cv_opts);
  cv_cmd->add_option("--alpha-grid", cv_alpha_grid, "comma-separated alphas");
  cv_cmd->add_option("--nlambda", cv_nlambda, "lambdas per path");
  cv_cmd->add_option("--lambda-min-ratio", cv_ratio, "path floor");
  cv_cmd->add_option("--folds", cv_folds, "number of folds");
  cv_cmd->add_option("--selection", cv_selection, "1se | min (validation argmin)")
      ->check(CLI::IsMember({"1se", "min"}));
  cv_cmd->add_option("--output-csv", cv_csv, "per-fold table");
  cv_cmd->add_option("--output", cv_bundle, "bundle from the best-validation fold");

  CommonOpts predict_opts;
  std::string predict_model;
  std::string predict_out = "predictions.csv";
  auto* predict_cmd = app.add_subcommand("predict", "apply a saved bundle");
  predict_cmd->add_option("--model", predict_model, "bundle path")->required();
  predict_cmd->add_option("--input", predict_opts.input, "input data file")->required();
  predict_cmd->add_option("--format", predict_opts.format, "csv | svmlight | auto")
      ->check(CLI::IsMember({"csv", "svmlight", "auto"}));
  predict_cmd->add_option("--output", predict_out, "predictions file");

  CommonOpts sim_opts;
  std::string sim_study;
  std::string sim_csv = "results.csv";
  std::string sim_sigma2 = "1,2,4,8";
  std::string sim_alpha_grid;
  std::string sim_mlist = "8,32,128";
  Eigen::Index sim_n = 10000, sim_ntrain = 1000, sim_nval = 200, sim_ntest = 200;
  int sim_folds = 5, sim_nlambda = 100, sim_reps = 10, sim_p = 100, sim_m = 4;
  double sim_b = 1.0, sim_sigma = 1.0, sim_lambda_scale = 1.0;
  auto* sim_cmd = app.add_subcommand("simulate", "run a study: synth1 | winnermap | spamlb | oraclebound");
  sim_cmd->add_option("--study", sim_study, "study name")->required();
  add_common(sim_cmd, sim_opts, false);
  sim_cmd->add_option("--knots", sim_opts.knots, "spline knots per feature");
  sim_cmd->add_option("--output-csv", sim_csv, "results table");
  sim_cmd->add_option("--sigma2-grid", sim_sigma2, "synth1 noise grid");
  sim_cmd->add_option("--alpha-grid", sim_alpha_grid, "alpha grid");
  sim_cmd->add_option("--n", sim_n, "synth1 sample count / oraclebound N");
  sim_cmd->add_option("--folds", sim_folds, "synth1 folds");
  sim_cmd->add_option("--nlambda", sim_nlambda, "lambdas per path");
  sim_cmd->add_option("--p", sim_p, "feature count");
  sim_cmd->add_option("--m", sim_m, "block width (oraclebound)");
  sim_cmd->add_option("--m-list", sim_mlist, "spamlb block widths");
  sim_cmd->add_option("--b", sim_b, "spamlb linear coefficient");
  sim_cmd->add_option("--sigma", sim_sigma, "noise standard deviation");
  sim_cmd->add_option("--lambda-scale", sim_lambda_scale, "oraclebound lambda multiplier");
  sim_cmd->add_option("--reps", sim_reps, "replicates");
  sim_cmd->add_option("--ntrain", sim_ntrain, "winnermap training rows");
  sim_cmd->add_option("--nval", sim_nval, "winnermap validation rows");
  sim_cmd->add_option("--ntest", sim_ntest, "winnermap test rows");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*fit_cmd) return cmd_fit(fit_opts, fit_lambda, fit_alpha, fit_bundle);
    if (*path_cmd) {
      const auto alphas = path_alpha_grid.empty() ? default_alpha_grid()
                                                  : parse_grid(path_alpha_grid, "alpha");
      return cmd_path(path_opts, alphas, path_nlambda, path_ratio, path_val_fraction,
                      path_selection, path_csv, path_bundle);
    }
    if (*cv_cmd) {
      const auto alphas =
          cv_alpha_grid.empty() ? default_alpha_grid() : parse_grid(cv_alpha_grid, "alpha");
      return cmd_cv(cv_opts, alphas, cv_nlambda, cv_ratio, cv_folds, cv_selection, cv_csv,
                    cv_bundle);
    }
    if (*predict_cmd) return cmd_predict(predict_model, predict_opts, predict_out);
    if (*sim_cmd) {
      ordered_json flags;
      flags["n"] = sim_n;
      flags["folds"] = sim_folds;
      flags["sigma2"] = sim_sigma2;
      if (sim_alpha_grid.empty()) {
        std::string grid;
        for (double a : default_alpha_grid()) grid += (grid.empty() ? "" : ",") + fmt(a);
        sim_alpha_grid = grid;
      }
      flags["alpha_grid"] = sim_alpha_grid;
      flags["nlambda"] = sim_nlambda;
      flags["p"] = sim_p;
      flags["m"] = sim_m;
      flags["m_list"] = sim_mlist;
      flags["b"] = sim_b;
      flags["sigma"] = sim_sigma;
      flags["lambda_scale"] = sim_lambda_scale;
      flags["reps"] = sim_reps;
      flags["replicates"] = sim_reps;
      flags["ntrain"] = sim_ntrain;
      flags["nval"] = sim_nval;
      flags["ntest"] = sim_ntest;
      return cmd_simulate(sim_study, sim_opts, flags, sim_csv);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
