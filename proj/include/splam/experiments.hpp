#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "splam/metrics.hpp"
#include "splam/parallel.hpp"
#include "splam/path.hpp"
#include "splam/rng.hpp"
#include "splam/spline_basis.hpp"

namespace splam {

struct Dataset {
  Mat X;
  Vec y;
};

/// True model structure behind a generated dataset. linear_set and
/// nonlinear_set are disjoint; support is their union.
struct GroundTruth {
  std::vector<int> support;
  std::vector<int> nonlinear_set;
  std::vector<int> linear_set;
  double sigma2 = 0.0;
};

/// Noise-free regression function of gen_synth1.
template <class Row>
inline double synth1_mean(const Row& x) {
  return 2.0 * std::sin(2.0 * x[0]) + x[1] * x[1] + std::exp(-x[2]) + x[3] - 3.0 * x[4] +
         2.5 * x[5] + 10.0 * x[6] + 2.0 * x[7] - 7.0 * x[8] + 5.0 * x[9];
}

/// Synthetic regression of the accuracy study: p = 100,
/// y = 2 sin(2 x1) + x2^2 + exp(-x3) + x4 - 3 x5 + 2.5 x6 + 10 x7 + 2 x8
///     - 7 x9 + 5 x10 + noise.
/// Features 1-3 are U[-2.5, 2.5], the rest U[0, 1].
inline std::pair<Dataset, GroundTruth> gen_synth1(Eigen::Index n, double sigma2,
                                                  std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("gen_synth1 needs n >= 1");
  constexpr int p = 100;
  Rng rng(seed);
  Dataset d;
  d.X.resize(n, p);
  for (int j = 0; j < p; ++j) {
    const bool wide = j < 3;
    for (Eigen::Index i = 0; i < n; ++i) {
      d.X(i, j) = wide ? rng.uniform(-2.5, 2.5) : rng.uniform(0.0, 1.0);
    }
  }
  const double noise_sd = std::sqrt(sigma2);
  d.y.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    d.y[i] = synth1_mean(d.X.row(i)) + (noise_sd > 0.0 ? rng.normal(0.0, noise_sd) : 0.0);
  }
  GroundTruth gt;
  gt.nonlinear_set = {0, 1, 2};
  for (int j = 3; j < 10; ++j) gt.linear_set.push_back(j);
  for (int j = 0; j < 10; ++j) gt.support.push_back(j);
  gt.sigma2 = sigma2;
  return {std::move(d), std::move(gt)};
}

/// Winner-map simulation: y = sum_{j in L} x_j + sum_{j in N} sin(x_j) + e,
/// e ~ N(0,1), with |L| = round(gamma p) and |N| = round(delta p) disjoint.
/// Features are U[-2.5, 2.5] so the sine components are genuinely nonlinear.
inline std::pair<Dataset, GroundTruth> gen_winnermap(int p, double gamma, double delta,
                                                     Eigen::Index n, std::uint64_t seed) {
  const int n_lin = static_cast<int>(std::lround(gamma * p));
  const int n_non = static_cast<int>(std::lround(delta * p));
  if (n_lin + n_non > p) throw std::invalid_argument("gen_winnermap: gamma + delta exceeds 1");
  if (n < 1 || p < 1) throw std::invalid_argument("gen_winnermap: bad sizes");
  Rng rng(seed);
  std::vector<int> perm(static_cast<std::size_t>(p));
  std::iota(perm.begin(), perm.end(), 0);
  rng.shuffle(perm);
  GroundTruth gt;
  gt.linear_set.assign(perm.begin(), perm.begin() + n_lin);
  gt.nonlinear_set.assign(perm.begin() + n_lin, perm.begin() + n_lin + n_non);
  std::sort(gt.linear_set.begin(), gt.linear_set.end());
  std::sort(gt.nonlinear_set.begin(), gt.nonlinear_set.end());
  gt.support = gt.linear_set;
  gt.support.insert(gt.support.end(), gt.nonlinear_set.begin(), gt.nonlinear_set.end());
  std::sort(gt.support.begin(), gt.support.end());
  gt.sigma2 = 1.0;
  Dataset d;
  d.X.resize(n, p);
  for (int j = 0; j < p; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) d.X(i, j) = rng.uniform(-2.5, 2.5);
  }
  d.y = Vec::Zero(n);
  for (int j : gt.linear_set) d.y += d.X.col(j);
  for (int j : gt.nonlinear_set) d.y += d.X.col(j).array().sin().matrix();
  for (Eigen::Index i = 0; i < n; ++i) d.y[i] += rng.normal();
  return {std::move(d), std::move(gt)};
}

/// Exactly orthogonal block design of the SpAM-inconsistency scenario:
/// N = p M, (1/N) X^T X = I, beta0_j = b e1, y = X beta0 + sigma eps.
struct OrthoDesign {
  std::vector<Mat> blocks;  // p blocks, each N x M
  std::vector<Vec> beta0;
  Vec y;
  Eigen::Index n = 0;
};

inline OrthoDesign gen_appendixC(int p, int m, double b, double sigma, std::uint64_t seed) {
  if (p < 1 || m < 1) throw std::invalid_argument("gen_appendixC: bad sizes");
  const Eigen::Index n = static_cast<Eigen::Index>(p) * m;
  Rng rng(seed);
  Mat gauss(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    for (Eigen::Index r = 0; r < n; ++r) gauss(r, c) = rng.normal();
  }
  Eigen::HouseholderQR<Mat> qr(gauss);
  Mat q = qr.householderQ();
  // Fix signs so the factorization (hence the dataset) is seed-deterministic
  // across BLAS variants.
  const Mat r_factor = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index c = 0; c < n; ++c) {
    if (r_factor(c, c) < 0.0) q.col(c) = -q.col(c);
  }
  const double root_n = std::sqrt(static_cast<double>(n));
  OrthoDesign d;
  d.n = n;
  d.blocks.reserve(static_cast<std::size_t>(p));
  d.beta0.reserve(static_cast<std::size_t>(p));
  d.y = Vec::Zero(n);
  for (int j = 0; j < p; ++j) {
    d.blocks.push_back(q.middleCols(static_cast<Eigen::Index>(j) * m, m) * root_n);
    Vec beta = Vec::Zero(m);
    beta[0] = b;
    d.y.noalias() += d.blocks.back() * beta;
    d.beta0.push_back(std::move(beta));
  }
  for (Eigen::Index i = 0; i < n; ++i) d.y[i] += sigma * rng.normal();
  return d;
}

// ---------------------------------------------------------------------------
// Theory checks
// ---------------------------------------------------------------------------

struct OracleBoundResult {
  std::vector<bool> holds;  // one entry per replicate
  double coverage = 0.0;
  double lambda = 0.0;
  double alpha = 0.0;
  int monotone_violations = 0;  // across all replicate solves
};

/// Monte-Carlo check of the slow-rate bound at the prescribed (lambda,
/// alpha): fraction of replicates where (1/N) ||X bhat - X beta0||^2 <=
/// 3 lambda [alpha sum_{L0} |b_j1| + sum_{N0} ||b_j||].
inline OracleBoundResult check_oracle_bound(int p, int m, Eigen::Index n, int reps,
                                            std::uint64_t seed, double sigma = 1.0,
                                            double lambda_scale = 1.0, int workers = 1) {
  if (std::log(static_cast<double>(p)) < static_cast<double>(m) / 8.0)
    throw std::invalid_argument("check_oracle_bound requires log p >= M/8");
  OracleBoundResult out;
  out.lambda = lambda_scale * theory_lambda(sigma, p, n);
  out.alpha = theory_alpha();
  out.holds.assign(static_cast<std::size_t>(reps), false);
  std::vector<int> violations(static_cast<std::size_t>(reps), 0);
  parallel_for(static_cast<std::size_t>(reps), workers, [&](std::size_t rep) {
    Rng rng(derive_seed(seed, rep));
    // Per-block orthonormalized Gaussian design.
    std::vector<Mat> blocks;
    blocks.reserve(static_cast<std::size_t>(p));
    for (int j = 0; j < p; ++j) {
      Mat raw(n, m);
      for (Eigen::Index c = 0; c < m; ++c) {
        for (Eigen::Index r = 0; r < n; ++r) raw(r, c) = rng.normal();
      }
      blocks.push_back(orthonormalize_block(raw).Q);
    }
    // Sparse truth: 3 linear blocks, 2 nonlinear blocks.
    std::vector<int> perm(static_cast<std::size_t>(p));
    std::iota(perm.begin(), perm.end(), 0);
    rng.shuffle(perm);
    std::vector<Vec> beta0(static_cast<std::size_t>(p), Vec::Zero(m));
    double rhs_sum = 0.0;
    const double alpha = out.alpha;
    for (int k = 0; k < 3; ++k) {
      const auto j = static_cast<std::size_t>(perm[static_cast<std::size_t>(k)]);
      const double w = (rng.uniform() < 0.5 ? -1.0 : 1.0) * rng.uniform(0.5, 1.5);
      beta0[j][0] = w;
      rhs_sum += alpha * std::abs(w);
    }
    for (int k = 3; k < 5; ++k) {
      const auto j = static_cast<std::size_t>(perm[static_cast<std::size_t>(k)]);
      Vec v(m);
      for (Eigen::Index c = 0; c < m; ++c) v[c] = rng.normal();
      v *= rng.uniform(0.5, 1.5) / v.norm();
      beta0[j] = v;
      rhs_sum += v.norm();
    }
    Vec signal = Vec::Zero(n);
    for (int j = 0; j < p; ++j) {
      signal.noalias() += blocks[static_cast<std::size_t>(j)] * beta0[static_cast<std::size_t>(j)];
    }
    Vec y = signal;
    for (Eigen::Index i = 0; i < n; ++i) y[i] += sigma * rng.normal();

    Problem prob(blocks, LossKind::quadratic, y);
    SolverConfig cfg;
    cfg.algorithm = Algorithm::bcd;
    FitResult fr = fit(prob, PenaltyParams(out.lambda, alpha), cfg);
    violations[rep] = monotonicity_violations(fr.objective_trace);
    Vec fitted = prob.linear_predictor(fr.coef);
    fitted.array() += prob.y_offset;
    const double lhs = (fitted - signal).squaredNorm() / static_cast<double>(n);
    out.holds[rep] = lhs <= 3.0 * out.lambda * rhs_sum + 1e-12;
  });
  int count = 0;
  for (bool h : out.holds)
    if (h) ++count;
  for (int v : violations) out.monotone_violations += v;
  out.coverage = static_cast<double>(count) / static_cast<double>(reps);
  return out;
}

struct SpamLbResult {
  std::vector<int> m_values;
  std::vector<double> spam_best_error;    // best-lambda SpAM prediction error
  std::vector<double> splam_limit_error;  // first-coordinate-only estimator
};

/// Appendix C inconsistency scenario: SpAM's best prediction error stays
/// bounded away from zero as M grows with N = pM, while the SPLAM-limit
/// estimator's error vanishes. Errors are averaged over `reps` replicates.
inline SpamLbResult check_spam_lb(int p, double b, double sigma, const std::vector<int>& m_list,
                                  std::uint64_t seed, int reps = 20, int workers = 1) {
  SpamLbResult out;
  out.m_values = m_list;
  out.spam_best_error.assign(m_list.size(), 0.0);
  out.splam_limit_error.assign(m_list.size(), 0.0);
  for (std::size_t mi = 0; mi < m_list.size(); ++mi) {
    const int m = m_list[mi];
    std::vector<double> spam_err(static_cast<std::size_t>(reps));
    std::vector<double> limit_err(static_cast<std::size_t>(reps));
    parallel_for(static_cast<std::size_t>(reps), workers, [&](std::size_t rep) {
      OrthoDesign d = gen_appendixC(p, m, b, sigma, derive_seed(seed + mi, rep));
      // g_j = (1/N) X_j^T y; with (1/N) X^T X = I the prediction error is
      // sum_j ||bhat_j - beta0_j||^2 exactly.
      std::vector<Vec> g(static_cast<std::size_t>(p));
      double max_norm = 0.0;
      for (int j = 0; j < p; ++j) {
        g[static_cast<std::size_t>(j)] =
            d.blocks[static_cast<std::size_t>(j)].transpose() * d.y / static_cast<double>(d.n);
        max_norm = std::max(max_norm, g[static_cast<std::size_t>(j)].norm());
      }
      const int n_lambda = 400;
      double best = std::numeric_limits<double>::infinity();
      for (int li = 0; li <= n_lambda; ++li) {
        const double lambda = max_norm * static_cast<double>(li) / n_lambda;
        double err = 0.0;
        for (int j = 0; j < p; ++j) {
          const Vec& gj = g[static_cast<std::size_t>(j)];
          const double shrink = std::max(0.0, 1.0 - lambda / gj.norm());
          err += (shrink * gj - d.beta0[static_cast<std::size_t>(j)]).squaredNorm();
        }
        best = std::min(best, err);
      }
      spam_err[rep] = best;
      double lim = 0.0;
      for (int j = 0; j < p; ++j) {
        const double diff = g[static_cast<std::size_t>(j)][0] - b;
        lim += diff * diff;
      }
      limit_err[rep] = lim;
    });
    for (int r = 0; r < reps; ++r) {
      out.spam_best_error[mi] += spam_err[static_cast<std::size_t>(r)] / reps;
      out.splam_limit_error[mi] += limit_err[static_cast<std::size_t>(r)] / reps;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Method comparison harness (SPLAM / SpAM / Lasso on train-validate-test)
// ---------------------------------------------------------------------------

struct SelectionResult {
  double alpha = 1.0;
  double lambda = 0.0;
  double val_score = 0.0;
  double test_score = 0.0;
  std::vector<FeatureStatus> status;
  int sweeps = 0;
  int monotone_violations = 0;  // over every fit in the grid (descent methods)
};

/// Builds the basis on the training split, fits the (lambda, alpha) grid,
/// selects on validation (one-SE rule by default, matching how the studies
/// report structure), and scores the selected model on test.
inline SelectionResult select_on_split(const Mat& x_train, const Vec& y_train, const Mat& x_val,
                                       const Vec& y_val, const Mat& x_test, const Vec& y_test,
                                       LossKind loss, const std::vector<double>& alphas,
                                       const BasisConfig& basis, int n_lambda = 100,
                                       double lambda_min_ratio = 1e-3, SolverConfig cfg = {},
                                       int workers = 1,
                                       SelectionRule rule = SelectionRule::one_se) {
  const BlockDesign design = build_block_design(x_train, basis);
  if (cfg.algorithm == Algorithm::bcd && loss != LossKind::quadratic)
    cfg.algorithm = default_algorithm(loss);
  Problem prob(design.Q, loss, y_train);
  const std::vector<Mat> val_blocks = design.transform(x_val);
  PathGrid grid = fit_path_grid(prob, alphas, val_blocks, y_val, n_lambda, lambda_min_ratio, cfg,
                                workers, rule);
  const std::vector<Mat> test_blocks = design.transform(x_test);
  SelectionResult out;
  out.alpha = grid.selected_alpha_value();
  out.lambda = grid.selected_lambda_value();
  out.val_score = grid.selected_score();
  out.test_score = validation_score(test_blocks, y_test, prob, grid.selected_fit().coef);
  out.status = grid.selected_fit().status;
  out.sweeps = grid.selected_fit().sweeps;
  if (cfg.algorithm != Algorithm::fista) {
    for (const auto& path : grid.paths) {
      for (const auto& f : path.fits) out.monotone_violations += monotonicity_violations(f.objective_trace);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Cross-validation harness
// ---------------------------------------------------------------------------

inline Mat take_rows(const Mat& x, const std::vector<int>& idx) {
  Mat out(static_cast<Eigen::Index>(idx.size()), x.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = x.row(idx[i]);
  return out;
}

inline Vec take(const Vec& y, const std::vector<int>& idx) {
  Vec out(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) out[static_cast<Eigen::Index>(i)] = y[idx[i]];
  return out;
}

/// Deterministic fold assignment: the shuffled sample is cut into `folds`
/// chunks; each fold tests on its chunk, holds out val_fraction of the rest
/// for model selection, and trains on the remainder.
struct CvFolds {
  std::vector<std::vector<int>> train, val, test;
};

inline CvFolds make_cv_folds(Eigen::Index n, int folds, std::uint64_t seed,
                             double val_fraction = 0.2) {
  if (folds < 2) throw std::invalid_argument("cross validation needs folds >= 2");
  if (n < folds) throw std::invalid_argument("fewer samples than folds");
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(seed);
  rng.shuffle(perm);
  CvFolds out;
  out.train.resize(static_cast<std::size_t>(folds));
  out.val.resize(static_cast<std::size_t>(folds));
  out.test.resize(static_cast<std::size_t>(folds));
  for (int f = 0; f < folds; ++f) {
    const auto fs = static_cast<std::size_t>(f);
    std::vector<int> rest;
    for (std::size_t i = 0; i < perm.size(); ++i) {
      if (static_cast<int>(i % static_cast<std::size_t>(folds)) == f) {
        out.test[fs].push_back(perm[i]);
      } else {
        rest.push_back(perm[i]);
      }
    }
    std::size_t n_val = static_cast<std::size_t>(
        std::lround(val_fraction * static_cast<double>(rest.size())));
    n_val = std::min(n_val, rest.size() - 1);
    if (n_val == 0 && rest.size() > 1) n_val = 1;
    out.val[fs].assign(rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(n_val));
    out.train[fs].assign(rest.begin() + static_cast<std::ptrdiff_t>(n_val), rest.end());
  }
  return out;
}

/// One comparison method: a name, an alpha grid, and a basis.
struct MethodSpec {
  std::string name;
  std::vector<double> alphas;
  BasisConfig basis;

  static MethodSpec splam(std::vector<double> grid = default_alpha_grid(), int knots = 10) {
    MethodSpec m;
    m.name = "splam";
    m.alphas = std::move(grid);
    m.basis.knots = knots;
    return m;
  }
  static MethodSpec spam(int knots = 10) {
    MethodSpec m;
    m.name = "spam";
    m.alphas = {1.0};
    m.basis.knots = knots;
    return m;
  }
  static MethodSpec lasso() {
    MethodSpec m;
    m.name = "lasso";
    m.alphas = {1.0};
    m.basis.linear_only = true;
    return m;
  }
};

struct CvSummary {
  std::string method;
  double mean_score = 0.0;
  double sd_score = 0.0;
  std::vector<SelectionResult> per_fold;

  int monotone_violations() const {
    int v = 0;
    for (const auto& r : per_fold) v += r.monotone_violations;
    return v;
  }
};

inline CvSummary cv_method(const Dataset& data, LossKind loss, const MethodSpec& method,
                           const CvFolds& folds, int n_lambda = 100,
                           double lambda_min_ratio = 1e-3, SolverConfig cfg = {},
                           int workers = 1, SelectionRule rule = SelectionRule::one_se) {
  CvSummary out;
  out.method = method.name;
  const auto k = folds.test.size();
  out.per_fold.resize(k);
  parallel_for(k, workers, [&](std::size_t f) {
    out.per_fold[f] = select_on_split(
        take_rows(data.X, folds.train[f]), take(data.y, folds.train[f]),
        take_rows(data.X, folds.val[f]), take(data.y, folds.val[f]),
        take_rows(data.X, folds.test[f]), take(data.y, folds.test[f]), loss, method.alphas,
        method.basis, n_lambda, lambda_min_ratio, cfg, 1, rule);
  });
  for (const auto& r : out.per_fold) out.mean_score += r.test_score / static_cast<double>(k);
  double ss = 0.0;
  for (const auto& r : out.per_fold) {
    ss += (r.test_score - out.mean_score) * (r.test_score - out.mean_score);
  }
  out.sd_score = k > 1 ? std::sqrt(ss / static_cast<double>(k - 1)) : 0.0;
  return out;
}

/// Table-1-style accuracy study: Lasso / SPLAM / SpAM mean test RMSE (with
/// standard deviation) under k-fold cross validation, one row per noise
/// level.
struct Synth1Row {
  double sigma2 = 0.0;
  CvSummary lasso, splam, spam;
};

struct Synth1Config {
  Eigen::Index n = 10000;
  int folds = 5;
  std::vector<double> sigma2_grid = {1.0, 2.0, 4.0, 8.0};
  std::vector<double> alphas = default_alpha_grid();
  int n_lambda = 100;
  double lambda_min_ratio = 1e-3;
  int knots = 10;
  int workers = 1;
};

inline std::vector<Synth1Row> run_synth1_study(const Synth1Config& cfg, std::uint64_t seed) {
  std::vector<Synth1Row> rows;
  SolverConfig scfg;
  scfg.algorithm = Algorithm::bcd;
  for (std::size_t si = 0; si < cfg.sigma2_grid.size(); ++si) {
    const double sigma2 = cfg.sigma2_grid[si];
    auto [data, truth] = gen_synth1(cfg.n, sigma2, derive_seed(seed, si));
    (void)truth;
    const CvFolds folds = make_cv_folds(cfg.n, cfg.folds, derive_seed(seed, 1000 + si));
    Synth1Row row;
    row.sigma2 = sigma2;
    row.lasso = cv_method(data, LossKind::quadratic, MethodSpec::lasso(), folds, cfg.n_lambda,
                          cfg.lambda_min_ratio, scfg, cfg.workers);
    row.splam = cv_method(data, LossKind::quadratic, MethodSpec::splam(cfg.alphas, cfg.knots),
                          folds, cfg.n_lambda, cfg.lambda_min_ratio, scfg, cfg.workers);
    row.spam = cv_method(data, LossKind::quadratic, MethodSpec::spam(cfg.knots), folds,
                         cfg.n_lambda, cfg.lambda_min_ratio, scfg, cfg.workers);
    rows.push_back(std::move(row));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Winner map (effect of |L| and |N| on SPLAM / SpAM / Lasso)
// ---------------------------------------------------------------------------

struct WinnerCell {
  double gamma = 0.0, delta = 0.0;
  double splam_rmse = 0.0, spam_rmse = 0.0, lasso_rmse = 0.0;
  std::string winner;  // "splam", "spam", "lasso", or "tie"
};

struct WinnerMapConfig {
  int p = 100;
  Eigen::Index n_train = 1000, n_val = 200, n_test = 200;
  int replicates = 10;
  std::vector<double> alphas = default_alpha_grid();
  int n_lambda = 100;
  double lambda_min_ratio = 1e-3;
  int knots = 10;
  double grid_step = 0.1;
  double tie_tol = 1e-6;
  int workers = 1;
};

inline std::vector<WinnerCell> run_winner_map(const WinnerMapConfig& wm, std::uint64_t seed) {
  std::vector<std::pair<double, double>> cells;
  const int steps = static_cast<int>(std::lround(1.0 / wm.grid_step));
  for (int gi = 0; gi <= steps; ++gi) {
    for (int di = 0; di + gi <= steps; ++di) {
      cells.emplace_back(gi * wm.grid_step, di * wm.grid_step);
    }
  }
  std::vector<WinnerCell> out(cells.size());
  // One work item per (cell, replicate); means reduced in index order.
  const auto reps = static_cast<std::size_t>(wm.replicates);
  std::vector<std::array<double, 3>> scores(cells.size() * reps);
  parallel_for(cells.size() * reps, wm.workers, [&](std::size_t item) {
    const std::size_t ci = item / reps;
    const std::size_t rep = item % reps;
    const auto [gamma, delta] = cells[ci];
    const Eigen::Index total = wm.n_train + wm.n_val + wm.n_test;
    auto [data, truth] = gen_winnermap(wm.p, gamma, delta, total,
                                       derive_seed(seed, ci * 1000003ULL + rep));
    (void)truth;
    const Mat xtr = data.X.topRows(wm.n_train);
    const Vec ytr = data.y.head(wm.n_train);
    const Mat xval = data.X.middleRows(wm.n_train, wm.n_val);
    const Vec yval = data.y.segment(wm.n_train, wm.n_val);
    const Mat xte = data.X.bottomRows(wm.n_test);
    const Vec yte = data.y.tail(wm.n_test);
    BasisConfig spline_basis_cfg;
    spline_basis_cfg.knots = wm.knots;
    BasisConfig linear_cfg;
    linear_cfg.linear_only = true;
    SolverConfig scfg;
    scfg.algorithm = Algorithm::bcd;
    const auto splam =
        select_on_split(xtr, ytr, xval, yval, xte, yte, LossKind::quadratic, wm.alphas,
                        spline_basis_cfg, wm.n_lambda, wm.lambda_min_ratio, scfg, 1);
    const auto spam = select_on_split(xtr, ytr, xval, yval, xte, yte, LossKind::quadratic, {1.0},
                                      spline_basis_cfg, wm.n_lambda, wm.lambda_min_ratio, scfg, 1);
    const auto lasso = select_on_split(xtr, ytr, xval, yval, xte, yte, LossKind::quadratic, {1.0},
                                       linear_cfg, wm.n_lambda, wm.lambda_min_ratio, scfg, 1);
    scores[item] = {splam.test_score, spam.test_score, lasso.test_score};
  });
  for (std::size_t ci = 0; ci < cells.size(); ++ci) {
    WinnerCell cell;
    cell.gamma = cells[ci].first;
    cell.delta = cells[ci].second;
    for (std::size_t rep = 0; rep < reps; ++rep) {
      cell.splam_rmse += scores[ci * reps + rep][0] / static_cast<double>(reps);
      cell.spam_rmse += scores[ci * reps + rep][1] / static_cast<double>(reps);
      cell.lasso_rmse += scores[ci * reps + rep][2] / static_cast<double>(reps);
    }
    const double best = std::min({cell.splam_rmse, cell.spam_rmse, cell.lasso_rmse});
    const bool s1 = cell.splam_rmse <= best + wm.tie_tol;
    const bool s2 = cell.spam_rmse <= best + wm.tie_tol;
    const bool s3 = cell.lasso_rmse <= best + wm.tie_tol;
    if (s1 + s2 + s3 > 1) {
      cell.winner = "tie";
    } else if (s1) {
      cell.winner = "splam";
    } else if (s2) {
      cell.winner = "spam";
    } else {
      cell.winner = "lasso";
    }
    out[ci] = std::move(cell);
  }
  return out;
}

}  // namespace splam
