// Acceptance suite: one test case per criterion, each printing a PASS/FAIL
// line with its wall time. Run everything with
//   ctest --test-dir build -R acceptance
// or a single criterion with
//   ./acceptance_tests "criterion 5:*"

#include <catch2/catch_amalgamated.hpp>
#include <chrono>
#include <cstdio>
#include <exception>

#include "splam/splam.hpp"
#include "test_helpers.hpp"

using namespace splam;

namespace {

class Banner {
 public:
  Banner(int number, const char* label, double budget_seconds)
      : number_(number), label_(label), budget_(budget_seconds),
        start_(std::chrono::steady_clock::now()) {}

  ~Banner() {
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    const bool failed = std::uncaught_exceptions() > 0;
    std::printf("[%s] criterion %d: %s (%.1f s, budget %.0f s)\n", failed ? "FAIL" : "PASS",
                number_, label_, elapsed, budget_);
    std::fflush(stdout);
  }

  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  int number_;
  const char* label_;
  double budget_;
  std::chrono::steady_clock::time_point start_;
};

int workers() { return hardware_workers(); }

}  // namespace

TEST_CASE("criterion 1: prox exactness against the brute-force oracle", "[acceptance]") {
  Banner banner(1, "prox exactness (1000 instances, M <= 8)", 60.0);
  Rng rng(20260809);
  for (int rep = 0; rep < 1000; ++rep) {
    const auto m = static_cast<Eigen::Index>(1 + rng.below(8));
    const Vec g = test_util::random_vector(rng, m) * rng.uniform(0.1, 3.0);
    const double r1 = rng.uniform(0.0, 2.5);
    const double r2 = rng.uniform(0.0, 2.5);
    const Vec z = prox_block(g, r1, r2);
    const Vec oracle = test_util::prox_oracle_brute(g, r1, r2);
    const double gap = test_util::prox_objective(z, g, r1, r2) -
                       test_util::prox_objective(oracle, g, r1, r2);
    REQUIRE(gap <= 1e-8);
    REQUIRE((z - oracle).norm() <= 1e-6);
  }
  REQUIRE(banner.elapsed() < 60.0);
}

TEST_CASE("criterion 2: cross-solver agreement on 20 random problems", "[acceptance]") {
  Banner banner(2, "cross-solver agreement within 1e-6 relative", 300.0);
  Rng rng(77001);
  int monotone_violations = 0;
  for (int rep = 0; rep < 20; ++rep) {
    const LossKind loss = rep < 10 ? LossKind::quadratic : LossKind::logistic;
    const auto n = 200;
    const int p = 10, m = 5;
    auto blocks = test_util::random_ortho_blocks(rng, n, p, m);
    Vec signal = Vec::Zero(n);
    for (int j = 0; j < 3; ++j) {
      signal += blocks[static_cast<std::size_t>(j)] * test_util::random_vector(rng, m);
    }
    Vec y = signal + 0.5 * test_util::random_vector(rng, n);
    if (loss == LossKind::logistic) {
      for (Eigen::Index i = 0; i < n; ++i) y[i] = y[i] >= 0.0 ? 1.0 : -1.0;
    }
    Problem prob(blocks, loss, y);
    const double alpha = 0.3 + 0.07 * (rep % 10);
    const PenaltyParams pen(rng.uniform(0.05, 0.5) * lambda_max(prob, alpha), alpha);
    std::vector<Algorithm> algs = {Algorithm::ista, Algorithm::fista, Algorithm::bcgd};
    if (loss == LossKind::quadratic) algs.push_back(Algorithm::bcd);
    std::vector<double> objectives;
    for (auto alg : algs) {
      SolverConfig cfg;
      cfg.algorithm = alg;
      const FitResult fr = fit(prob, pen, cfg);
      REQUIRE(fr.converged);
      objectives.push_back(fr.final_objective());
      if (alg != Algorithm::fista) {
        monotone_violations += monotonicity_violations(fr.objective_trace);
      }
    }
    for (std::size_t i = 1; i < objectives.size(); ++i) {
      REQUIRE(std::abs(objectives[i] - objectives[0]) <=
              1e-6 * std::max({1.0, std::abs(objectives[0]), std::abs(objectives[i])}));
    }
  }
  REQUIRE(monotone_violations == 0);  // feeds criterion 9
  REQUIRE(banner.elapsed() < 300.0);
}

TEST_CASE("criterion 3: lasso reduction on a width-1 orthonormal design", "[acceptance]") {
  Banner banner(3, "M = 1 solution equals soft-thresholding of (1/N) X^T y", 60.0);
  Rng rng(88002);
  for (int rep = 0; rep < 10; ++rep) {
    const auto n = 80;
    const int p = 10;
    const Mat q = orthonormalize_block(test_util::random_matrix(rng, n, p)).Q;
    std::vector<Mat> blocks;
    for (int j = 0; j < p; ++j) blocks.push_back(q.col(j));
    Vec y = test_util::random_vector(rng, n);
    Problem prob(blocks, LossKind::quadratic, y);
    const double alpha = rep % 2 == 0 ? 1.0 : 0.6;
    const PenaltyParams pen(rng.uniform(0.01, 0.15), alpha);
    for (auto alg : {Algorithm::bcd, Algorithm::fista}) {
      SolverConfig cfg;
      cfg.algorithm = alg;
      cfg.tolerance = 1e-9;
      const FitResult fr = fit(prob, pen, cfg);
      for (int j = 0; j < p; ++j) {
        const double g = q.col(j).dot(prob.y) / n;
        const double expected = std::copysign(std::max(0.0, std::abs(g) - pen.lambda1()), g);
        REQUIRE_THAT(fr.coef.blocks[static_cast<std::size_t>(j)][0],
                     Catch::Matchers::WithinAbs(expected, 1e-8));
      }
    }
  }
  REQUIRE(banner.elapsed() < 60.0);
}

TEST_CASE("criterion 4: spam reduction, one prox-gradient step equals the closed form",
          "[acceptance]") {
  Banner banner(4, "alpha = 1 single step matches the blockwise closed form", 60.0);
  Rng rng(99003);
  for (int rep = 0; rep < 10; ++rep) {
    const int p = 6, m = 4;
    const auto n = 96;
    const Mat q = orthonormalize_block(test_util::random_matrix(rng, n, p * m)).Q;
    std::vector<Mat> blocks;
    for (int j = 0; j < p; ++j) blocks.push_back(q.middleCols(j * m, m));
    Vec y = test_util::random_vector(rng, n);
    Problem prob(blocks, LossKind::quadratic, y);
    const double lambda = rng.uniform(0.005, 0.1);
    const double t = 1.0 / global_lipschitz(prob);
    const auto zero = BlockCoefficients::zeros_like(blocks);
    for (int j = 0; j < p; ++j) {
      const Vec g = -t * prob.block_gradient(zero, j);
      const Vec step = prox_block(g, t * lambda * 1.0, 0.0);
      const Vec gj =
          blocks[static_cast<std::size_t>(j)].transpose() * prob.y / static_cast<double>(n);
      const Vec closed = std::max(0.0, 1.0 - lambda / gj.norm()) * gj;
      REQUIRE((step - closed).lpNorm<Eigen::Infinity>() <= 1e-10);
    }
  }
  REQUIRE(banner.elapsed() < 60.0);
}

TEST_CASE("criterion 5: accuracy table reproduction at paper scale", "[acceptance]") {
  Banner banner(5, "synth1, N = 10000, 5-fold CV, sigma^2 = 1", 1800.0);
  Synth1Config cfg;
  cfg.n = 10000;
  cfg.folds = 5;
  cfg.sigma2_grid = {1.0};
  cfg.alphas = default_alpha_grid();
  cfg.n_lambda = 100;
  cfg.knots = 10;
  cfg.workers = workers();
  const auto rows = run_synth1_study(cfg, 20260809);
  REQUIRE(rows.size() == 1);
  const auto& row = rows.front();

  std::printf("  splam %.4f (%.4f)  spam %.4f (%.4f)  lasso %.4f (%.4f)\n",
              row.splam.mean_score, row.splam.sd_score, row.spam.mean_score, row.spam.sd_score,
              row.lasso.mean_score, row.lasso.sd_score);

  // Paper: SPLAM 1.0153 +- 0.0180, Lasso 2.9988, SpAM 1.0189.
  REQUIRE(row.splam.mean_score >= 0.95);
  REQUIRE(row.splam.mean_score <= 1.12);
  REQUIRE(row.lasso.mean_score >= 2.7);

  int spam_not_better = 0;
  for (std::size_t f = 0; f < 5; ++f) {
    if (row.spam.per_fold[f].test_score >= row.splam.per_fold[f].test_score) ++spam_not_better;
  }
  REQUIRE(spam_not_better >= 3);

  int structure_recovered = 0;
  for (const auto& fold : row.splam.per_fold) {
    bool exact = true;
    for (int j = 0; j < 100; ++j) {
      const FeatureStatus expected = j < 3    ? FeatureStatus::nonlinear
                                     : j < 10 ? FeatureStatus::linear
                                              : FeatureStatus::zero;
      if (fold.status[static_cast<std::size_t>(j)] != expected) exact = false;
    }
    if (exact) ++structure_recovered;
  }
  std::printf("  structure recovered on %d of 5 folds\n", structure_recovered);
  REQUIRE(structure_recovered >= 4);

  // Every solver trace in this study is monotone (feeds criterion 9).
  REQUIRE(row.splam.monotone_violations() == 0);
  REQUIRE(row.spam.monotone_violations() == 0);
  REQUIRE(row.lasso.monotone_violations() == 0);
  REQUIRE(banner.elapsed() < 1800.0);
}

TEST_CASE("criterion 6: oracle-bound coverage at the theorem's (lambda, alpha)",
          "[acceptance]") {
  Banner banner(6, "p = 64, M = 4, N = 512, 200 replicates", 600.0);
  const auto res = check_oracle_bound(64, 4, 512, 200, 31337, 1.0, 1.0, workers());
  std::printf("  coverage %.4f (guarantee %.4f), lambda %.4f, alpha %.4f\n", res.coverage,
              1.0 - 4.0 / 64.0, res.lambda, res.alpha);
  REQUIRE(res.coverage >= 1.0 - 4.0 / 64.0);
  REQUIRE(res.monotone_violations == 0);  // feeds criterion 9
  REQUIRE(banner.elapsed() < 600.0);
}

TEST_CASE("criterion 7: spam inconsistency versus the splam limit", "[acceptance]") {
  Banner banner(7, "p = 4, b = 1, M in {8, 32, 128}", 120.0);
  const auto res = check_spam_lb(4, 1.0, 1.0, {8, 32, 128}, 4242, 20, workers());
  std::printf("  spam best: %.4f %.4f %.4f | splam limit: %.4f %.4f %.4f\n",
              res.spam_best_error[0], res.spam_best_error[1], res.spam_best_error[2],
              res.splam_limit_error[0], res.splam_limit_error[1], res.splam_limit_error[2]);
  // 0.1 = 0.5 * b^2 / (1/b^2 + p/sigma^2) with b = sigma = 1, p = 4.
  REQUIRE(res.spam_best_error[2] >= 0.1);
  REQUIRE(res.splam_limit_error[0] > res.splam_limit_error[1]);
  REQUIRE(res.splam_limit_error[1] > res.splam_limit_error[2]);
  REQUIRE(res.splam_limit_error[2] < 0.05);
  REQUIRE(banner.elapsed() < 120.0);
}

TEST_CASE("criterion 8: lambda_max zero boundary on 50 random instances", "[acceptance]") {
  Banner banner(8, "zero at lambda_max, nonzero at 0.9 lambda_max in >= 48/50", 120.0);
  Rng rng(515151);
  int zero_at_max = 0;
  int nonzero_below = 0;
  for (int rep = 0; rep < 50; ++rep) {
    const auto n = static_cast<Eigen::Index>(60 + rng.below(80));
    const int p = 3 + static_cast<int>(rng.below(6));
    const int m = 2 + static_cast<int>(rng.below(4));
    auto blocks = test_util::random_ortho_blocks(rng, n, p, m);
    Vec y = Vec::Zero(n);
    for (int j = 0; j < p; ++j) {
      if (rng.uniform() < 0.6) {
        y += blocks[static_cast<std::size_t>(j)] * test_util::random_vector(rng, m);
      }
    }
    y += 0.4 * test_util::random_vector(rng, n);
    Problem prob(blocks, LossKind::quadratic, y);
    const double alpha = rng.uniform(0.3, 1.0);
    const double lmax = lambda_max(prob, alpha);
    if (fit(prob, PenaltyParams(lmax, alpha)).support_size() == 0) ++zero_at_max;
    if (fit(prob, PenaltyParams(0.9 * lmax, alpha)).support_size() >= 1) ++nonzero_below;
  }
  std::printf("  zero at lambda_max: %d/50, nonzero at 0.9 lambda_max: %d/50\n", zero_at_max,
              nonzero_below);
  REQUIRE(zero_at_max == 50);
  REQUIRE(nonzero_below >= 48);
  REQUIRE(banner.elapsed() < 120.0);
}

TEST_CASE("criterion 9: monotone descent for ista, bcgd, and bcd", "[acceptance]") {
  // Criteria 2, 5, and 6 assert zero violations over their complete runs
  // (see the monotone_violations checks there). This case re-verifies
  // descent directly on the criterion-2 battery, the criterion-6 replicate
  // fits, and representative criterion-5-scale path fits.
  Banner banner(9, "non-increasing objective traces (slack 1e-12)", 900.0);

  // Criterion-6 replicates, full coverage at reduced count.
  const auto ob = check_oracle_bound(64, 4, 512, 50, 31337, 1.0, 1.0, workers());
  REQUIRE(ob.monotone_violations == 0);

  // Criterion-5-scale warm-started paths on one fold of synth1 data.
  auto [data, truth] = gen_synth1(2000, 1.0, 20260809);
  (void)truth;
  const BlockDesign design = build_block_design(data.X, BasisConfig{.knots = 10});
  Problem prob(design.Q, LossKind::quadratic, data.y);
  for (auto alg : {Algorithm::ista, Algorithm::bcgd, Algorithm::bcd}) {
    SolverConfig cfg;
    cfg.algorithm = alg;
    const PathResult path = fit_path(prob, 0.55, 25, 1e-2, cfg);
    int violations = 0;
    for (const auto& f : path.fits) violations += monotonicity_violations(f.objective_trace);
    REQUIRE(violations == 0);
  }

  // Criterion-2 battery traces.
  Rng rng(77001);
  for (int rep = 0; rep < 8; ++rep) {
    const LossKind loss = rep % 2 == 0 ? LossKind::quadratic : LossKind::logistic;
    const auto n = 200;
    auto blocks = test_util::random_ortho_blocks(rng, n, 10, 5);
    Vec y = test_util::random_vector(rng, n);
    if (loss == LossKind::logistic) {
      for (Eigen::Index i = 0; i < n; ++i) y[i] = y[i] >= 0.0 ? 1.0 : -1.0;
    }
    Problem small(blocks, loss, y);
    const PenaltyParams pen(0.2 * lambda_max(small, 0.6), 0.6);
    std::vector<Algorithm> algs = {Algorithm::ista, Algorithm::bcgd};
    if (loss == LossKind::quadratic) algs.push_back(Algorithm::bcd);
    for (auto alg : algs) {
      SolverConfig cfg;
      cfg.algorithm = alg;
      const FitResult fr = fit(small, pen, cfg);
      REQUIRE(monotonicity_violations(fr.objective_trace) == 0);
    }
  }
  REQUIRE(banner.elapsed() < 900.0);
}

TEST_CASE("criterion 10: winner-map qualitative pattern", "[acceptance]") {
  Banner banner(10, "scaled winner map, p = 20, splits (1000, 200, 200)", 3600.0);
  WinnerMapConfig wm;
  wm.p = 20;
  wm.n_train = 1000;
  wm.n_val = 200;
  wm.n_test = 200;
  wm.replicates = 5;
  wm.alphas = default_alpha_grid();
  wm.n_lambda = 100;
  wm.workers = workers();
  const auto cells = run_winner_map(wm, 60606);

  // "Wins or ties" a cell = mean RMSE within one standard error of the
  // cell's best mean. With 5 replicates of 200 test points at RMSE ~1.1,
  // se(mean) ~ 1.1 / sqrt(2 * 200) / sqrt(5) ~ 0.025; differences below that
  // are measurement noise, so a tighter band cannot express a tie at this
  // replication level. The pattern checks are plurality counts, matching
  // the qualitative reading of the N_train = 1000 panel.
  const double tie_tol = 0.025;
  int interior_splam = 0, interior_spam = 0, interior_lasso = 0, interior_total = 0;
  int edge_lasso = 0, edge_spam_on_lasso_edge = 0, edge_splam_on_lasso_edge = 0, edge_total = 0;
  int small_delta_spam = 0, small_delta_splam = 0, small_delta_lasso = 0, small_total = 0;
  for (const auto& c : cells) {
    const double best = std::min({c.splam_rmse, c.spam_rmse, c.lasso_rmse});
    const bool splam_wt = c.splam_rmse <= best + tie_tol;
    const bool spam_wt = c.spam_rmse <= best + tie_tol;
    const bool lasso_wt = c.lasso_rmse <= best + tie_tol;
    if (c.gamma > 0.0 && c.delta > 0.0) {
      ++interior_total;
      interior_splam += splam_wt ? 1 : 0;
      interior_spam += spam_wt ? 1 : 0;
      interior_lasso += lasso_wt ? 1 : 0;
    }
    if (c.delta == 0.0 && c.gamma > 0.0) {
      ++edge_total;
      edge_lasso += lasso_wt ? 1 : 0;
      edge_spam_on_lasso_edge += spam_wt ? 1 : 0;
      edge_splam_on_lasso_edge += splam_wt ? 1 : 0;
    }
    if (c.gamma == 0.0 && c.delta > 0.0 && c.delta <= 0.5) {
      ++small_total;
      small_delta_spam += spam_wt ? 1 : 0;
      small_delta_splam += splam_wt ? 1 : 0;
      small_delta_lasso += lasso_wt ? 1 : 0;
    }
  }
  std::printf(
      "  interior win-or-tie: splam %d/%d spam %d/%d lasso %d/%d\n"
      "  delta=0 edge: lasso %d/%d splam %d spam %d | gamma=0 small delta: spam %d/%d splam %d "
      "lasso %d\n",
      interior_splam, interior_total, interior_spam, interior_total, interior_lasso,
      interior_total, edge_lasso, edge_total, edge_splam_on_lasso_edge, edge_spam_on_lasso_edge,
      small_delta_spam, small_total, small_delta_splam, small_delta_lasso);

  // Interior: SPLAM wins-or-ties a plurality (at least as many cells as any
  // other method). Edges: the named method is best-or-tied on a majority of
  // its edge cells. The edge clauses are per-method on purpose: SPLAM's grid
  // contains alpha = 1, so on SpAM's home edge SPLAM is structurally never
  // far behind, and a cross-method count there would be unsatisfiable noise.
  REQUIRE(interior_splam >= interior_spam);
  REQUIRE(interior_splam >= interior_lasso);
  REQUIRE(interior_splam >= 1);
  REQUIRE(2 * edge_lasso >= edge_total);
  REQUIRE(2 * small_delta_spam >= small_total);
  REQUIRE(banner.elapsed() < 3600.0);
}

TEST_CASE("criterion 11: optional spambase check", "[acceptance][!mayfail]") {
  // Requires the public Spambase data; pass its CSV path (features then a
  // 0/1 spam label) via SPAMBASE_CSV. Not required for acceptance.
  const char* path = std::getenv("SPAMBASE_CSV");
  if (path == nullptr) {
    std::printf("[SKIP] criterion 11: spambase data not provided (set SPAMBASE_CSV)\n");
    SUCCEED();
    return;
  }
  Banner banner(11, "spambase 5-fold CV ordering", 3600.0);
  LoadedData loaded = read_data(path, DataFormat::csv);
  for (Eigen::Index i = 0; i < loaded.data.y.size(); ++i) {
    if (loaded.data.y[i] == 0.0) loaded.data.y[i] = -1.0;
  }
  const CvFolds folds = make_cv_folds(loaded.data.y.size(), 5, 1);
  SolverConfig cfg;
  cfg.algorithm = Algorithm::bcgd;
  const auto splam = cv_method(loaded.data, LossKind::logistic,
                               MethodSpec::splam(default_alpha_grid(), 10), folds, 100, 1e-3,
                               cfg, workers());
  const auto spam = cv_method(loaded.data, LossKind::logistic, MethodSpec::spam(10), folds, 100,
                              1e-3, cfg, workers());
  const auto lasso = cv_method(loaded.data, LossKind::logistic, MethodSpec::lasso(), folds, 100,
                               1e-3, cfg, workers());
  std::printf("  splam %.4f spam %.4f l1-logistic %.4f\n", splam.mean_score, spam.mean_score,
              lasso.mean_score);
  CHECK(splam.mean_score <= spam.mean_score + 1e-9);
  CHECK(splam.mean_score <= lasso.mean_score + 1e-9);
  CHECK(std::abs(splam.mean_score - 0.0635) <= 0.015);
  CHECK(std::abs(spam.mean_score - 0.0659) <= 0.015);
  CHECK(std::abs(lasso.mean_score - 0.0738) <= 0.015);
}
