#include <catch2/catch_amalgamated.hpp>

#include "splam/spline_basis.hpp"
#include "test_helpers.hpp"

using namespace splam;

TEST_CASE("choose_knots places quantile knots", "[spline_basis]") {
  SECTION("median of a symmetric grid") {
    std::vector<double> grid(101);
    for (int i = 0; i <= 100; ++i) grid[static_cast<std::size_t>(i)] = i / 100.0;
    const auto kc = choose_knots(grid, 1);
    REQUIRE(kc.knots.size() == 1);
    REQUIRE_THAT(kc.knots[0], Catch::Matchers::WithinAbs(0.5, 1e-12));
    REQUIRE_FALSE(kc.linear_only);
  }

  SECTION("constant column is linear-only with no knots") {
    const std::vector<double> constant(40, 3.0);
    const auto kc = choose_knots(constant, 10);
    REQUIRE(kc.knots.empty());
    REQUIRE(kc.linear_only);
    REQUIRE(expanded_width(kc) == 1);
  }

  SECTION("normal sample knots match the sort-based quantile oracle") {
    Rng rng(1234);
    std::vector<double> sample(10000);
    for (auto& v : sample) v = rng.normal();
    const auto kc = choose_knots(sample, 10);
    REQUIRE(kc.knots.size() == 10);
    for (int k = 1; k <= 10; ++k) {
      const double expected = test_util::quantile_oracle(sample, k / 11.0);
      REQUIRE_THAT(kc.knots[static_cast<std::size_t>(k - 1)],
                   Catch::Matchers::WithinAbs(expected, 1e-12));
    }
  }

  SECTION("duplicate quantiles collapse") {
    // Heavily discrete column: most mass at 0, so neighboring quantile
    // levels hit the same value.
    std::vector<double> column(100, 0.0);
    column[98] = 1.0;
    column[99] = 2.0;
    const auto kc = choose_knots(column, 10);
    REQUIRE(kc.knots.size() == 1);
    REQUIRE(kc.knots[0] == 0.0);
  }

  SECTION("empty column is an error") {
    REQUIRE_THROWS_WITH(choose_knots(std::vector<double>{}, 3), "empty feature");
  }
}

TEST_CASE("expand produces the truncated-power cubic row", "[spline_basis]") {
  KnotChoice kc;
  kc.knots = {1.0};

  SECTION("zero input with positive knots is the zero row") {
    KnotChoice many;
    many.knots = {0.5, 1.0, 2.0};
    const Vec row = expand(0.0, many);
    REQUIRE(row.size() == 6);
    REQUIRE(row.isZero(0.0));
  }

  SECTION("x = 2 with knot 1") {
    const Vec row = expand(2.0, kc);
    REQUIRE(row.size() == 4);
    REQUIRE(row[0] == 2.0);
    REQUIRE(row[1] == 4.0);
    REQUIRE(row[2] == 8.0);
    REQUIRE(row[3] == 1.0);
  }

  SECTION("negative part truncates to zero") {
    const Vec row = expand(-1.0, kc);
    REQUIRE(row[0] == -1.0);
    REQUIRE(row[1] == 1.0);
    REQUIRE(row[2] == -1.0);
    REQUIRE(row[3] == 0.0);
  }

  SECTION("first coordinate is exactly x") {
    Rng rng(7);
    for (int rep = 0; rep < 50; ++rep) {
      const double x = rng.uniform(-10.0, 10.0);
      REQUIRE(expand(x, kc)[0] == x);
    }
  }

  SECTION("non-finite input is rejected") {
    REQUIRE_THROWS_AS(expand(std::numeric_limits<double>::quiet_NaN(), kc),
                      std::invalid_argument);
  }
}

TEST_CASE("orthonormalize_block satisfies the (1/N) Q^T Q = I convention", "[spline_basis]") {
  SECTION("idempotent on an already orthonormal block") {
    // Columns with squared norm N and zero cross products.
    Mat block(4, 2);
    block << 1, 1, 1, -1, -1, 1, -1, -1;
    const auto f = orthonormalize_block(block);
    REQUIRE((f.Q - block).norm() < 1e-12);
    REQUIRE((f.R - Mat::Identity(2, 2)).norm() < 1e-12);
  }

  SECTION("hand 2x2 Gram-Schmidt") {
    Mat block(2, 2);
    block << 1, 1, 1, -1;
    const auto f = orthonormalize_block(block);
    const Mat gram = f.Q.transpose() * f.Q / 2.0;
    REQUIRE((gram - Mat::Identity(2, 2)).norm() < 1e-12);
    REQUIRE((f.Q * f.R - block).norm() < 1e-12);
    // First Q column spans the first raw column.
    REQUIRE(std::abs(f.Q(0, 0) - f.Q(1, 0)) < 1e-12);
  }

  SECTION("random block reconstructs") {
    Rng rng(99);
    const Mat block = test_util::random_matrix(rng, 100, 5);
    const auto f = orthonormalize_block(block);
    REQUIRE((f.Q * f.R - block).norm() / block.norm() <= 1e-10);
    const Mat gram = f.Q.transpose() * f.Q / 100.0;
    REQUIRE((gram - Mat::Identity(5, 5)).norm() < 1e-8);
    for (Eigen::Index i = 0; i < f.R.rows(); ++i) REQUIRE(f.R(i, i) > 0.0);
  }

  SECTION("exactly collinear column is dropped") {
    Rng rng(4);
    Mat block(50, 3);
    block.col(0) = test_util::random_vector(rng, 50);
    block.col(1) = 2.0 * block.col(0);
    block.col(2) = test_util::random_vector(rng, 50);
    const auto f = orthonormalize_block(block);
    REQUIRE(f.Q.cols() == 2);
    REQUIRE(f.kept == std::vector<bool>{true, false, true});
  }

  SECTION("rank-deficient linear column is an error") {
    Mat block = Mat::Zero(10, 2);
    block.col(1) = Vec::LinSpaced(10, 0.0, 1.0);
    REQUIRE_THROWS_AS(orthonormalize_block(block), std::invalid_argument);
  }
}

TEST_CASE("block design invariants hold on random data", "[spline_basis]") {
  Rng rng(2024);
  const Eigen::Index n = 200;
  Mat x(n, 4);
  for (Eigen::Index i = 0; i < n; ++i) {
    x(i, 0) = rng.uniform(-2.5, 2.5);
    x(i, 1) = rng.uniform(0.0, 1.0);
    x(i, 2) = rng.normal();
    x(i, 3) = 7.0;  // constant feature
  }
  BasisConfig cfg;
  cfg.knots = 5;
  const BlockDesign d = build_block_design(x, cfg);

  SECTION("orthonormality and reconstruction") {
    for (int j = 0; j < 3; ++j) {
      const auto js = static_cast<std::size_t>(j);
      const Mat gram = d.Q[js].transpose() * d.Q[js] / static_cast<double>(n);
      REQUIRE((gram - Mat::Identity(gram.rows(), gram.cols())).norm() < 1e-8);
      // Rebuild the expanded block from scratch (centered the same way)
      // and compare kept columns.
      const Vec z = (x.col(j).array() - d.mean[js]) / d.scale[js];
      Mat expanded = detail::expand_feature(z, d.knots[js]);
      for (Eigen::Index c = 0; c < expanded.cols(); ++c) {
        expanded.col(c).array() -= d.col_means[js][static_cast<std::size_t>(c)];
      }
      Mat kept_cols(n, d.Q[js].cols());
      int c = 0;
      for (std::size_t k = 0; k < d.kept[js].size(); ++k) {
        if (d.kept[js][k]) kept_cols.col(c++) = expanded.col(static_cast<Eigen::Index>(k));
      }
      REQUIRE((d.Q[js] * d.R[js] - kept_cols).norm() / kept_cols.norm() < 1e-8);
    }
  }

  SECTION("first Q column spans the standardized feature") {
    for (int j = 0; j < 3; ++j) {
      const auto js = static_cast<std::size_t>(j);
      const Vec z = (x.col(j).array() - d.mean[js]) / d.scale[js];
      const double cos = std::abs(d.Q[js].col(0).dot(z)) / (d.Q[js].col(0).norm() * z.norm());
      REQUIRE_THAT(cos, Catch::Matchers::WithinAbs(1.0, 1e-10));
    }
  }

  SECTION("constant feature degenerates to an empty block") {
    REQUIRE(d.Q[3].cols() == 0);
    REQUIRE(d.knots[3].linear_only);
    REQUIRE(d.kept[3] == std::vector<bool>{false});
  }

  SECTION("transform on training data reproduces Q") {
    const auto blocks = d.transform(x);
    for (int j = 0; j < 4; ++j) {
      const auto js = static_cast<std::size_t>(j);
      if (d.Q[js].cols() == 0) continue;
      REQUIRE((blocks[js] - d.Q[js]).norm() / d.Q[js].norm() < 1e-9);
    }
  }
}

TEST_CASE("linear in Q coordinates iff linear in raw spline coordinates", "[spline_basis]") {
  // If beta_j in Q coordinates has only its first entry nonzero, then
  // theta_j = R^{-1} beta_j has only its first entry nonzero, because R^{-1}
  // is upper triangular. Checked on random blocks.
  Rng rng(11);
  for (int rep = 0; rep < 20; ++rep) {
    const Mat block = test_util::random_matrix(rng, 60, 5);
    const auto f = orthonormalize_block(block);
    Vec beta = Vec::Zero(f.Q.cols());
    beta[0] = rng.normal();
    const Vec theta = f.R.triangularView<Eigen::Upper>().solve(beta);
    REQUIRE(std::abs(theta[0]) > 0.0);
    REQUIRE(theta.tail(theta.size() - 1).isZero(1e-14));
  }
}
