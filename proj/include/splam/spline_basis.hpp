#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace splam {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Interpolated sample quantile (linear between order statistics) of an
/// already-sorted vector.
inline double sorted_quantile(const std::vector<double>& sorted, double level) {
  const std::size_t n = sorted.size();
  if (n == 0) throw std::invalid_argument("quantile of empty sample");
  if (n == 1) return sorted[0];
  const double h = level * static_cast<double>(n - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= n) return sorted[n - 1];
  const double w = h - static_cast<double>(lo);
  return sorted[lo] + w * (sorted[lo + 1] - sorted[lo]);
}

/// Knot locations for one feature: the m interior quantiles at levels
/// k/(m+1), with exact duplicates removed. A constant column yields no knots
/// and is flagged linear-only (block width 1).
struct KnotChoice {
  std::vector<double> knots;
  bool linear_only = false;
};

inline KnotChoice choose_knots(const std::vector<double>& column, int m) {
  if (column.empty()) throw std::invalid_argument("empty feature");
  KnotChoice out;
  std::vector<double> sorted = column;
  std::sort(sorted.begin(), sorted.end());
  if (sorted.front() == sorted.back()) {
    out.linear_only = true;
    return out;
  }
  if (m <= 0) return out;
  for (int k = 1; k <= m; ++k) {
    const double q = sorted_quantile(sorted, static_cast<double>(k) / (m + 1));
    if (out.knots.empty() || q != out.knots.back()) out.knots.push_back(q);
  }
  return out;
}

inline KnotChoice choose_knots(const Vec& column, int m) {
  return choose_knots(std::vector<double>(column.data(), column.data() + column.size()), m);
}

/// Width of the expanded block: [x, x^2, x^3, (x-k_1)_+^3, ...], or just [x]
/// for a linear-only feature.
inline int expanded_width(const KnotChoice& kc) {
  return kc.linear_only ? 1 : 3 + static_cast<int>(kc.knots.size());
}

/// Truncated-power cubic basis row. The first entry is exactly x.
inline void expand_into(double x, const KnotChoice& kc, double* out) {
  if (!std::isfinite(x)) throw std::invalid_argument("non-finite feature value");
  out[0] = x;
  if (kc.linear_only) return;
  out[1] = x * x;
  out[2] = out[1] * x;
  for (std::size_t k = 0; k < kc.knots.size(); ++k) {
    const double d = x - kc.knots[k];
    out[3 + k] = d > 0.0 ? d * d * d : 0.0;
  }
}

inline Vec expand(double x, const KnotChoice& kc) {
  Vec row(expanded_width(kc));
  expand_into(x, kc, row.data());
  return row;
}

/// QR factors of one expanded block under the (1/N) Q^T Q = I convention:
/// Q columns have squared norm N and R absorbs the scaling. `kept` marks the
/// input columns that survived the rank check (R is kept x kept).
struct BlockFactor {
  Mat Q;
  Mat R;
  std::vector<bool> kept;
};

/// Modified Gram-Schmidt with reorthogonalization, preserving the linear
/// basis direction in the first column. Columns whose residual norm falls
/// below drop_tol * ||column|| are dropped as rank-deficient.
inline BlockFactor orthonormalize_block(const Mat& block, double drop_tol = 1e-10) {
  const auto n = block.rows();
  const auto m = block.cols();
  const double root_n = std::sqrt(static_cast<double>(n));
  BlockFactor out;
  out.kept.assign(static_cast<std::size_t>(m), false);
  Mat q(n, m);
  Mat r = Mat::Zero(m, m);
  Eigen::Index nkept = 0;
  for (Eigen::Index j = 0; j < m; ++j) {
    Vec v = block.col(j);
    const double col_norm = v.norm();
    // Two orthogonalization passes keep Q^T Q near machine precision even for
    // the badly conditioned truncated-power columns.
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index i = 0; i < nkept; ++i) {
        const double c = q.col(i).dot(v) / static_cast<double>(n);
        r(i, nkept) += c;
        v.noalias() -= c * q.col(i);
      }
    }
    const double res_norm = v.norm();
    if (res_norm <= drop_tol * col_norm || res_norm == 0.0) {
      if (j == 0) throw std::invalid_argument("rank-deficient linear column");
      r.col(nkept).setZero();
      continue;
    }
    q.col(nkept) = v * (root_n / res_norm);
    r(nkept, nkept) = res_norm / root_n;
    out.kept[static_cast<std::size_t>(j)] = true;
    ++nkept;
  }
  out.Q = q.leftCols(nkept);
  out.R = r.topLeftCorner(nkept, nkept);
  return out;
}

/// Expanded, per-block-orthonormalized design. Immutable once built; safe to
/// share across threads.
struct BlockDesign {
  Eigen::Index n_samples = 0;
  int n_features = 0;
  std::vector<Mat> Q;                 // per block, N x M_j with (1/N) Q^T Q = I
  std::vector<Mat> R;                 // per block, M_j x M_j upper triangular
  std::vector<KnotChoice> knots;      // standardized units
  std::vector<double> mean, scale;    // raw-feature standardization
  std::vector<std::vector<bool>> kept;  // mask over expanded columns
  // Per-feature means of the expanded columns. Each column is centered
  // before orthonormalization so no block spans the constant direction;
  // the unpenalized intercept carries it instead.
  std::vector<std::vector<double>> col_means;

  int block_size(int j) const { return static_cast<int>(Q[static_cast<std::size_t>(j)].cols()); }

  Eigen::Index total_cols() const {
    Eigen::Index t = 0;
    for (const auto& q : Q) t += q.cols();
    return t;
  }

  /// Applies the training-time transform to new raw data: standardize,
  /// expand, drop masked columns, and map into Q coordinates via R^{-1}.
  std::vector<Mat> transform(const Mat& X_raw) const;
};

struct BasisConfig {
  int knots = 10;           // m; block width 3 + m
  bool linear_only = false; // force M = 1 (Lasso-style design)
  double drop_tol = 1e-10;
};

namespace detail {

inline Mat expand_feature(const Vec& standardized, const KnotChoice& kc) {
  const int width = expanded_width(kc);
  Mat block(standardized.size(), width);
  std::vector<double> row(static_cast<std::size_t>(width));
  for (Eigen::Index i = 0; i < standardized.size(); ++i) {
    expand_into(standardized[i], kc, row.data());
    for (int c = 0; c < width; ++c) block(i, c) = row[static_cast<std::size_t>(c)];
  }
  return block;
}

}  // namespace detail

inline BlockDesign build_block_design(const Mat& X_raw, const BasisConfig& cfg = {}) {
  if (X_raw.rows() == 0 || X_raw.cols() == 0)
    throw std::invalid_argument("empty design matrix");
  BlockDesign d;
  d.n_samples = X_raw.rows();
  d.n_features = static_cast<int>(X_raw.cols());
  const auto n = X_raw.rows();
  d.Q.resize(static_cast<std::size_t>(d.n_features));
  d.R.resize(static_cast<std::size_t>(d.n_features));
  d.knots.resize(static_cast<std::size_t>(d.n_features));
  d.kept.resize(static_cast<std::size_t>(d.n_features));
  d.mean.resize(static_cast<std::size_t>(d.n_features));
  d.scale.resize(static_cast<std::size_t>(d.n_features));
  d.col_means.resize(static_cast<std::size_t>(d.n_features));
  for (int j = 0; j < d.n_features; ++j) {
    const auto js = static_cast<std::size_t>(j);
    const Vec col = X_raw.col(j);
    const double mu = col.mean();
    const double var = (col.array() - mu).square().sum() / static_cast<double>(n);
    const double sd = std::sqrt(var);
    d.mean[js] = mu;
    d.scale[js] = sd > 0.0 ? sd : 1.0;
    const Vec z = (col.array() - mu) / d.scale[js];
    KnotChoice kc;
    if (cfg.linear_only || sd == 0.0) {
      kc.linear_only = true;
    } else {
      kc = choose_knots(z, cfg.knots);
      // choose_knots never reports linear_only here: sd > 0 means the column
      // is non-constant.
    }
    d.knots[js] = kc;
    if (sd == 0.0) {
      // Degenerate constant feature: the standardized column is zero, so no
      // usable basis direction remains. The block is empty and the mask
      // records the dropped linear column.
      d.Q[js] = Mat(n, 0);
      d.R[js] = Mat(0, 0);
      d.kept[js] = {false};
      d.col_means[js] = {0.0};
      continue;
    }
    Mat block = detail::expand_feature(z, kc);
    d.col_means[js].resize(static_cast<std::size_t>(block.cols()));
    for (Eigen::Index c = 0; c < block.cols(); ++c) {
      const double cm = block.col(c).mean();
      d.col_means[js][static_cast<std::size_t>(c)] = cm;
      block.col(c).array() -= cm;
    }
    BlockFactor f = orthonormalize_block(block, cfg.drop_tol);
    d.Q[js] = std::move(f.Q);
    d.R[js] = std::move(f.R);
    d.kept[js] = std::move(f.kept);
  }
  return d;
}

inline std::vector<Mat> BlockDesign::transform(const Mat& X_raw) const {
  if (static_cast<int>(X_raw.cols()) != n_features)
    throw std::invalid_argument("feature count mismatch in transform");
  std::vector<Mat> out(static_cast<std::size_t>(n_features));
  for (int j = 0; j < n_features; ++j) {
    const auto js = static_cast<std::size_t>(j);
    const int mj = static_cast<int>(Q[js].cols());
    if (mj == 0) {
      out[js] = Mat(X_raw.rows(), 0);
      continue;
    }
    const Vec z = (X_raw.col(j).array() - mean[js]) / scale[js];
    Mat full = detail::expand_feature(z, knots[js]);
    for (Eigen::Index c = 0; c < full.cols(); ++c) {
      full.col(c).array() -= col_means[js][static_cast<std::size_t>(c)];
    }
    Mat kept_cols(X_raw.rows(), mj);
    int c = 0;
    for (std::size_t k = 0; k < kept[js].size(); ++k) {
      if (kept[js][k]) kept_cols.col(c++) = full.col(static_cast<Eigen::Index>(k));
    }
    // B = Q R on training data, so new rows map to Q coordinates as B R^{-1}.
    out[js] = R[js]
                  .triangularView<Eigen::Upper>()
                  .transpose()
                  .solve(kept_cols.transpose())
                  .transpose();
  }
  return out;
}

}  // namespace splam
