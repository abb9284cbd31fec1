#pragma once

#include <Eigen/Dense>
#include <fstream>
#include <json.hpp>
#include <stdexcept>
#include <string>
#include <vector>

#include "splam/solvers.hpp"
#include "splam/spline_basis.hpp"

namespace splam {

inline constexpr int kBundleSchemaVersion = 1;

inline const char* loss_name(LossKind k) {
  return k == LossKind::quadratic ? "quadratic" : "logistic";
}

inline LossKind loss_from_name(const std::string& s) {
  if (s == "quadratic") return LossKind::quadratic;
  if (s == "logistic") return LossKind::logistic;
  throw std::runtime_error("unknown loss kind: " + s);
}

/// A fitted model with everything prediction needs: per-feature
/// standardization, knots, dropped-column masks, R factors, and the
/// Q-coordinate coefficients. Field order in the JSON bundle follows the
/// member order here.
class Model {
 public:
  struct Feature {
    double mean = 0.0;
    double scale = 1.0;
    KnotChoice knots;
    std::vector<double> basis_means;  // expanded-column centering
    std::vector<bool> kept;
    Mat r;       // kept-column triangular factor
    Vec coef_q;  // coefficients in Q coordinates
    Vec theta;   // R^{-1} coef_q, derived on construction/load
  };

  int schema_version = kBundleSchemaVersion;
  LossKind loss = LossKind::quadratic;
  double lambda = 0.0;
  double alpha = 1.0;
  double intercept = 0.0;  // quadratic: response offset; logistic: beta_0
  std::vector<Feature> features;
  std::vector<FeatureStatus> status;

  static Model from_fit(const BlockDesign& design, const Problem& prob, const FitResult& fit,
                        double lambda, double alpha) {
    Model m;
    m.loss = prob.loss;
    m.lambda = lambda;
    m.alpha = alpha;
    m.intercept = prob.loss == LossKind::quadratic ? prob.y_offset : fit.coef.intercept;
    m.status = fit.status;
    m.features.resize(static_cast<std::size_t>(design.n_features));
    for (int j = 0; j < design.n_features; ++j) {
      const auto js = static_cast<std::size_t>(j);
      Feature& f = m.features[js];
      f.mean = design.mean[js];
      f.scale = design.scale[js];
      f.knots = design.knots[js];
      f.basis_means = design.col_means[js];
      f.kept = design.kept[js];
      f.r = design.R[js];
      f.coef_q = fit.coef.blocks[js];
      f.theta = solve_theta(f.r, f.coef_q);
    }
    return m;
  }

  int n_features() const { return static_cast<int>(features.size()); }

  /// Linear predictor (plus offset/intercept) on raw feature rows.
  Vec predict(const Mat& x_raw) const {
    if (static_cast<int>(x_raw.cols()) != n_features())
      throw std::runtime_error("feature count mismatch: model has " +
                               std::to_string(n_features()) + ", input has " +
                               std::to_string(x_raw.cols()));
    Vec u = Vec::Constant(x_raw.rows(), intercept);
    std::vector<double> row;
    for (int j = 0; j < n_features(); ++j) {
      const auto& f = features[static_cast<std::size_t>(j)];
      if (f.theta.size() == 0 || f.theta.isZero(0.0)) continue;
      const int width = expanded_width(f.knots);
      row.resize(static_cast<std::size_t>(width));
      for (Eigen::Index i = 0; i < x_raw.rows(); ++i) {
        const double z = (x_raw(i, j) - f.mean) / f.scale;
        expand_into(z, f.knots, row.data());
        double dot = 0.0;
        int c = 0;
        for (int k = 0; k < width; ++k) {
          if (f.kept[static_cast<std::size_t>(k)]) {
            dot += (row[static_cast<std::size_t>(k)] - f.basis_means[static_cast<std::size_t>(k)]) *
                   f.theta[c++];
          }
        }
        u[i] += dot;
      }
    }
    return u;
  }

  /// Logistic models: P(y = +1 | x).
  Vec predict_probability(const Mat& x_raw) const {
    if (loss != LossKind::logistic)
      throw std::runtime_error("probabilities are only defined for logistic models");
    Vec u = predict(x_raw);
    for (Eigen::Index i = 0; i < u.size(); ++i) u[i] = detail::sigmoid(u[i]);
    return u;
  }

  /// Logistic models: the +-1 label from the sign of the predictor.
  Vec predict_label(const Mat& x_raw) const {
    Vec u = predict(x_raw);
    for (Eigen::Index i = 0; i < u.size(); ++i) u[i] = u[i] >= 0.0 ? 1.0 : -1.0;
    return u;
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["schema_version"] = schema_version;
    j["loss"] = loss_name(loss);
    j["lambda"] = lambda;
    j["alpha"] = alpha;
    j["intercept"] = intercept;
    j["features"] = nlohmann::ordered_json::array();
    for (const auto& f : features) {
      nlohmann::ordered_json jf;
      jf["mean"] = f.mean;
      jf["scale"] = f.scale;
      jf["knots"] = f.knots.knots;
      jf["linear_only"] = f.knots.linear_only;
      jf["basis_means"] = f.basis_means;
      jf["kept"] = f.kept;
      nlohmann::ordered_json rows = nlohmann::ordered_json::array();
      for (Eigen::Index r = 0; r < f.r.rows(); ++r) {
        std::vector<double> row(static_cast<std::size_t>(f.r.cols()));
        for (Eigen::Index c = 0; c < f.r.cols(); ++c) row[static_cast<std::size_t>(c)] = f.r(r, c);
        rows.push_back(row);
      }
      jf["r"] = std::move(rows);
      jf["coef"] = std::vector<double>(f.coef_q.data(), f.coef_q.data() + f.coef_q.size());
      j["features"].push_back(std::move(jf));
    }
    j["status"] = nlohmann::ordered_json::array();
    for (auto s : status) j["status"].push_back(status_name(s));
    return j;
  }

  static Model from_json(const nlohmann::json& j) {
    Model m;
    m.schema_version = j.at("schema_version").get<int>();
    if (m.schema_version > kBundleSchemaVersion) {
      throw std::runtime_error("unsupported bundle schema version " +
                               std::to_string(m.schema_version));
    }
    m.loss = loss_from_name(j.at("loss").get<std::string>());
    m.lambda = j.at("lambda").get<double>();
    m.alpha = j.at("alpha").get<double>();
    m.intercept = j.at("intercept").get<double>();
    for (const auto& jf : j.at("features")) {
      Feature f;
      f.mean = jf.at("mean").get<double>();
      f.scale = jf.at("scale").get<double>();
      f.knots.knots = jf.at("knots").get<std::vector<double>>();
      f.knots.linear_only = jf.at("linear_only").get<bool>();
      f.basis_means = jf.at("basis_means").get<std::vector<double>>();
      f.kept = jf.at("kept").get<std::vector<bool>>();
      const auto& rows = jf.at("r");
      const auto mk = static_cast<Eigen::Index>(rows.size());
      f.r.resize(mk, mk);
      for (Eigen::Index r = 0; r < mk; ++r) {
        const auto row = rows[static_cast<std::size_t>(r)].get<std::vector<double>>();
        if (static_cast<Eigen::Index>(row.size()) != mk)
          throw std::runtime_error("malformed bundle: r is not square");
        for (Eigen::Index c = 0; c < mk; ++c) f.r(r, c) = row[static_cast<std::size_t>(c)];
      }
      const auto coef = jf.at("coef").get<std::vector<double>>();
      f.coef_q = Eigen::Map<const Vec>(coef.data(), static_cast<Eigen::Index>(coef.size()));
      f.theta = solve_theta(f.r, f.coef_q);
      m.features.push_back(std::move(f));
    }
    for (const auto& s : j.at("status")) {
      const std::string name = s.get<std::string>();
      if (name == "zero") {
        m.status.push_back(FeatureStatus::zero);
      } else if (name == "linear") {
        m.status.push_back(FeatureStatus::linear);
      } else if (name == "nonlinear") {
        m.status.push_back(FeatureStatus::nonlinear);
      } else {
        throw std::runtime_error("unknown feature status: " + name);
      }
    }
    return m;
  }

  void save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write bundle: " + path);
    out << to_json().dump(2) << '\n';
  }

  static Model load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read bundle: " + path);
    nlohmann::json j;
    in >> j;
    return from_json(j);
  }

 private:
  static Vec solve_theta(const Mat& r, const Vec& coef_q) {
    if (coef_q.size() == 0) return coef_q;
    return r.triangularView<Eigen::Upper>().solve(coef_q);
  }
};

}  // namespace splam
