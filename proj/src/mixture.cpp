#include "smoothmix/mixture.hpp"

#include <cmath>

namespace smoothmix {

GaussianMixture::GaussianMixture(std::vector<WeightedComponent> components,
                                 bool normalized)
    : components_(std::move(components)), normalized_(normalized) {
  require(!components_.empty(), "GaussianMixture: needs at least 1 component");
  const int d = components_.front().gaussian.dim();
  for (const auto& c : components_) {
    require(c.gaussian.dim() == d,
            "GaussianMixture: component dimensions differ");
    require(std::isfinite(c.weight), "GaussianMixture: non-finite weight");
  }
  if (normalized_) {
    double sum = 0.0;
    for (const auto& c : components_) {
      require(c.weight > 0.0,
              "GaussianMixture: normalized mixture needs positive weights");
      sum += c.weight;
    }
    require(std::abs(sum - 1.0) <= 1e-9,
            "GaussianMixture: normalized mixture weights must sum to one");
  }
}

double GaussianMixture::eval(const Eigen::VectorXd& x) const {
  double v = 0.0;
  for (const auto& c : components_) v += c.weight * c.gaussian.eval(x);
  return v;
}

Eigen::VectorXd GaussianMixture::grad(const Eigen::VectorXd& x) const {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(dim());
  for (const auto& c : components_) g += c.weight * c.gaussian.grad(x);
  return g;
}

Eigen::MatrixXd GaussianMixture::hessian(const Eigen::VectorXd& x) const {
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim(), dim());
  for (const auto& c : components_) h += c.weight * c.gaussian.hessian(x);
  return h;
}

Eigen::VectorXd GaussianMixture::mean() const {
  Eigen::VectorXd m = Eigen::VectorXd::Zero(dim());
  for (const auto& c : components_) m += c.weight * c.gaussian.mean();
  return m;
}

Eigen::MatrixXd GaussianMixture::covariance() const {
  const Eigen::VectorXd mu = mean();
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(dim(), dim());
  for (const auto& c : components_) {
    const auto& m = c.gaussian.mean();
    s += c.weight * (c.gaussian.cov() + m * m.transpose());
  }
  return s - mu * mu.transpose();
}

double GaussianMixture::raw_moment_1d(int order) const {
  require(dim() == 1, "raw_moment_1d: scalar mixtures only");
  require(order >= 1 && order <= 4, "raw_moment_1d: order must be in 1..4");
  double acc = 0.0;
  for (const auto& c : components_) {
    const double m = c.gaussian.mean()(0);
    const double s2 = c.gaussian.cov()(0, 0);
    double raw = 0.0;
    switch (order) {
      case 1: raw = m; break;
      case 2: raw = m * m + s2; break;
      case 3: raw = m * m * m + 3.0 * m * s2; break;
      case 4: raw = m * m * m * m + 6.0 * m * m * s2 + 3.0 * s2 * s2; break;
    }
    acc += c.weight * raw;
  }
  return acc;
}

double GaussianMixture::central_moment_1d(int order) const {
  require(dim() == 1, "central_moment_1d: scalar mixtures only");
  require(order >= 1 && order <= 4,
          "central_moment_1d: order must be in 1..4");
  const double mu = mean()(0);
  double acc = 0.0;
  // Per component, E[(x-mu)^k] = sum_j binom(k,j) d^(k-j) E[(x-m)^j] with
  // Gaussian central moments 0, s2, 0, 3 s2^2 and offset d = m - mu.
  for (const auto& c : components_) {
    const double d = c.gaussian.mean()(0) - mu;
    const double s2 = c.gaussian.cov()(0, 0);
    double cm = 0.0;
    switch (order) {
      case 1: cm = d; break;
      case 2: cm = d * d + s2; break;
      case 3: cm = d * d * d + 3.0 * d * s2; break;
      case 4:
        cm = d * d * d * d + 6.0 * d * d * s2 + 3.0 * s2 * s2;
        break;
    }
    acc += c.weight * cm;
  }
  return acc;
}

double GaussianMixture::interval_probability(double a, double b) const {
  require(dim() == 1, "interval_probability: scalar mixtures only");
  double p = 0.0;
  for (const auto& c : components_)
    p += c.weight * interval_mass(c.gaussian, a, b);
  return p;
}

}  // namespace smoothmix
