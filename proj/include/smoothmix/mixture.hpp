#ifndef SMOOTHMIX_MIXTURE_HPP
#define SMOOTHMIX_MIXTURE_HPP

#include <vector>

#include <Eigen/Dense>

#include "smoothmix/gaussian.hpp"

namespace smoothmix {

struct WeightedComponent {
  double weight;
  Gaussian gaussian;
};

/// Weighted sum of Gaussians f(x) = sum_i w_i N(x; m_i, C_i).
///
/// The `normalized` flag asserts positive weights with unit sum (checked
/// at construction, within 1e-9); unflagged mixtures may carry arbitrary
/// finite weights, e.g. intermediate products.
class GaussianMixture {
 public:
  explicit GaussianMixture(std::vector<WeightedComponent> components,
                           bool normalized = false);

  int dim() const { return components_.front().gaussian.dim(); }
  std::size_t size() const { return components_.size(); }
  bool normalized() const { return normalized_; }
  const std::vector<WeightedComponent>& components() const {
    return components_;
  }

  double eval(const Eigen::VectorXd& x) const;
  Eigen::VectorXd grad(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd hessian(const Eigen::VectorXd& x) const;

  /// sum_i w_i m_i
  Eigen::VectorXd mean() const;
  /// sum_i w_i (C_i + m_i m_i^T) - mean mean^T
  Eigen::MatrixXd covariance() const;

  /// E[x^k] for scalar mixtures, k in 1..4, from per-component Gaussian
  /// raw moments.
  double raw_moment_1d(int order) const;

  /// E[(x - mu)^k] about the mixture mean, k in 1..4.
  double central_moment_1d(int order) const;

  /// P(a <= x <= b) for scalar mixtures; endpoints may be +-infinity.
  double interval_probability(double a, double b) const;

 private:
  std::vector<WeightedComponent> components_;
  bool normalized_;
};

}  // namespace smoothmix

#endif
