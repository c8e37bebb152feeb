#ifndef SMOOTHMIX_GAUSSIAN_HPP
#define SMOOTHMIX_GAUSSIAN_HPP

#include <Eigen/Dense>

#include "smoothmix/common.hpp"

namespace smoothmix {

/// A single multivariate normal density N(x; m, C).
///
/// The covariance is kept together with its lower Cholesky factor; all
/// inverses are realized as triangular solves against that factor.
/// Construction fails for non-symmetric or non-positive-definite
/// covariances. Instances are immutable.
class Gaussian {
 public:
  Gaussian(Eigen::VectorXd mean, Eigen::MatrixXd cov);

  int dim() const { return static_cast<int>(mean_.size()); }
  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::MatrixXd& cov() const { return cov_; }
  /// Lower-triangular L with C = L L^T.
  const Eigen::MatrixXd& chol() const { return chol_; }

  /// Density value at x. Strictly positive for finite x.
  double eval(const Eigen::VectorXd& x) const;
  double log_eval(const Eigen::VectorXd& x) const;

  /// Gradient of the density: -C^{-1}(x - m) * eval(x).
  Eigen::VectorXd grad(const Eigen::VectorXd& x) const;

  /// Hessian of the density:
  /// eval(x) * (C^{-1}(x-m)(x-m)^T C^{-1} - C^{-1}).
  Eigen::MatrixXd hessian(const Eigen::VectorXd& x) const;

  /// C^{-1}, assembled from triangular solves.
  Eigen::MatrixXd precision() const;

  /// Solves C u = v.
  Eigen::VectorXd solve(const Eigen::VectorXd& v) const;

 private:
  Eigen::VectorXd mean_;
  Eigen::MatrixXd cov_;
  Eigen::MatrixXd chol_;
  double log_norm_;  // -1/2 log|2 pi C|
};

/// Result of multiplying two Gaussian densities pointwise:
/// f1(x) f2(x) = scale * N(x; mean3, cov3).
struct GaussianProduct {
  double scale;
  Gaussian gaussian;
};

/// Pointwise product of two Gaussian densities. The scale equals
/// N(0; m1 - m2, C1 + C2) and shrinks with the distance between the
/// means; the product Gaussian has cov (C1^{-1}+C2^{-1})^{-1}.
GaussianProduct product(const Gaussian& g1, const Gaussian& g2);

/// E_{x~g}[(x-a)^T M (x-b)] = tr(M C) + (m-a)^T M (m-b).
/// Holds for any square M, symmetric or not.
double bilinear_expectation(const Eigen::MatrixXd& M, const Eigen::VectorXd& a,
                            const Eigen::VectorXd& b, const Gaussian& g);

/// Standard normal CDF, via the complementary error function.
double normal_cdf(double z);

/// P(a <= x <= b) for a scalar Gaussian; endpoints may be +-infinity.
double interval_mass(const Gaussian& g, double a, double b);

}  // namespace smoothmix

#endif
