#ifndef SMOOTHMIX_QUADRATURE_HPP
#define SMOOTHMIX_QUADRATURE_HPP

#include <functional>

#include <Eigen/Dense>

#include "smoothmix/mixture.hpp"
#include "smoothmix/root_mixture.hpp"

namespace smoothmix::quadrature {

/// Axis-aligned integration boxes cover every component mean plus/minus
/// `nsigma` component standard deviations; the truncated mass is far
/// below every tolerance used here.
struct Box {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;
};

Box support_box(const GaussianMixture& f, double nsigma = 8.0);
Box support_box(const RootMixture& rm, double nsigma = 8.0);

/// Adaptive Simpson to an absolute tolerance. Throws NumericError when
/// the recursion cannot reach the tolerance.
double integrate_1d(const std::function<double(double)>& fn, double lo,
                    double hi, double abs_tol = 1e-12);

/// Tensor Gauss-Legendre with node doubling until successive values agree
/// to rel_target. Throws NumericError when refinement stalls.
double integrate_2d(const std::function<double(double, double)>& fn,
                    const Box& box, double rel_target = 1e-10);

/// Integral of an arbitrary pointwise function over the box of f (D<=2).
double integrate_over(const GaussianMixture& f,
                      const std::function<double(const Eigen::VectorXd&)>& fn);

double mass(const GaussianMixture& f);
Eigen::VectorXd mean(const GaussianMixture& f);
Eigen::MatrixXd covariance(const GaussianMixture& f);

/// int |grad f|^2 / f over the region where f exceeds a 1e-300 floor.
double fi_mixture(const GaussianMixture& f);

/// 4 int |grad r|^2 with the root-mixture gradient summed pointwise.
double fi_root(const RootMixture& rm);

/// -int f log f over the region where f exceeds a 1e-300 floor.
double entropy(const GaussianMixture& f);

/// int |hessian f|_F^2, the simplified mean-curvature roughness.
double curvature(const GaussianMixture& f);

}  // namespace smoothmix::quadrature

#endif
