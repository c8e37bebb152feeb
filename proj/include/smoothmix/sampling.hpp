#ifndef SMOOTHMIX_SAMPLING_HPP
#define SMOOTHMIX_SAMPLING_HPP

#include <cstdint>
#include <random>

#include <Eigen/Dense>

#include "smoothmix/mixture.hpp"

namespace smoothmix::sampling {

Eigen::VectorXd draw(const Gaussian& g, std::mt19937_64& rng);

/// Draws from a normalized mixture: categorical over weights, then the
/// selected component.
Eigen::VectorXd draw(const GaussianMixture& f, std::mt19937_64& rng);

struct MomentEstimate {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
  Eigen::VectorXd mean_se;  // per-axis standard error of the mean
};

MomentEstimate mc_moments(const GaussianMixture& f, std::size_t n,
                          std::uint64_t seed);

struct ScalarEstimate {
  double value;
  double se;
};

/// Monte-Carlo estimate of E[(x-a)^T M (x-b)] under g.
ScalarEstimate mc_bilinear(const Eigen::MatrixXd& M, const Eigen::VectorXd& a,
                           const Eigen::VectorXd& b, const Gaussian& g,
                           std::size_t n, std::uint64_t seed);

}  // namespace smoothmix::sampling

#endif
