#ifndef SMOOTHMIX_TEST_UTIL_HPP
#define SMOOTHMIX_TEST_UTIL_HPP

#include <random>
#include <vector>

#include <Eigen/Dense>

#include "smoothmix/gaussian.hpp"
#include "smoothmix/mixture.hpp"
#include "smoothmix/root_mixture.hpp"

namespace testutil {

/// Random SPD matrix with eigenvalues comfortably away from zero so
/// quadrature boxes and Cholesky factors stay well conditioned.
inline Eigen::MatrixXd random_spd(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> diag(0.3, 1.5);
  Eigen::MatrixXd a(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) a(r, c) = normal(rng);
  Eigen::MatrixXd s = a * a.transpose() / dim;
  for (int r = 0; r < dim; ++r) s(r, r) += diag(rng);
  s = ((s + s.transpose()) / 2.0).eval();
  return s;
}

inline Eigen::VectorXd random_mean(int dim, std::mt19937_64& rng,
                                   double radius = 2.0) {
  std::uniform_real_distribution<double> u(-radius, radius);
  Eigen::VectorXd m(dim);
  for (int a = 0; a < dim; ++a) m(a) = u(rng);
  return m;
}

inline smoothmix::Gaussian random_gaussian(int dim, std::mt19937_64& rng) {
  return smoothmix::Gaussian(random_mean(dim, rng), random_spd(dim, rng));
}

inline smoothmix::GaussianMixture random_mixture(int dim, int k,
                                                 std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.2, 1.0);
  std::vector<smoothmix::WeightedComponent> comps;
  double total = 0.0;
  for (int i = 0; i < k; ++i) {
    comps.push_back({u(rng), random_gaussian(dim, rng)});
    total += comps.back().weight;
  }
  for (auto& c : comps) c.weight /= total;
  return smoothmix::GaussianMixture(std::move(comps), /*normalized=*/true);
}

inline smoothmix::RootMixture random_root(int dim, int r,
                                          std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.2, 1.0);
  std::vector<smoothmix::RootComponent> comps;
  for (int i = 0; i < r; ++i)
    comps.push_back({u(rng), random_gaussian(dim, rng)});
  return smoothmix::normalize(smoothmix::RootMixture(std::move(comps)));
}

}  // namespace testutil

#endif
