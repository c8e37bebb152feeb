#include "smoothmix/sampling.hpp"

#include <cmath>

namespace smoothmix::sampling {

Eigen::VectorXd draw(const Gaussian& g, std::mt19937_64& rng) {
  std::normal_distribution<double> unit;
  Eigen::VectorXd z(g.dim());
  for (int i = 0; i < g.dim(); ++i) z(i) = unit(rng);
  return g.mean() + g.chol() * z;
}

Eigen::VectorXd draw(const GaussianMixture& f, std::mt19937_64& rng) {
  require(f.normalized(), "sampling::draw: mixture must be normalized");
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double u = unif(rng);
  double acc = 0.0;
  for (const auto& c : f.components()) {
    acc += c.weight;
    if (u <= acc) return draw(c.gaussian, rng);
  }
  return draw(f.components().back().gaussian, rng);
}

MomentEstimate mc_moments(const GaussianMixture& f, std::size_t n,
                          std::uint64_t seed) {
  require(n >= 2, "mc_moments: need at least 2 samples");
  std::mt19937_64 rng(seed);
  const int d = f.dim();
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(d);
  Eigen::MatrixXd sum_sq = Eigen::MatrixXd::Zero(d, d);
  for (std::size_t k = 0; k < n; ++k) {
    const Eigen::VectorXd x = draw(f, rng);
    sum += x;
    sum_sq += x * x.transpose();
  }
  MomentEstimate est;
  est.mean = sum / static_cast<double>(n);
  est.cov = sum_sq / static_cast<double>(n) - est.mean * est.mean.transpose();
  est.mean_se = (est.cov.diagonal() / static_cast<double>(n)).cwiseSqrt();
  return est;
}

ScalarEstimate mc_bilinear(const Eigen::MatrixXd& M, const Eigen::VectorXd& a,
                           const Eigen::VectorXd& b, const Gaussian& g,
                           std::size_t n, std::uint64_t seed) {
  require(n >= 2, "mc_bilinear: need at least 2 samples");
  std::mt19937_64 rng(seed);
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const Eigen::VectorXd x = draw(g, rng);
    const double v = (x - a).dot(M * (x - b));
    sum += v;
    sum_sq += v * v;
  }
  const double nn = static_cast<double>(n);
  const double mean = sum / nn;
  const double var = std::max(0.0, sum_sq / nn - mean * mean);
  return ScalarEstimate{mean, std::sqrt(var / nn)};
}

}  // namespace smoothmix::sampling
