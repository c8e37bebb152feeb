#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "smoothmix/quadrature.hpp"
#include "test_util.hpp"

using namespace smoothmix;

namespace {

Eigen::VectorXd vec1(double x) {
  Eigen::VectorXd v(1);
  v << x;
  return v;
}

GaussianMixture scalar_normal(double mean, double var) {
  return GaussianMixture(
      {{1.0, Gaussian(vec1(mean), var * Eigen::MatrixXd::Identity(1, 1))}},
      true);
}

}  // namespace

TEST_CASE("integrate_1d reproduces elementary integrals") {
  CHECK(quadrature::integrate_1d([](double x) { return x * x; }, 0.0, 1.0,
                                 1e-14) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-13));
  CHECK(quadrature::integrate_1d([](double x) { return std::sin(x); }, 0.0,
                                 M_PI, 1e-14) ==
        doctest::Approx(2.0).epsilon(1e-13));
  // An oscillatory integrand with a known antiderivative.
  CHECK(quadrature::integrate_1d([](double x) { return std::exp(-x) *
                                                        std::cos(10.0 * x); },
                                 0.0, 5.0, 1e-14) ==
        doctest::Approx((1.0 - std::exp(-5.0) * (std::cos(50.0) -
                                                 10.0 * std::sin(50.0))) /
                        101.0)
            .epsilon(1e-12));
}

TEST_CASE("integrate_1d reports non-convergence on a singular integrand") {
  CHECK_THROWS_AS(quadrature::integrate_1d(
                      [](double x) { return 1.0 / std::sqrt(std::abs(x) + 1e-300); },
                      -1.0, 1.0, 1e-12),
                  NumericError);
}

TEST_CASE("integrate_2d reproduces tensor-product integrals") {
  quadrature::Box box;
  box.lo = Eigen::VectorXd::Zero(2);
  box.hi = Eigen::VectorXd::Ones(2);
  CHECK(quadrature::integrate_2d(
            [](double x, double y) { return x * x * y * y; }, box, 1e-12) ==
        doctest::Approx(1.0 / 9.0).epsilon(1e-11));
  box.lo << -1.0, -2.0;
  box.hi << 2.0, 1.0;
  CHECK(quadrature::integrate_2d(
            [](double x, double y) { return std::exp(-(x * x + y * y)); },
            box, 1e-12) ==
        doctest::Approx(M_PI / 4.0 * (std::erf(1.0) + std::erf(2.0)) *
                        (std::erf(2.0) + std::erf(1.0)))
            .epsilon(1e-11));
}

TEST_CASE("support box covers all component tails") {
  const GaussianMixture f(
      {{0.5, Gaussian(vec1(-3.0), Eigen::MatrixXd::Identity(1, 1))},
       {0.5, Gaussian(vec1(5.0), 4.0 * Eigen::MatrixXd::Identity(1, 1))}},
      true);
  const quadrature::Box box = quadrature::support_box(f, 8.0);
  CHECK(box.lo(0) == doctest::Approx(-11.0).epsilon(1e-12));
  CHECK(box.hi(0) == doctest::Approx(21.0).epsilon(1e-12));
}

TEST_CASE("mass, mean, covariance of random mixtures") {
  std::mt19937_64 rng(31);
  for (int d = 1; d <= 2; ++d) {
    const GaussianMixture f = testutil::random_mixture(d, 3, rng);
    CHECK(quadrature::mass(f) == doctest::Approx(1.0).epsilon(1e-9));
    Eigen::VectorXd mu = Eigen::VectorXd::Zero(d);
    Eigen::MatrixXd second = Eigen::MatrixXd::Zero(d, d);
    for (const auto& c : f.components()) {
      mu += c.weight * c.gaussian.mean();
      second += c.weight * (c.gaussian.cov() +
                            c.gaussian.mean() * c.gaussian.mean().transpose());
    }
    const Eigen::MatrixXd cov = second - mu * mu.transpose();
    CHECK((quadrature::mean(f) - mu).cwiseAbs().maxCoeff() <= 1e-9);
    CHECK((quadrature::covariance(f) - cov).cwiseAbs().maxCoeff() <= 1e-8);
  }
}

TEST_CASE("Fisher information of a single Gaussian is the precision") {
  // I_F(N(m, s^2)) = 1/s^2, any mean.
  for (double var : {0.5, 1.0, 2.0, 4.0}) {
    const GaussianMixture f = scalar_normal(0.3, var);
    CHECK(quadrature::fi_mixture(f) ==
          doctest::Approx(1.0 / var).epsilon(1e-9));
  }
  // 2-D standard normal: trace of the identity precision.
  const GaussianMixture f2(
      {{1.0, Gaussian(Eigen::VectorXd::Zero(2),
                      Eigen::MatrixXd::Identity(2, 2))}},
      true);
  CHECK(quadrature::fi_mixture(f2) == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("root-form Fisher information agrees with the mixture form") {
  std::mt19937_64 rng(32);
  // Single kernel with covariance 2I: the square is the standard normal,
  // whose Fisher information equals the dimension.
  for (int d = 1; d <= 2; ++d) {
    const RootMixture rm = normalize(RootMixture(
        {{1.0, Gaussian(Eigen::VectorXd::Zero(d),
                        2.0 * Eigen::MatrixXd::Identity(d, d))}}));
    CHECK(quadrature::fi_root(rm) ==
          doctest::Approx(static_cast<double>(d)).epsilon(1e-9));
  }
  // Random root mixtures: two independent quadratures of the same density.
  for (int d = 1; d <= 2; ++d) {
    const RootMixture rm = testutil::random_root(d, 2, rng);
    const double from_root = quadrature::fi_root(rm);
    const double from_mixture = quadrature::fi_mixture(expand(rm).mixture);
    CHECK(from_root == doctest::Approx(from_mixture).epsilon(1e-8));
  }
}

TEST_CASE("entropy of reference densities") {
  // H(N(m, 1)) = (1/2) log(2 pi e).
  CHECK(quadrature::entropy(scalar_normal(0.0, 1.0)) ==
        doctest::Approx(1.4189385332046727).epsilon(1e-10));
  CHECK(quadrature::entropy(scalar_normal(2.0, 1.0)) ==
        doctest::Approx(1.4189385332046727).epsilon(1e-10));
  // Scaling: H(N(0, s^2)) = H(N(0,1)) + log s.
  CHECK(quadrature::entropy(scalar_normal(0.0, 4.0)) ==
        doctest::Approx(1.4189385332046727 + std::log(2.0)).epsilon(1e-10));
  // 2-D standard normal: log(2 pi e).
  const GaussianMixture f2(
      {{1.0, Gaussian(Eigen::VectorXd::Zero(2),
                      Eigen::MatrixXd::Identity(2, 2))}},
      true);
  CHECK(quadrature::entropy(f2) ==
        doctest::Approx(2.0 * 1.4189385332046727).epsilon(1e-9));
}

TEST_CASE("curvature roughness of the standard normal") {
  // int (f'')^2 for N(0,1) equals 3/(8 sqrt(pi)).
  CHECK(quadrature::curvature(scalar_normal(0.0, 1.0)) ==
        doctest::Approx(0.21157109383040861).epsilon(1e-9));
  // Scale rule: int (f'')^2 for N(0, s^2) is s^{-5} times the unit value.
  CHECK(quadrature::curvature(scalar_normal(0.0, 4.0)) ==
        doctest::Approx(0.21157109383040861 / 32.0).epsilon(1e-9));
}

TEST_CASE("integrate_over applies a pointwise functional") {
  std::mt19937_64 rng(33);
  const GaussianMixture f = testutil::random_mixture(1, 2, rng);
  // E[x^2] through the generic dispatcher vs the closed form.
  const double quad = quadrature::integrate_over(
      f, [&](const Eigen::VectorXd& x) { return x(0) * x(0) * f.eval(x); });
  CHECK(quad == doctest::Approx(f.raw_moment_1d(2)).epsilon(1e-9));
}
