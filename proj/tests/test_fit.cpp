#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "smoothmix/quadrature.hpp"
#include "smoothmix/root_mixture.hpp"
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

TEST_CASE("an exactly representable target is recovered") {
  // N(0, 1/2) is the square of a single kernel with covariance 1.
  const GaussianMixture target = scalar_normal(0.0, 0.5);
  const FitResult fit = fit_root_mixture(target, 1);
  CHECK(fit.sup_residual <= 1e-6);
  CHECK(fit.root.size() == 1);
  CHECK(fit.root.normalized());
  CHECK(std::abs(fit.root.components()[0].gaussian.mean()(0)) <= 1e-3);
  CHECK(fit.root.components()[0].gaussian.cov()(0, 0) ==
        doctest::Approx(1.0).epsilon(1e-2));
  // The expanded square reproduces the target variance.
  const GaussianMixture back = expand(fit.root).mixture;
  CHECK(back.covariance()(0, 0) == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("two separated bumps are matched by two kernels") {
  const GaussianMixture target(
      {{0.5, Gaussian(vec1(-2.0), 0.7 * Eigen::MatrixXd::Identity(1, 1))},
       {0.5, Gaussian(vec1(2.0), 0.7 * Eigen::MatrixXd::Identity(1, 1))}},
      true);
  const FitResult fit = fit_root_mixture(target, 2);
  CHECK(fit.root.size() == 2);
  CHECK(fit.sup_residual <= 0.05);
  // The fitted square still integrates to one.
  CHECK(quadrature::mass(expand(fit.root).mixture) ==
        doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("extra kernels never worsen the grid misfit") {
  const GaussianMixture target(
      {{0.6, Gaussian(vec1(-1.0), 0.8 * Eigen::MatrixXd::Identity(1, 1))},
       {0.4, Gaussian(vec1(1.5), 1.2 * Eigen::MatrixXd::Identity(1, 1))}},
      true);
  const FitResult two = fit_root_mixture(target, 2);
  const FitResult three = fit_root_mixture(target, 3);
  CHECK(three.sum_sq <= two.sum_sq + 1e-6);
}

TEST_CASE("a two-dimensional target is fit on a surface grid") {
  const GaussianMixture target(
      {{1.0, Gaussian(Eigen::VectorXd::Zero(2),
                      0.5 * Eigen::MatrixXd::Identity(2, 2))}},
      true);
  FitOptions opt;
  opt.multistart = 1;
  const FitResult fit = fit_root_mixture(target, 1, opt);
  CHECK(fit.sup_residual <= 1e-4);
  CHECK((fit.root.components()[0].gaussian.cov() -
         Eigen::MatrixXd::Identity(2, 2))
            .cwiseAbs()
            .maxCoeff() <= 0.05);
}

TEST_CASE("fits are deterministic for a fixed seed") {
  std::mt19937_64 rng(61);
  const GaussianMixture target = testutil::random_mixture(1, 2, rng);
  FitOptions opt;
  opt.seed = 7;
  const FitResult a = fit_root_mixture(target, 2, opt);
  const FitResult b = fit_root_mixture(target, 2, opt);
  CHECK(a.sup_residual == b.sup_residual);
  CHECK(a.sum_sq == b.sum_sq);
  for (std::size_t i = 0; i < a.root.size(); ++i) {
    CHECK(a.root.components()[i].weight == b.root.components()[i].weight);
    CHECK(a.root.components()[i].gaussian.mean() ==
          b.root.components()[i].gaussian.mean());
  }
}

TEST_CASE("invalid fit requests are rejected") {
  const GaussianMixture target = scalar_normal(0.0, 1.0);
  CHECK_THROWS_AS(fit_root_mixture(target, 0), ArgumentError);

  const GaussianMixture raw(
      {{0.7, Gaussian(vec1(0.0), Eigen::MatrixXd::Identity(1, 1))}});
  CHECK_THROWS_AS(fit_root_mixture(raw, 1), ArgumentError);

  FitOptions opt;
  opt.grid_points = 1;
  CHECK_THROWS_AS(fit_root_mixture(target, 1, opt), ArgumentError);
  opt.grid_points = 0;
  opt.max_iterations = 0;
  CHECK_THROWS_AS(fit_root_mixture(target, 1, opt), ArgumentError);
}
