#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>

#include "smoothmix/common.hpp"
#include "smoothmix/quasi_newton.hpp"

using namespace smoothmix;

TEST_CASE("convex quadratic converges to its minimizer") {
  Eigen::MatrixXd a(2, 2);
  a << 3.0, 1.0, 1.0, 2.0;
  Eigen::VectorXd center(2);
  center << 1.0, -2.0;
  auto fn = [&](const Eigen::VectorXd& x) {
    return 0.5 * ((x - center).transpose() * a * (x - center)).value();
  };
  QuasiNewtonOptions opt;
  const QuasiNewtonResult res = minimize(fn, Eigen::VectorXd::Zero(2), opt);
  CHECK(res.converged);
  CHECK_FALSE(res.stalled);
  CHECK_FALSE(res.box_hit);
  CHECK_FALSE(res.lower_hit);
  CHECK((res.x - center).cwiseAbs().maxCoeff() <= 1e-5);
  CHECK(res.value <= 1e-9);
  CHECK(res.iterations > 0);
  CHECK(res.evaluations > res.iterations);
}

TEST_CASE("Rosenbrock valley is followed to the optimum") {
  auto fn = [](const Eigen::VectorXd& x) {
    const double a = 1.0 - x(0);
    const double b = x(1) - x(0) * x(0);
    return a * a + 100.0 * b * b;
  };
  Eigen::VectorXd x0(2);
  x0 << -1.2, 1.0;
  QuasiNewtonOptions opt;
  opt.max_iterations = 1000;
  opt.grad_tolerance = 1e-7;
  const QuasiNewtonResult res = minimize(fn, x0, opt);
  CHECK(res.converged);
  CHECK(std::abs(res.x(0) - 1.0) <= 1e-4);
  CHECK(std::abs(res.x(1) - 1.0) <= 1e-4);
  CHECK(res.value <= 1e-8);
}

TEST_CASE("an unbounded descent direction is clipped at the box") {
  auto fn = [](const Eigen::VectorXd& x) { return -x(0); };
  QuasiNewtonOptions opt;
  opt.box_bound = 5.0;
  opt.max_iterations = 40;
  const QuasiNewtonResult res =
      minimize(fn, Eigen::VectorXd::Zero(1), opt);
  CHECK(res.box_hit);
  CHECK(res.box_hit_index == 0);
  CHECK_FALSE(res.converged);
  CHECK(res.x(0) == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(res.value == doctest::Approx(-5.0).epsilon(1e-12));
}

TEST_CASE("the first clipped step records a still-decreasing objective") {
  auto fn = [](const Eigen::VectorXd& x) { return -x(0); };
  QuasiNewtonOptions opt;
  opt.box_bound = 5.0;
  opt.max_iterations = 1;  // stop right after the clipped step
  Eigen::VectorXd x0(1);
  x0 << 4.9;
  const QuasiNewtonResult res = minimize(fn, x0, opt);
  CHECK(res.box_hit);
  CHECK(res.box_hit_decreasing);
  CHECK(res.x(0) == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("elementwise lower bounds clip and are reported") {
  auto fn = [](const Eigen::VectorXd& x) {
    return (x(0) + 10.0) * (x(0) + 10.0);
  };
  QuasiNewtonOptions opt;
  opt.lower = Eigen::VectorXd::Zero(1);
  opt.max_iterations = 30;
  Eigen::VectorXd x0(1);
  x0 << 3.0;
  const QuasiNewtonResult res = minimize(fn, x0, opt);
  CHECK(res.lower_hit);
  CHECK(res.lower_hit_index == 0);
  CHECK(res.x(0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  CHECK(res.value == doctest::Approx(100.0).epsilon(1e-12));
  CHECK_FALSE(res.converged);
}

TEST_CASE("non-finite objective regions are never accepted") {
  const double inf = std::numeric_limits<double>::infinity();
  auto fn = [&](const Eigen::VectorXd& x) {
    if (x(0) > 1.4) return inf;
    return (x(0) - 2.0) * (x(0) - 2.0);
  };
  QuasiNewtonOptions opt;
  opt.max_iterations = 200;
  const QuasiNewtonResult res =
      minimize(fn, Eigen::VectorXd::Zero(1), opt);
  // The iterate approaches the wall from the feasible side and the final
  // value is the true objective there, never an accepted infinity.
  CHECK(std::isfinite(res.value));
  CHECK(res.x(0) <= 1.4 + 1e-12);
  CHECK(res.x(0) >= 0.99);
  CHECK_FALSE(res.converged);

  // Starting at a non-finite point is an error.
  Eigen::VectorXd bad(1);
  bad << 2.0;
  CHECK_THROWS_AS(minimize(fn, bad, opt), NumericError);
}

TEST_CASE("finite-difference gradient matches analytic derivatives") {
  auto fn = [](const Eigen::VectorXd& x) {
    return std::sin(x(0)) + x(0) * x(0) * x(1);
  };
  Eigen::VectorXd x(2);
  x << 0.7, -0.3;
  const Eigen::VectorXd g = fd_gradient(fn, x, 1e-6);
  CHECK(g(0) == doctest::Approx(std::cos(0.7) + 2.0 * 0.7 * (-0.3))
                    .epsilon(1e-8));
  CHECK(g(1) == doctest::Approx(0.7 * 0.7).epsilon(1e-8));
}
