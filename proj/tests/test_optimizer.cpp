#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "smoothmix/optimizer.hpp"
#include "smoothmix/quadrature.hpp"

using namespace smoothmix;

namespace {

Specification moment_eq(MomentKind kind, int order, double target) {
  MomentSpec m;
  m.kind = kind;
  m.order = order;
  return Specification::equality(m, target);
}

Problem mean_var_problem(int r, double mean = 0.0, double var = 1.0) {
  Problem p;
  p.dim = 1;
  p.root_components = r;
  p.specs.push_back(moment_eq(MomentKind::raw, 1, mean));
  p.specs.push_back(moment_eq(MomentKind::central, 2, var));
  p.options.seed = 3;
  return p;
}

}  // namespace

TEST_CASE("mean/variance problem converges to the Gaussian information") {
  Problem p = mean_var_problem(2);
  p.options.multistart = 3;
  const Solution sol = solve(p);
  CHECK(sol.converged);
  CHECK_FALSE(sol.diverged);
  CHECK(sol.fisher_information >= 1.0 - 1e-6);
  CHECK(sol.fisher_information <= 1.1);
  for (const auto& r : sol.residuals) {
    CHECK(std::abs(r.residual) <= 1e-6);
    CHECK(r.satisfied);
  }
  CHECK(sol.mixture.mean()(0) == doctest::Approx(0.0).epsilon(1e-5));
  CHECK(sol.mixture.covariance()(0, 0) == doctest::Approx(1.0).epsilon(1e-5));
  // feasible outer iterates never beat the Gaussian bound
  for (const auto& it : sol.trace)
    if (it.feasible) CHECK(it.objective >= 1.0 - 1e-6);
}

TEST_CASE("solutions are deterministic for a fixed seed") {
  Problem p = mean_var_problem(2);
  p.options.multistart = 2;
  const Solution a = solve(p);
  const Solution b = solve(p);
  CHECK(a.fisher_information == b.fisher_information);
  REQUIRE(a.mixture.size() == b.mixture.size());
  for (std::size_t i = 0; i < a.mixture.size(); ++i) {
    CHECK(a.mixture.components()[i].weight ==
          b.mixture.components()[i].weight);
    CHECK(a.mixture.components()[i].gaussian.mean() ==
          b.mixture.components()[i].gaussian.mean());
  }
}

TEST_CASE("empty specification set diverges by widening") {
  Problem p;
  p.dim = 1;
  p.root_components = 1;
  p.options.multistart = 2;
  const Solution sol = solve(p);
  CHECK_FALSE(sol.converged);
  CHECK(sol.diverged);
  CHECK(sol.message.find("diverged") != std::string::npos);
}

TEST_CASE("a lone mean constraint cannot pin the scale and diverges") {
  Problem p;
  p.dim = 1;
  p.root_components = 1;
  p.specs.push_back(moment_eq(MomentKind::raw, 1, 0.0));
  p.options.multistart = 2;
  const Solution sol = solve(p);
  CHECK_FALSE(sol.converged);
  CHECK(sol.diverged);
}

TEST_CASE("contradictory variance targets are reported infeasible") {
  Problem p = mean_var_problem(1);
  p.specs.push_back(moment_eq(MomentKind::central, 2, 2.0));  // var 1 AND 2
  p.options.multistart = 1;
  const Solution sol = solve(p);
  CHECK_FALSE(sol.converged);
  CHECK(sol.infeasible);
  CHECK_FALSE(sol.diverged);
}

TEST_CASE("band constraints act one-sided") {
  Problem p;
  p.dim = 1;
  p.root_components = 1;
  MomentSpec mean_m;
  mean_m.kind = MomentKind::raw;
  mean_m.order = 1;
  p.specs.push_back(Specification::band(mean_m, -0.2, 0.2));
  p.specs.push_back(moment_eq(MomentKind::central, 2, 1.0));
  p.options.multistart = 2;
  p.options.seed = 5;
  const Solution sol = solve(p);
  CHECK(sol.converged);
  const double mean = sol.mixture.mean()(0);
  CHECK(mean >= -0.2 - 1e-6);
  CHECK(mean <= 0.2 + 1e-6);
  CHECK(sol.fisher_information <= 1.0 + 1e-4);
}

TEST_CASE("warm starting a larger class keeps the objective") {
  Problem p2 = mean_var_problem(2);
  p2.options.multistart = 2;
  const Solution s2 = solve(p2);
  REQUIRE(s2.converged);

  Problem p3 = mean_var_problem(3);
  p3.options.multistart = 2;
  p3.options.warm_start = s2.root;
  const Solution s3 = solve(p3);
  CHECK(s3.converged);
  CHECK(s3.fisher_information <= s2.fisher_information + 1e-8);
}

TEST_CASE("a mean offset shifts the optimum without changing information") {
  Problem p = mean_var_problem(2, /*mean=*/1.5, /*var=*/1.0);
  p.options.multistart = 2;
  const Solution sol = solve(p);
  CHECK(sol.converged);
  CHECK(sol.mixture.mean()(0) == doctest::Approx(1.5).epsilon(1e-5));
  CHECK(sol.fisher_information == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("two-dimensional identity-covariance problem solves") {
  Problem p;
  p.dim = 2;
  p.root_components = 1;
  for (int axis = 0; axis < 2; ++axis) {
    MomentSpec mean_m;
    mean_m.order = 1;
    mean_m.axis = axis;
    p.specs.push_back(Specification::equality(mean_m, 0.0));
    MomentSpec var_m;
    var_m.kind = MomentKind::central;
    var_m.order = 2;
    var_m.axis = axis;
    p.specs.push_back(Specification::equality(var_m, 1.0));
  }
  MomentSpec cross;
  cross.kind = MomentKind::central;
  cross.order = 2;
  cross.axis = 0;
  cross.axis2 = 1;
  p.specs.push_back(Specification::equality(cross, 0.0));
  p.options.multistart = 2;
  const Solution sol = solve(p);
  CHECK(sol.converged);
  // standard 2-D Gaussian: trace of the precision = 2
  CHECK(sol.fisher_information == doctest::Approx(2.0).epsilon(1e-4));
}

TEST_CASE("custom smoothness objectives ride the same machinery") {
  Problem p = mean_var_problem(1);
  p.options.multistart = 1;
  p.options.gradient_tolerance = 1e-6;
  const Solution sol = solve_with_objective(
      p, [](const RootMixture&, const GaussianMixture& mix) {
        return quadrature::curvature(mix);
      });
  CHECK(sol.converged);
  // With one kernel the density is Gaussian, so the curvature optimum under
  // {mean 0, var 1} is the standard normal's roughness.
  CHECK(quadrature::curvature(sol.mixture) ==
        doctest::Approx(0.21157109383040861).epsilon(1e-3));
}

TEST_CASE("prune threshold defaults are exact for small classes") {
  CHECK(default_prune_threshold(6) == 0.0);
  CHECK(default_prune_threshold(7) == 1e-12);
}

TEST_CASE("invalid problems are rejected") {
  Problem p = mean_var_problem(0);
  CHECK_THROWS_AS(solve(p), ArgumentError);
  Problem q = mean_var_problem(1);
  q.options.max_outer_iterations = 0;
  CHECK_THROWS_AS(solve(q), ArgumentError);
}
