#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <vector>

#include "smoothmix/quadrature.hpp"
#include "smoothmix/quasi_newton.hpp"
#include "smoothmix/root_mixture.hpp"
#include "smoothmix/theta.hpp"

namespace smoothmix {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<Eigen::VectorXd> fit_grid(const GaussianMixture& target,
                                      int per_axis) {
  const quadrature::Box box = quadrature::support_box(target, 6.0);
  const int d = target.dim();
  std::vector<Eigen::VectorXd> pts;
  if (d == 1) {
    pts.reserve(per_axis);
    for (int i = 0; i < per_axis; ++i) {
      Eigen::VectorXd x(1);
      x(0) = box.lo(0) + (box.hi(0) - box.lo(0)) * i / (per_axis - 1.0);
      pts.push_back(x);
    }
  } else {
    pts.reserve(static_cast<std::size_t>(per_axis) * per_axis);
    for (int i = 0; i < per_axis; ++i)
      for (int j = 0; j < per_axis; ++j) {
        Eigen::VectorXd x(2);
        x(0) = box.lo(0) + (box.hi(0) - box.lo(0)) * i / (per_axis - 1.0);
        x(1) = box.lo(1) + (box.hi(1) - box.lo(1)) * j / (per_axis - 1.0);
        pts.push_back(x);
      }
  }
  return pts;
}

/// Seeds root components from the heaviest target components: a single
/// squared kernel N(x; rho, P) contributes density N(x; rho, P/2), so a
/// target component with covariance C maps to a kernel with P = 2C and
/// weight proportional to sqrt(w).
RootMixture seed_from_target(const GaussianMixture& target, int r) {
  std::vector<int> order(target.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return target.components()[a].weight > target.components()[b].weight;
  });
  const int take = std::min<int>(r, static_cast<int>(target.size()));
  std::vector<RootComponent> comps;
  comps.reserve(take);
  for (int k = 0; k < take; ++k) {
    const auto& c = target.components()[order[k]];
    comps.push_back(
        {std::sqrt(std::max(c.weight, 1e-12)),
         Gaussian(c.gaussian.mean(), 2.0 * c.gaussian.cov())});
  }
  RootMixture rm = normalize(RootMixture(std::move(comps)));
  if (take < r) rm = pad_components(rm, r);
  return rm;
}

}  // namespace

FitResult fit_root_mixture(const GaussianMixture& target, int root_components,
                           const FitOptions& options) {
  require(root_components >= 1, "fit_root_mixture: need at least one component");
  require(target.normalized(), "fit_root_mixture: target must be normalized");
  const int d = target.dim();
  require(d <= 2, "fit_root_mixture: supported for one or two dimensions");
  require(options.max_iterations > 0 && options.multistart >= 0,
          "fit_root_mixture: options must be positive");

  const int per_axis =
      options.grid_points > 0 ? options.grid_points : (d == 1 ? 201 : 41);
  require(per_axis >= 2, "fit_root_mixture: grid needs at least two points");

  const std::vector<Eigen::VectorXd> grid = fit_grid(target, per_axis);
  std::vector<double> fvals(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) fvals[i] = target.eval(grid[i]);

  const ThetaLayout layout{d, root_components};
  const auto sum_sq = [&](const RootMixture& rm) {
    double total = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double rv = rm.value(grid[i]);
      const double e = rv * rv - fvals[i];
      total += e * e;
    }
    return total;
  };
  const auto objective = [&](const Eigen::VectorXd& theta) {
    try {
      return sum_sq(decode_root(theta, layout));
    } catch (const NumericError&) {
      return kInf;
    }
  };

  // Base start from the target itself, jittered restarts, and — for more
  // than one component — a start refined from the one-smaller fit so
  // enlarging the class never loses ground.
  std::vector<Eigen::VectorXd> starts;
  starts.push_back(encode_root(seed_from_target(target, root_components)));
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const Eigen::MatrixXd tcov = target.covariance();
  for (int s = 0; s < options.multistart; ++s) {
    Eigen::VectorXd theta = starts.front();
    for (int i = 0; i < root_components; ++i) {
      for (int a = 0; a < d; ++a) {
        const double sd = std::sqrt(std::max(tcov(a, a), 1e-8));
        theta(layout.mean_index(i, a)) += 0.5 * sd * unit(rng);
        theta(layout.chol_index(i, a, a)) += 0.5 * unit(rng);
      }
    }
    starts.push_back(theta);
  }
  if (root_components > 1) {
    FitOptions inner = options;
    inner.grid_points = per_axis;
    const FitResult smaller =
        fit_root_mixture(target, root_components - 1, inner);
    starts.push_back(
        encode_root(pad_components(smaller.root, root_components, 1e-6)));
  }

  QuasiNewtonOptions qn;
  qn.max_iterations = options.max_iterations;
  qn.grad_tolerance = 1e-10;

  bool have_best = false;
  Eigen::VectorXd best_theta;
  double best_value = kInf;
  int runaway_starts = 0;
  for (const auto& start : starts) {
    const QuasiNewtonResult res = minimize(objective, start, qn);
    if (res.box_hit && res.box_hit_decreasing) ++runaway_starts;
    if (std::isfinite(res.value) && res.value < best_value) {
      best_value = res.value;
      best_theta = res.x;
      have_best = true;
    }
  }
  if (!have_best) {
    std::ostringstream msg;
    msg << "fit_root_mixture: no start reached a finite objective ("
        << starts.size() << " starts, " << runaway_starts
        << " ran into the parameter bound)";
    throw NumericError(msg.str());
  }

  RootMixture root = decode_root(best_theta, layout);
  double sup = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double rv = root.value(grid[i]);
    sup = std::max(sup, std::abs(rv * rv - fvals[i]));
  }
  return FitResult{std::move(root), sup, best_value};
}

}  // namespace smoothmix
