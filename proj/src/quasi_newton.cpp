#include "smoothmix/quasi_newton.hpp"

#include <cmath>
#include <limits>

#include "smoothmix/common.hpp"

namespace smoothmix {

namespace {

double clamp_coord(double v, double lo, double hi) {
  return std::min(std::max(v, lo), hi);
}

}  // namespace

Eigen::VectorXd fd_gradient(
    const std::function<double(const Eigen::VectorXd&)>& fn,
    const Eigen::VectorXd& x, double fd_step) {
  const auto n = x.size();
  Eigen::VectorXd g(n);
  Eigen::VectorXd probe = x;
  for (Eigen::Index k = 0; k < n; ++k) {
    const double h = fd_step * (1.0 + std::abs(x(k)));
    probe(k) = x(k) + h;
    const double fp = fn(probe);
    probe(k) = x(k) - h;
    const double fm = fn(probe);
    probe(k) = x(k);
    g(k) = (fp - fm) / (2.0 * h);
  }
  return g;
}

QuasiNewtonResult minimize(
    const std::function<double(const Eigen::VectorXd&)>& fn,
    Eigen::VectorXd x0, const QuasiNewtonOptions& options) {
  const auto n = x0.size();
  const double inf = std::numeric_limits<double>::infinity();

  auto lower_bound = [&](Eigen::Index k) {
    if (options.lower.size() == n) return options.lower(k);
    return -inf;
  };
  auto project = [&](Eigen::VectorXd& x, int* box_idx, int* lower_idx) {
    for (Eigen::Index k = 0; k < n; ++k) {
      const double lo = std::max(-options.box_bound, lower_bound(k));
      const double clipped = clamp_coord(x(k), lo, options.box_bound);
      if (clipped != x(k)) {
        if (x(k) > options.box_bound || x(k) < -options.box_bound) {
          if (box_idx) *box_idx = static_cast<int>(k);
        } else if (lower_idx) {
          *lower_idx = static_cast<int>(k);
        }
        x(k) = clipped;
      }
    }
  };

  QuasiNewtonResult res;
  res.evaluations = 0;
  auto eval = [&](const Eigen::VectorXd& x) {
    ++res.evaluations;
    const double v = fn(x);
    return std::isfinite(v) ? v : inf;
  };

  // Start inside the box.
  {
    int bi = -1, li = -1;
    project(x0, &bi, &li);
  }

  Eigen::VectorXd x = x0;
  double fx = eval(x);
  if (!std::isfinite(fx))
    throw NumericError("minimize: objective not finite at the start point");

  Eigen::VectorXd g = fd_gradient(fn, x, options.fd_step);
  res.evaluations += 2 * static_cast<int>(n);
  Eigen::MatrixXd h_inv = Eigen::MatrixXd::Identity(n, n);

  res.converged = false;
  res.stalled = false;
  res.box_hit = false;
  res.lower_hit = false;

  int it = 0;
  for (; it < options.max_iterations; ++it) {
    if (g.lpNorm<Eigen::Infinity>() <=
        options.grad_tolerance * std::max(1.0, std::abs(fx))) {
      res.converged = true;
      break;
    }

    Eigen::VectorXd p = -(h_inv * g);
    double slope = g.dot(p);
    if (!(slope < 0.0)) {
      h_inv.setIdentity();
      p = -g;
      slope = g.dot(p);
      if (!(slope < 0.0)) break;  // zero gradient; nothing to do
    }

    // Backtracking with projection of the trial point into the box.
    double alpha = 1.0;
    bool accepted = false;
    Eigen::VectorXd x_new;
    double f_new = fx;
    int box_idx = -1, lower_idx = -1;
    for (int bt = 0; bt < options.max_backtracks; ++bt) {
      x_new = x + alpha * p;
      box_idx = -1;
      lower_idx = -1;
      project(x_new, &box_idx, &lower_idx);
      f_new = eval(x_new);
      const double predicted = g.dot(x_new - x);
      if (std::isfinite(f_new) &&
          f_new <= fx + options.armijo_c * std::min(predicted, 0.0)) {
        accepted = true;
        break;
      }
      alpha *= options.backtrack_shrink;
    }
    if (!accepted) {
      res.stalled = true;
      break;
    }

    const bool decreased = f_new < fx;
    if (box_idx >= 0) {
      res.box_hit = true;
      res.box_hit_index = box_idx;
      res.box_hit_decreasing = decreased;
    }
    if (lower_idx >= 0) {
      res.lower_hit = true;
      res.lower_hit_index = lower_idx;
    }

    Eigen::VectorXd g_new = fd_gradient(fn, x_new, options.fd_step);
    res.evaluations += 2 * static_cast<int>(n);

    const Eigen::VectorXd s = x_new - x;
    const Eigen::VectorXd y = g_new - g;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      const double rho = 1.0 / sy;
      const Eigen::MatrixXd outer = s * y.transpose();
      h_inv = h_inv - rho * (outer * h_inv + h_inv * outer.transpose()) +
              (rho * rho * (y.dot(h_inv * y)) + rho) * (s * s.transpose());
      h_inv = ((h_inv + h_inv.transpose()) / 2.0).eval();
    }

    x = x_new;
    fx = f_new;
    g = g_new;
  }

  res.x = x;
  res.value = fx;
  res.iterations = it;
  return res;
}

}  // namespace smoothmix
