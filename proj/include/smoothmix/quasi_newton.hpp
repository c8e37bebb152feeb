#ifndef SMOOTHMIX_QUASI_NEWTON_HPP
#define SMOOTHMIX_QUASI_NEWTON_HPP

#include <functional>

#include <Eigen/Dense>

namespace smoothmix {

struct QuasiNewtonOptions {
  int max_iterations = 200;
  double grad_tolerance = 1e-8;
  double fd_step = 1e-6;  // relative; actual step is fd_step * (1 + |x_k|)
  double armijo_c = 1e-4;
  double backtrack_shrink = 0.5;
  int max_backtracks = 60;
  double box_bound = 50.0;            // |x_k| <= box_bound, all coordinates
  Eigen::VectorXd lower;              // optional elementwise lower bounds
};

struct QuasiNewtonResult {
  Eigen::VectorXd x;
  double value;
  int iterations;
  int evaluations;
  bool converged;        // gradient tolerance reached
  bool stalled;          // line search gave up before the tolerance
  bool box_hit;          // the +-box_bound projection clipped an accepted step
  int box_hit_index = -1;
  bool box_hit_decreasing = false;  // objective still falling when it clipped
  bool lower_hit;        // an elementwise lower bound clipped an accepted step
  int lower_hit_index = -1;
};

/// BFGS with central finite-difference gradients and Armijo backtracking.
/// Trial points are projected into the bound box before evaluation;
/// non-finite objective values reject the step.
QuasiNewtonResult minimize(
    const std::function<double(const Eigen::VectorXd&)>& fn,
    Eigen::VectorXd x0, const QuasiNewtonOptions& options);

/// Central finite differences of fn at x, step fd_step * (1 + |x_k|) per
/// coordinate.
Eigen::VectorXd fd_gradient(const std::function<double(const Eigen::VectorXd&)>& fn,
                            const Eigen::VectorXd& x, double fd_step);

}  // namespace smoothmix

#endif
