#ifndef SMOOTHMIX_OPTIMIZER_HPP
#define SMOOTHMIX_OPTIMIZER_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "smoothmix/root_mixture.hpp"
#include "smoothmix/specification.hpp"

namespace smoothmix {

struct SolverOptions {
  int max_outer_iterations = 30;
  int inner_iterations = 200;
  double initial_penalty = 10.0;
  double penalty_growth = 10.0;  // applied when the constraint norm fails
                                 // to shrink by a factor of 4
  double equality_tolerance = 1e-6;
  double gradient_tolerance = 1e-8;
  double fd_step = 1e-6;
  int multistart = 5;
  std::uint64_t seed = 0;
  // Relative prune threshold for the expansion; unset selects 0 (exact)
  // for R <= 6 and 1e-12 above.
  std::optional<double> prune_threshold;
  double parameter_bound = 50.0;
  double log_scale_floor = -6.0;  // lower bound on covariance log-scales
  std::optional<RootMixture> warm_start;
};

struct Problem {
  int dim = 1;
  int root_components = 1;
  std::vector<Specification> specs;
  SolverOptions options;
};

/// One augmented-Lagrangian outer iteration, for diagnostics.
struct OuterIterate {
  int start;
  int outer;
  double objective;
  double constraint_norm;
  bool feasible;
};

struct Solution {
  RootMixture root;
  GaussianMixture mixture;
  double fisher_information;
  std::vector<ResidualEntry> residuals;
  bool converged = false;
  bool diverged = false;
  bool infeasible = false;
  std::string message;
  int outer_iterations = 0;
  int inner_iterations = 0;
  int multistart_index = 0;  // -1 when the warm start won
  bool scale_floor_hit = false;
  double pruned_mass = 0.0;
  double expansion_renormalization = 1.0;
  std::vector<OuterIterate> trace;  // all starts, in run order
};

/// Effective prune threshold for a given R under the default rule.
double default_prune_threshold(int root_components);

/// Minimizes the closed-form Fisher information of the decoded root
/// mixture subject to the specifications evaluated on the expanded
/// mixture. Deterministic for a fixed seed.
Solution solve(const Problem& problem);

/// Same constrained machinery with a caller-supplied smoothness
/// objective evaluated on the tandem pair (root, expansion).
using ObjectiveFn =
    std::function<double(const RootMixture&, const GaussianMixture&)>;
Solution solve_with_objective(const Problem& problem,
                              const ObjectiveFn& objective);

}  // namespace smoothmix

#endif
