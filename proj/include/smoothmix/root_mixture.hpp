#ifndef SMOOTHMIX_ROOT_MIXTURE_HPP
#define SMOOTHMIX_ROOT_MIXTURE_HPP

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "smoothmix/mixture.hpp"

namespace smoothmix {

struct RootComponent {
  double weight;  // v_i > 0
  Gaussian gaussian;
};

/// Weighted sum of Gaussian kernels r(x) = sum_i v_i N(x; rho_i, P_i)
/// whose square is the working mixture density.
///
/// Weights are restricted to the positive orthant. A `normalized` root
/// mixture satisfies v^T G v = 1 (G the Gram matrix), i.e. r lives on
/// the unit Hilbert sphere and r^2 has unit mass.
class RootMixture {
 public:
  explicit RootMixture(std::vector<RootComponent> components,
                       bool normalized = false);

  int dim() const { return components_.front().gaussian.dim(); }
  std::size_t size() const { return components_.size(); }
  bool normalized() const { return normalized_; }
  const std::vector<RootComponent>& components() const { return components_; }

  /// r(x)
  double value(const Eigen::VectorXd& x) const;
  /// grad r(x) = sum_i v_i grad N(x; rho_i, P_i)
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const;

 private:
  std::vector<RootComponent> components_;
  bool normalized_;
};

/// Pairwise overlap integrals G_ij = int r_i r_j dx
///                                 = N(0; rho_i - rho_j, P_i + P_j).
/// Symmetric positive definite for distinct components.
Eigen::MatrixXd gram_matrix(const RootMixture& rm);

/// Scales the weights by 1/sqrt(v^T G v) so that int r^2 dx = 1.
RootMixture normalize(const RootMixture& rm);

struct ExpansionResult {
  GaussianMixture mixture;
  double pruned_mass;      // emitted weight dropped by the prune threshold
  double renormalization;  // uniform factor applied to reach unit sum
};

/// Exact conversion r^2 -> mixture via pairwise Gaussian products. Each
/// pair i <= j contributes weight v_i v_j c_ij scale_ij (c_ij = 1 on the
/// diagonal, 2 off it) and the product Gaussian. Pairs whose weight falls
/// below prune_rel_threshold times the largest emitted weight are
/// dropped; the surviving weights are rescaled to unit sum. At threshold
/// zero the expansion is exact with R(R+1)/2 components.
ExpansionResult expand(const RootMixture& rm, double prune_rel_threshold = 0.0);

/// Number of mixture components of a full expansion: R(R+1)/2.
std::int64_t component_count(int root_components);

/// Smallest R whose full expansion reaches at least L components.
int inverse_count(std::int64_t mixture_components);

/// Fisher information of r^2, computed in closed form in root space:
/// 4 sum_ij v_i v_j T_ij with T_ij = int grad(r_i)^T grad(r_j) dx. Each
/// T_ij reduces to a Gaussian bilinear expectation against the pairwise
/// product density.
double fisher_information_root(const RootMixture& rm);

struct FitOptions {
  int grid_points = 0;      // per axis; 0 picks 201 (1-D) or 41 (2-D)
  int multistart = 4;       // random restarts on top of the base start
  int max_iterations = 400;
  std::uint64_t seed = 1;
};

struct FitResult {
  RootMixture root;
  double sup_residual;   // max_x |r(x)^2 - f(x)| on the fit grid
  double sum_sq;         // grid sum of squared residuals
};

/// Least-squares fit of a root mixture to a normalized target mixture on
/// a grid, for initialization purposes only. No optimality guarantee.
FitResult fit_root_mixture(const GaussianMixture& target, int root_components,
                           const FitOptions& options = {});

}  // namespace smoothmix

#endif
