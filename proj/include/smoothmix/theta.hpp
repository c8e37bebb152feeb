#ifndef SMOOTHMIX_THETA_HPP
#define SMOOTHMIX_THETA_HPP

#include <string>

#include <Eigen/Dense>

#include "smoothmix/root_mixture.hpp"

namespace smoothmix {

/// Unconstrained parameter vector for a root mixture. Per component:
/// log-weight, mean entries, then the lower Cholesky factor of the
/// covariance in row-major order with log-transformed diagonal. Any
/// finite vector decodes to a valid positive-orthant root mixture; the
/// decode ends with sphere normalization, so one weight degree of
/// freedom is redundant.
struct ThetaLayout {
  int dim;
  int components;

  int per_component() const { return 1 + dim + dim * (dim + 1) / 2; }
  int size() const { return components * per_component(); }

  int weight_index(int comp) const { return comp * per_component(); }
  int mean_index(int comp, int axis) const {
    return comp * per_component() + 1 + axis;
  }
  int chol_index(int comp, int row, int col) const {
    return comp * per_component() + 1 + dim + row * (row + 1) / 2 + col;
  }
  bool is_chol_diagonal(int flat_index, int* comp = nullptr) const;

  /// Human-readable name of a coordinate, for diagnostics.
  std::string describe(int flat_index) const;
};

/// theta -> normalized root mixture. Throws NumericError on non-finite
/// entries, overflowing exponentials, or parameters whose covariance
/// degenerates numerically.
RootMixture decode_root(const Eigen::VectorXd& theta, const ThetaLayout& layout);

/// Inverse of decode_root up to the sphere scaling of the weights.
Eigen::VectorXd encode_root(const RootMixture& rm);

/// Adds components with small relative weight next to existing ones so a
/// solved root mixture can seed a larger parameterization.
RootMixture pad_components(const RootMixture& rm, int target_components,
                           double relative_weight = 1e-3);

}  // namespace smoothmix

#endif
