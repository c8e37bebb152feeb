#ifndef SMOOTHMIX_SPECIFICATION_HPP
#define SMOOTHMIX_SPECIFICATION_HPP

#include <optional>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "smoothmix/mixture.hpp"

namespace smoothmix {

enum class MomentKind { raw, central };

/// Moment constraint. Scalar mixtures allow raw/central moments of order
/// 1..4; multivariate mixtures are limited to mean entries (order 1) and
/// second-moment / covariance entries (order 2, indices axis/axis2).
struct MomentSpec {
  MomentKind kind = MomentKind::raw;
  int order = 1;
  int axis = 0;
  int axis2 = -1;  // second index for order-2 entries; -1 means axis
};

/// Prescribed density value f(x) = y.
struct ValueSpec {
  Eigen::VectorXd x;
};

/// Prescribed partial derivative (d/dx_axis) f(x) = d.
struct DerivativeSpec {
  Eigen::VectorXd x;
  int axis = 0;
};

/// Prescribed probability mass P(a <= x <= b) = p, scalar mixtures only.
/// Endpoints may be +-infinity.
struct IntervalProbSpec {
  double a;
  double b;
};

struct Band {
  double lo;
  double hi;
};

/// One constraint S_i(f), either an equality against a scalar target or
/// a tolerance band [lo, hi] on the attained value.
class Specification {
 public:
  using Payload =
      std::variant<MomentSpec, ValueSpec, DerivativeSpec, IntervalProbSpec>;

  static Specification equality(Payload payload, double target);
  static Specification band(Payload payload, double lo, double hi);

  const Payload& payload() const { return payload_; }
  bool has_band() const { return band_.has_value(); }
  double target() const;
  const Band& band_limits() const;

  /// Value of S_i's underlying statistic on f, via the mixture module's
  /// closed forms.
  double attained(const GaussianMixture& f) const;

 private:
  Specification(Payload payload, std::optional<double> target,
                std::optional<Band> band);
  void validate() const;

  Payload payload_;
  std::optional<double> target_;
  std::optional<Band> band_;
};

struct ResidualEntry {
  double attained;
  double residual;  // signed (attained - target) for equalities;
                    // nonnegative band violation otherwise
  bool is_band;
  bool satisfied;   // |residual| within tolerance
};

/// Evaluates one specification on a normalized mixture.
ResidualEntry residual(const Specification& spec, const GaussianMixture& f,
                       double tolerance = 1e-6);

struct ResidualVectors {
  Eigen::VectorXd equality;  // equality residuals, declaration order
  Eigen::VectorXd band;      // band violations, declaration order
};

ResidualVectors residual_vector(const std::vector<Specification>& specs,
                                const GaussianMixture& f);

}  // namespace smoothmix

#endif
