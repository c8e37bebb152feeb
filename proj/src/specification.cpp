#include "smoothmix/specification.hpp"

#include <cmath>

namespace smoothmix {

Specification Specification::equality(Payload payload, double target) {
  return Specification(std::move(payload), target, std::nullopt);
}

Specification Specification::band(Payload payload, double lo, double hi) {
  return Specification(std::move(payload), std::nullopt, Band{lo, hi});
}

Specification::Specification(Payload payload, std::optional<double> target,
                             std::optional<Band> band)
    : payload_(std::move(payload)), target_(target), band_(band) {
  validate();
}

double Specification::target() const {
  if (!target_) throw ContractError("Specification: band spec has no target");
  return *target_;
}

const Band& Specification::band_limits() const {
  if (!band_) throw ContractError("Specification: equality spec has no band");
  return *band_;
}

void Specification::validate() const {
  if (band_) {
    require(std::isfinite(band_->lo) && std::isfinite(band_->hi),
            "Specification: band limits must be finite");
    require(band_->lo <= band_->hi, "Specification: band needs lo <= hi");
  } else {
    require(target_.has_value() && std::isfinite(*target_),
            "Specification: target must be finite");
  }

  if (const auto* m = std::get_if<MomentSpec>(&payload_)) {
    require(m->order >= 1 && m->order <= 4,
            "MomentSpec: order must be in 1..4");
    require(m->axis >= 0, "MomentSpec: axis must be >= 0");
  } else if (const auto* v = std::get_if<ValueSpec>(&payload_)) {
    require(v->x.allFinite(), "ValueSpec: location must be finite");
    if (target_) require(*target_ >= 0.0, "ValueSpec: density target must be >= 0");
  } else if (const auto* d = std::get_if<DerivativeSpec>(&payload_)) {
    require(d->x.allFinite(), "DerivativeSpec: location must be finite");
    require(d->axis >= 0, "DerivativeSpec: axis must be >= 0");
  } else if (const auto* p = std::get_if<IntervalProbSpec>(&payload_)) {
    require(!(p->a > p->b), "IntervalProbSpec: needs a <= b");
    require(!std::isnan(p->a) && !std::isnan(p->b),
            "IntervalProbSpec: endpoints must not be NaN");
    if (target_)
      require(*target_ >= 0.0 && *target_ <= 1.0,
              "IntervalProbSpec: probability target must be in [0,1]");
  }
}

namespace {

double attained_moment(const MomentSpec& m, const GaussianMixture& f) {
  const int d = f.dim();
  require(m.axis < d, "MomentSpec: axis out of range");
  if (d == 1) {
    return m.kind == MomentKind::raw ? f.raw_moment_1d(m.order)
                                     : f.central_moment_1d(m.order);
  }
  if (m.order == 1) {
    if (m.kind == MomentKind::central) return 0.0;  // E[x_a - mu_a]
    return f.mean()(m.axis);
  }
  if (m.order == 2) {
    const int axis2 = m.axis2 < 0 ? m.axis : m.axis2;
    require(axis2 < d, "MomentSpec: axis2 out of range");
    const double cov = f.covariance()(m.axis, axis2);
    if (m.kind == MomentKind::central) return cov;
    const Eigen::VectorXd mu = f.mean();
    return cov + mu(m.axis) * mu(axis2);
  }
  throw ArgumentError(
      "MomentSpec: multivariate moments are limited to order <= 2");
}

}  // namespace

double Specification::attained(const GaussianMixture& f) const {
  if (const auto* m = std::get_if<MomentSpec>(&payload_))
    return attained_moment(*m, f);
  if (const auto* v = std::get_if<ValueSpec>(&payload_)) {
    require(v->x.size() == f.dim(), "ValueSpec: dimension mismatch");
    return f.eval(v->x);
  }
  if (const auto* d = std::get_if<DerivativeSpec>(&payload_)) {
    require(d->x.size() == f.dim(), "DerivativeSpec: dimension mismatch");
    require(d->axis < f.dim(), "DerivativeSpec: axis out of range");
    return f.grad(d->x)(d->axis);
  }
  const auto& p = std::get<IntervalProbSpec>(payload_);
  if (f.dim() != 1)
    throw ArgumentError("IntervalProbSpec: scalar mixtures only");
  return f.interval_probability(p.a, p.b);
}

ResidualEntry residual(const Specification& spec, const GaussianMixture& f,
                       double tolerance) {
  if (!f.normalized())
    throw ContractError("residual: mixture must be normalized");
  const double got = spec.attained(f);
  ResidualEntry e{};
  e.attained = got;
  if (spec.has_band()) {
    const auto& b = spec.band_limits();
    e.residual = std::max(0.0, b.lo - got) + std::max(0.0, got - b.hi);
    e.is_band = true;
  } else {
    e.residual = got - spec.target();
    e.is_band = false;
  }
  e.satisfied = std::abs(e.residual) <= tolerance;
  return e;
}

ResidualVectors residual_vector(const std::vector<Specification>& specs,
                                const GaussianMixture& f) {
  std::vector<double> eq, band;
  for (const auto& s : specs) {
    const ResidualEntry e = residual(s, f);
    (e.is_band ? band : eq).push_back(e.residual);
  }
  ResidualVectors out;
  out.equality = Eigen::Map<Eigen::VectorXd>(eq.data(),
                                             static_cast<Eigen::Index>(eq.size()));
  out.band = Eigen::Map<Eigen::VectorXd>(band.data(),
                                         static_cast<Eigen::Index>(band.size()));
  return out;
}

}  // namespace smoothmix
