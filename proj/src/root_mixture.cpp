#include "smoothmix/root_mixture.hpp"

#include <cmath>

namespace smoothmix {

RootMixture::RootMixture(std::vector<RootComponent> components, bool normalized)
    : components_(std::move(components)), normalized_(normalized) {
  require(!components_.empty(), "RootMixture: needs at least 1 component");
  const int d = components_.front().gaussian.dim();
  for (const auto& c : components_) {
    require(c.gaussian.dim() == d, "RootMixture: component dimensions differ");
    require(std::isfinite(c.weight) && c.weight > 0.0,
            "RootMixture: weights must be positive and finite");
  }
  if (normalized_) {
    Eigen::VectorXd v(components_.size());
    for (std::size_t i = 0; i < components_.size(); ++i)
      v(static_cast<Eigen::Index>(i)) = components_[i].weight;
    const double q = v.dot(gram_matrix(*this) * v);
    require(std::abs(q - 1.0) <= 1e-10,
            "RootMixture: normalized flag requires v^T G v = 1");
  }
}

double RootMixture::value(const Eigen::VectorXd& x) const {
  double v = 0.0;
  for (const auto& c : components_) v += c.weight * c.gaussian.eval(x);
  return v;
}

Eigen::VectorXd RootMixture::gradient(const Eigen::VectorXd& x) const {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(dim());
  for (const auto& c : components_) g += c.weight * c.gaussian.grad(x);
  return g;
}

Eigen::MatrixXd gram_matrix(const RootMixture& rm) {
  const auto n = static_cast<Eigen::Index>(rm.size());
  const auto& comps = rm.components();
  Eigen::MatrixXd g(n, n);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(rm.dim());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      const auto& gi = comps[static_cast<std::size_t>(i)].gaussian;
      const auto& gj = comps[static_cast<std::size_t>(j)].gaussian;
      Gaussian gap(gi.mean() - gj.mean(), gi.cov() + gj.cov());
      g(i, j) = gap.eval(zero);
      g(j, i) = g(i, j);
    }
  }
  return g;
}

RootMixture normalize(const RootMixture& rm) {
  const auto n = static_cast<Eigen::Index>(rm.size());
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i)
    v(i) = rm.components()[static_cast<std::size_t>(i)].weight;
  const double q = v.dot(gram_matrix(rm) * v);
  if (!std::isfinite(q) || q <= 0.0)
    throw NumericError("normalize: Gram quadratic form is not finite positive");
  const double scale = 1.0 / std::sqrt(q);
  std::vector<RootComponent> comps;
  comps.reserve(rm.size());
  for (const auto& c : rm.components())
    comps.push_back({c.weight * scale, c.gaussian});
  return RootMixture(std::move(comps), true);
}

ExpansionResult expand(const RootMixture& rm, double prune_rel_threshold) {
  if (!rm.normalized())
    throw ContractError("expand: root mixture must be normalized");
  require(prune_rel_threshold >= 0.0, "expand: prune threshold must be >= 0");

  const auto& comps = rm.components();
  const std::size_t r = comps.size();

  std::vector<WeightedComponent> emitted;
  emitted.reserve(r * (r + 1) / 2);
  double max_weight = 0.0;
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = i; j < r; ++j) {
      const double c_ij = (i == j) ? 1.0 : 2.0;
      GaussianProduct p = product(comps[i].gaussian, comps[j].gaussian);
      const double w = comps[i].weight * comps[j].weight * c_ij * p.scale;
      max_weight = std::max(max_weight, w);
      emitted.push_back({w, std::move(p.gaussian)});
    }
  }

  const double cutoff = prune_rel_threshold * max_weight;
  std::vector<WeightedComponent> kept;
  kept.reserve(emitted.size());
  double kept_mass = 0.0;
  double pruned_mass = 0.0;
  for (auto& c : emitted) {
    if (!std::isfinite(c.weight))
      throw NumericError("expand: pair weight is not finite");
    // Weights can underflow to exactly zero for far-apart kernels; dropping
    // a zero-mass pair keeps the expansion exact.
    if (c.weight <= 0.0 || c.weight < cutoff) {
      pruned_mass += c.weight;
    } else {
      kept_mass += c.weight;
      kept.push_back(std::move(c));
    }
  }
  if (kept.empty() || kept_mass <= 0.0)
    throw NumericError("expand: pruning removed all components");

  const double renorm = 1.0 / kept_mass;
  for (auto& c : kept) c.weight *= renorm;

  return ExpansionResult{GaussianMixture(std::move(kept), true), pruned_mass,
                         renorm};
}

std::int64_t component_count(int root_components) {
  require(root_components >= 1, "component_count: R must be >= 1");
  const auto r = static_cast<std::int64_t>(root_components);
  return r * (r + 1) / 2;
}

int inverse_count(std::int64_t mixture_components) {
  require(mixture_components >= 1, "inverse_count: L must be >= 1");
  const double l = static_cast<double>(mixture_components);
  auto r = static_cast<std::int64_t>(
      std::ceil((std::sqrt(8.0 * l + 1.0) - 1.0) / 2.0));
  // Guard the floating-point ceil against off-by-one at exact triangulars.
  while (r * (r + 1) / 2 < mixture_components) ++r;
  while (r > 1 && (r - 1) * r / 2 >= mixture_components) --r;
  return static_cast<int>(r);
}

double fisher_information_root(const RootMixture& rm) {
  if (!rm.normalized())
    throw ContractError("fisher_information_root: requires normalized input");

  const auto& comps = rm.components();
  const auto n = static_cast<Eigen::Index>(comps.size());

  std::vector<Eigen::MatrixXd> prec;
  prec.reserve(comps.size());
  for (const auto& c : comps) prec.push_back(c.gaussian.precision());

  // T_ij = int grad(r_i)^T grad(r_j) dx. With grad r_i = -P_i^{-1}(x-rho_i) r_i
  // and r_i r_j = scale_ij N(x; m_ij, S_ij), this is the bilinear expectation
  // of P_i^{-1} P_j^{-1} between the two centers under the product Gaussian.
  Eigen::MatrixXd t(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      const auto& ci = comps[static_cast<std::size_t>(i)];
      const auto& cj = comps[static_cast<std::size_t>(j)];
      GaussianProduct p = product(ci.gaussian, cj.gaussian);
      const Eigen::MatrixXd m = prec[static_cast<std::size_t>(i)] *
                                prec[static_cast<std::size_t>(j)];
      t(i, j) = p.scale * bilinear_expectation(m, ci.gaussian.mean(),
                                               cj.gaussian.mean(), p.gaussian);
      t(j, i) = t(i, j);
    }
  }

  double fi = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      fi += comps[static_cast<std::size_t>(i)].weight *
            comps[static_cast<std::size_t>(j)].weight * t(i, j);
  return 4.0 * fi;
}

}  // namespace smoothmix
