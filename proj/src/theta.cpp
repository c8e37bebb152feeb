#include "smoothmix/theta.hpp"

#include <cmath>
#include <string>

namespace smoothmix {

bool ThetaLayout::is_chol_diagonal(int flat_index, int* comp) const {
  const int pc = per_component();
  const int c = flat_index / pc;
  const int off = flat_index % pc;
  if (comp) *comp = c;
  if (off < 1 + dim) return false;
  const int tri = off - 1 - dim;
  // Row r covers triangle offsets [r(r+1)/2, r(r+1)/2 + r]; the last one
  // in each row is the diagonal entry.
  int row = 0;
  while ((row + 1) * (row + 2) / 2 <= tri) ++row;
  const int col = tri - row * (row + 1) / 2;
  return col == row;
}

std::string ThetaLayout::describe(int flat_index) const {
  const int pc = per_component();
  const int c = flat_index / pc;
  const int off = flat_index % pc;
  const std::string comp = "component " + std::to_string(c);
  if (off == 0) return comp + " log-weight";
  if (off < 1 + dim) return comp + " mean[" + std::to_string(off - 1) + "]";
  const int tri = off - 1 - dim;
  int row = 0;
  while ((row + 1) * (row + 2) / 2 <= tri) ++row;
  const int col = tri - row * (row + 1) / 2;
  if (row == col)
    return comp + " covariance log-scale[" + std::to_string(row) + "]";
  return comp + " covariance factor(" + std::to_string(row) + "," +
         std::to_string(col) + ")";
}

RootMixture decode_root(const Eigen::VectorXd& theta,
                        const ThetaLayout& layout) {
  require(layout.dim >= 1 && layout.components >= 1,
          "decode_root: invalid layout");
  require(theta.size() == layout.size(),
          "decode_root: parameter vector length mismatch");
  if (!theta.allFinite())
    throw NumericError("decode_root: non-finite parameters");

  const int d = layout.dim;
  std::vector<RootComponent> comps;
  comps.reserve(static_cast<std::size_t>(layout.components));
  for (int c = 0; c < layout.components; ++c) {
    const double v = std::exp(theta(layout.weight_index(c)));
    Eigen::VectorXd mean(d);
    for (int a = 0; a < d; ++a) mean(a) = theta(layout.mean_index(c, a));
    Eigen::MatrixXd l = Eigen::MatrixXd::Zero(d, d);
    for (int r = 0; r < d; ++r) {
      for (int q = 0; q < r; ++q) l(r, q) = theta(layout.chol_index(c, r, q));
      l(r, r) = std::exp(theta(layout.chol_index(c, r, r)));
    }
    Eigen::MatrixXd cov = l * l.transpose();
    cov = ((cov + cov.transpose()) / 2.0).eval();
    if (!std::isfinite(v) || v <= 0.0 || !cov.allFinite())
      throw NumericError("decode_root: parameter overflow");
    try {
      comps.push_back({v, Gaussian(std::move(mean), std::move(cov))});
    } catch (const ArgumentError&) {
      // The factor is finite but its square is numerically singular
      // (e.g. an underflowed diagonal); a numeric failure, not a usage one.
      throw NumericError("decode_root: degenerate covariance");
    }
  }
  return normalize(RootMixture(std::move(comps)));
}

Eigen::VectorXd encode_root(const RootMixture& rm) {
  const ThetaLayout layout{rm.dim(), static_cast<int>(rm.size())};
  Eigen::VectorXd theta(layout.size());
  const int d = layout.dim;
  for (int c = 0; c < layout.components; ++c) {
    const auto& comp = rm.components()[static_cast<std::size_t>(c)];
    theta(layout.weight_index(c)) = std::log(comp.weight);
    for (int a = 0; a < d; ++a)
      theta(layout.mean_index(c, a)) = comp.gaussian.mean()(a);
    const Eigen::MatrixXd& l = comp.gaussian.chol();
    for (int r = 0; r < d; ++r) {
      for (int q = 0; q < r; ++q)
        theta(layout.chol_index(c, r, q)) = l(r, q);
      theta(layout.chol_index(c, r, r)) = std::log(l(r, r));
    }
  }
  return theta;
}

RootMixture pad_components(const RootMixture& rm, int target_components,
                           double relative_weight) {
  require(target_components >= static_cast<int>(rm.size()),
          "pad_components: target smaller than current size");
  require(relative_weight > 0.0, "pad_components: weight must be positive");
  std::vector<RootComponent> comps = rm.components();
  double min_w = comps.front().weight;
  for (const auto& c : comps) min_w = std::min(min_w, c.weight);

  int src = 0;
  while (static_cast<int>(comps.size()) < target_components) {
    const auto& base = rm.components()[static_cast<std::size_t>(
        src % static_cast<int>(rm.size()))];
    Eigen::VectorXd mean = base.gaussian.mean();
    const int axis = src % rm.dim();
    // Slight offset keeps the Gram matrix nonsingular.
    mean(axis) += 0.05 * std::sqrt(base.gaussian.cov()(axis, axis)) *
                  (src % 2 == 0 ? 1.0 : -1.0);
    comps.push_back({relative_weight * min_w, Gaussian(mean, base.gaussian.cov())});
    ++src;
  }
  return normalize(RootMixture(std::move(comps)));
}

}  // namespace smoothmix
