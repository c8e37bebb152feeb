#include "smoothmix/gaussian.hpp"

#include <cmath>

namespace smoothmix {

namespace {
constexpr double kLog2Pi = 1.8378770664093454835606594728112;

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }
}  // namespace

Gaussian::Gaussian(Eigen::VectorXd mean, Eigen::MatrixXd cov)
    : mean_(std::move(mean)), cov_(std::move(cov)) {
  const auto d = mean_.size();
  require(d >= 1, "Gaussian: dimension must be >= 1");
  require(cov_.rows() == d && cov_.cols() == d,
          "Gaussian: covariance must be DxD with D = mean length");
  const double asym = max_abs(cov_ - cov_.transpose());
  require(asym <= 1e-12 * std::max(1.0, max_abs(cov_)),
          "Gaussian: covariance is not symmetric");
  cov_ = ((cov_ + cov_.transpose()) / 2.0).eval();

  Eigen::LLT<Eigen::MatrixXd> llt(cov_);
  require(llt.info() == Eigen::Success,
          "Gaussian: covariance is not positive definite");
  chol_ = llt.matrixL();

  double log_det = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) log_det += std::log(chol_(i, i));
  log_norm_ = -0.5 * static_cast<double>(d) * kLog2Pi - log_det;
}

double Gaussian::log_eval(const Eigen::VectorXd& x) const {
  require(x.size() == mean_.size(), "Gaussian::eval: dimension mismatch");
  const Eigen::VectorXd y =
      chol_.triangularView<Eigen::Lower>().solve(x - mean_);
  return log_norm_ - 0.5 * y.squaredNorm();
}

double Gaussian::eval(const Eigen::VectorXd& x) const {
  return std::exp(log_eval(x));
}

Eigen::VectorXd Gaussian::solve(const Eigen::VectorXd& v) const {
  Eigen::VectorXd y = chol_.triangularView<Eigen::Lower>().solve(v);
  return chol_.transpose().triangularView<Eigen::Upper>().solve(y);
}

Eigen::VectorXd Gaussian::grad(const Eigen::VectorXd& x) const {
  require(x.size() == mean_.size(), "Gaussian::grad: dimension mismatch");
  return -solve(x - mean_) * eval(x);
}

Eigen::MatrixXd Gaussian::hessian(const Eigen::VectorXd& x) const {
  require(x.size() == mean_.size(), "Gaussian::hessian: dimension mismatch");
  const Eigen::VectorXd u = solve(x - mean_);
  const Eigen::MatrixXd prec = precision();
  return eval(x) * (u * u.transpose() - prec);
}

Eigen::MatrixXd Gaussian::precision() const {
  const auto d = mean_.size();
  Eigen::MatrixXd inv_l = chol_.triangularView<Eigen::Lower>().solve(
      Eigen::MatrixXd::Identity(d, d));
  Eigen::MatrixXd prec = inv_l.transpose() * inv_l;
  return ((prec + prec.transpose()) / 2.0).eval();
}

GaussianProduct product(const Gaussian& g1, const Gaussian& g2) {
  require(g1.dim() == g2.dim(), "product: dimension mismatch");
  const auto d = g1.mean().size();

  const Eigen::MatrixXd p1 = g1.precision();
  const Eigen::MatrixXd p2 = g2.precision();
  Eigen::MatrixXd prec_sum = p1 + p2;
  prec_sum = ((prec_sum + prec_sum.transpose()) / 2.0).eval();

  Eigen::LLT<Eigen::MatrixXd> llt(prec_sum);
  if (llt.info() != Eigen::Success)
    throw NumericError("product: sum of precisions not positive definite");
  const Eigen::MatrixXd ident = Eigen::MatrixXd::Identity(d, d);
  Eigen::MatrixXd cov3 = llt.solve(ident);
  cov3 = ((cov3 + cov3.transpose()) / 2.0).eval();
  const Eigen::VectorXd mean3 = llt.solve(p1 * g1.mean() + p2 * g2.mean());

  // Scale N(0; m1 - m2, C1 + C2), evaluated through its own factorization.
  Gaussian gap(g1.mean() - g2.mean(), g1.cov() + g2.cov());
  const double scale = gap.eval(Eigen::VectorXd::Zero(d));

  return GaussianProduct{scale, Gaussian(mean3, cov3)};
}

double bilinear_expectation(const Eigen::MatrixXd& M, const Eigen::VectorXd& a,
                            const Eigen::VectorXd& b, const Gaussian& g) {
  const auto d = g.mean().size();
  require(M.rows() == d && M.cols() == d && a.size() == d && b.size() == d,
          "bilinear_expectation: dimension mismatch");
  const double trace_term = (M * g.cov()).trace();
  return trace_term + (g.mean() - a).dot(M * (g.mean() - b));
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double interval_mass(const Gaussian& g, double a, double b) {
  if (g.dim() != 1)
    throw ArgumentError("interval_mass: only scalar Gaussians are supported");
  require(!(a > b), "interval_mass: interval endpoints must satisfy a <= b");
  const double m = g.mean()(0);
  const double sigma = g.chol()(0, 0);
  const double za = std::isinf(a) ? a : (a - m) / sigma;
  const double zb = std::isinf(b) ? b : (b - m) / sigma;
  return normal_cdf(zb) - normal_cdf(za);
}

}  // namespace smoothmix
