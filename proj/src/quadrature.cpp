#include "smoothmix/quadrature.hpp"

#include <cmath>
#include <vector>

namespace smoothmix::quadrature {

namespace {

constexpr double kDensityFloor = 1e-300;

Box box_from_components(int dim,
                        const std::vector<const Gaussian*>& comps,
                        double nsigma) {
  Eigen::VectorXd lo = Eigen::VectorXd::Constant(dim, 1e300);
  Eigen::VectorXd hi = Eigen::VectorXd::Constant(dim, -1e300);
  for (const Gaussian* g : comps) {
    for (int a = 0; a < dim; ++a) {
      const double s = std::sqrt(g->cov()(a, a));
      lo(a) = std::min(lo(a), g->mean()(a) - nsigma * s);
      hi(a) = std::max(hi(a), g->mean()(a) + nsigma * s);
    }
  }
  return Box{lo, hi};
}

double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const std::function<double(double)>& fn, double a,
                     double b, double fa, double fm, double fb, double whole,
                     double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = fn(lm);
  const double frm = fn(rm);
  const double left = simpson(a, m, fa, flm, fm);
  const double right = simpson(m, b, fm, frm, fb);
  const double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  if (depth <= 0)
    throw NumericError("integrate_1d: refinement did not converge");
  return adaptive_step(fn, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
         adaptive_step(fn, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

// Legendre nodes and weights on [-1,1] by Newton iteration.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p0 / pp;
      if (std::abs(z - z1) < 1e-15) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    w[n - 1 - i] = w[i];
  }
}

}  // namespace

Box support_box(const GaussianMixture& f, double nsigma) {
  std::vector<const Gaussian*> comps;
  comps.reserve(f.size());
  for (const auto& c : f.components()) comps.push_back(&c.gaussian);
  return box_from_components(f.dim(), comps, nsigma);
}

Box support_box(const RootMixture& rm, double nsigma) {
  std::vector<const Gaussian*> comps;
  comps.reserve(rm.size());
  for (const auto& c : rm.components()) comps.push_back(&c.gaussian);
  return box_from_components(rm.dim(), comps, nsigma);
}

double integrate_1d(const std::function<double(double)>& fn, double lo,
                    double hi, double abs_tol) {
  require(hi >= lo, "integrate_1d: empty interval");
  // Pre-split into panels so well-separated mixture bumps are all seen.
  const int panels = 32;
  const double h = (hi - lo) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double a = lo + p * h;
    const double b = (p == panels - 1) ? hi : a + h;
    const double m = 0.5 * (a + b);
    const double fa = fn(a), fm = fn(m), fb = fn(b);
    const double whole = simpson(a, b, fa, fm, fb);
    total += adaptive_step(fn, a, b, fa, fm, fb, whole, abs_tol / panels, 48);
  }
  return total;
}

double integrate_2d(const std::function<double(double, double)>& fn,
                    const Box& box, double rel_target) {
  require(box.lo.size() == 2 && box.hi.size() == 2,
          "integrate_2d: box must be two-dimensional");
  const double ax = box.lo(0), bx = box.hi(0);
  const double ay = box.lo(1), by = box.hi(1);
  const double sx = 0.5 * (bx - ax), cx = 0.5 * (bx + ax);
  const double sy = 0.5 * (by - ay), cy = 0.5 * (by + ay);

  double prev = 0.0;
  bool have_prev = false;
  std::vector<double> xs, ws;
  for (int n : {24, 48, 96, 192, 384}) {
    gauss_legendre(n, xs, ws);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = cx + sx * xs[i];
      double row = 0.0;
      for (int j = 0; j < n; ++j) {
        const double y = cy + sy * xs[j];
        row += ws[j] * fn(x, y);
      }
      acc += ws[i] * row;
    }
    acc *= sx * sy;
    if (have_prev &&
        std::abs(acc - prev) <= rel_target * std::max(1.0, std::abs(acc)))
      return acc;
    prev = acc;
    have_prev = true;
  }
  throw NumericError("integrate_2d: refinement did not converge");
}

double integrate_over(const GaussianMixture& f,
                      const std::function<double(const Eigen::VectorXd&)>& fn) {
  const Box box = support_box(f);
  if (f.dim() == 1) {
    Eigen::VectorXd x(1);
    return integrate_1d(
        [&](double t) {
          x(0) = t;
          return fn(x);
        },
        box.lo(0), box.hi(0));
  }
  if (f.dim() == 2) {
    Eigen::VectorXd x(2);
    return integrate_2d(
        [&](double a, double b) {
          x(0) = a;
          x(1) = b;
          return fn(x);
        },
        box);
  }
  throw ArgumentError("integrate_over: deterministic quadrature needs D <= 2");
}

double mass(const GaussianMixture& f) {
  return integrate_over(f, [&](const Eigen::VectorXd& x) { return f.eval(x); });
}

Eigen::VectorXd mean(const GaussianMixture& f) {
  Eigen::VectorXd m(f.dim());
  for (int a = 0; a < f.dim(); ++a)
    m(a) = integrate_over(
        f, [&](const Eigen::VectorXd& x) { return x(a) * f.eval(x); });
  return m;
}

Eigen::MatrixXd covariance(const GaussianMixture& f) {
  const Eigen::VectorXd mu = mean(f);
  Eigen::MatrixXd c(f.dim(), f.dim());
  for (int a = 0; a < f.dim(); ++a) {
    for (int b = a; b < f.dim(); ++b) {
      c(a, b) = integrate_over(f, [&](const Eigen::VectorXd& x) {
        return (x(a) - mu(a)) * (x(b) - mu(b)) * f.eval(x);
      });
      c(b, a) = c(a, b);
    }
  }
  return c;
}

double fi_mixture(const GaussianMixture& f) {
  return integrate_over(f, [&](const Eigen::VectorXd& x) {
    const double v = f.eval(x);
    if (v <= kDensityFloor) return 0.0;
    return f.grad(x).squaredNorm() / v;
  });
}

double fi_root(const RootMixture& rm) {
  const Box box = support_box(rm);
  if (rm.dim() == 1) {
    Eigen::VectorXd x(1);
    return 4.0 * integrate_1d(
                     [&](double t) {
                       x(0) = t;
                       return rm.gradient(x).squaredNorm();
                     },
                     box.lo(0), box.hi(0));
  }
  if (rm.dim() == 2) {
    Eigen::VectorXd x(2);
    return 4.0 * integrate_2d(
                     [&](double a, double b) {
                       x(0) = a;
                       x(1) = b;
                       return rm.gradient(x).squaredNorm();
                     },
                     box);
  }
  throw ArgumentError("fi_root: deterministic quadrature needs D <= 2");
}

double entropy(const GaussianMixture& f) {
  return integrate_over(f, [&](const Eigen::VectorXd& x) {
    const double v = f.eval(x);
    if (v <= kDensityFloor) return 0.0;
    return -v * std::log(v);
  });
}

double curvature(const GaussianMixture& f) {
  return integrate_over(f, [&](const Eigen::VectorXd& x) {
    return f.hessian(x).squaredNorm();
  });
}

}  // namespace smoothmix::quadrature
