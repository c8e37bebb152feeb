#include "smoothmix/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "smoothmix/quasi_newton.hpp"
#include "smoothmix/theta.hpp"

namespace smoothmix {

namespace {

constexpr double kPenaltyCap = 1e12;
constexpr double kInf = std::numeric_limits<double>::infinity();

/// Signed constraint values: equalities as attained - target, bands as two
/// one-sided entries (lo - got, got - hi) that are <= 0 when satisfied.
struct ConstraintValues {
  Eigen::VectorXd equality;
  Eigen::VectorXd inequality;
};

ConstraintValues constraint_values(const std::vector<Specification>& specs,
                                   const GaussianMixture& f) {
  std::vector<double> eq, ineq;
  for (const auto& s : specs) {
    const double got = s.attained(f);
    if (s.has_band()) {
      const auto& b = s.band_limits();
      ineq.push_back(b.lo - got);
      ineq.push_back(got - b.hi);
    } else {
      eq.push_back(got - s.target());
    }
  }
  ConstraintValues out;
  out.equality = Eigen::Map<Eigen::VectorXd>(
      eq.data(), static_cast<Eigen::Index>(eq.size()));
  out.inequality = Eigen::Map<Eigen::VectorXd>(
      ineq.data(), static_cast<Eigen::Index>(ineq.size()));
  return out;
}

double constraint_norm(const ConstraintValues& c) {
  double norm = 0.0;
  for (Eigen::Index i = 0; i < c.equality.size(); ++i)
    norm = std::max(norm, std::abs(c.equality(i)));
  for (Eigen::Index i = 0; i < c.inequality.size(); ++i)
    norm = std::max(norm, std::max(0.0, c.inequality(i)));
  return norm;
}

/// Range of locations the specifications pin down, used to seed component
/// means and scales. Falls back to [-3, 3] per axis.
struct InitBox {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;
};

InitBox init_box(const Problem& problem) {
  const int d = problem.dim;
  Eigen::VectorXd lo = Eigen::VectorXd::Constant(d, kInf);
  Eigen::VectorXd hi = Eigen::VectorXd::Constant(d, -kInf);
  const auto absorb_point = [&](const Eigen::VectorXd& x) {
    lo = lo.cwiseMin(x);
    hi = hi.cwiseMax(x);
  };
  const auto absorb_scalar = [&](int axis, double x) {
    if (!std::isfinite(x)) return;
    lo(axis) = std::min(lo(axis), x);
    hi(axis) = std::max(hi(axis), x);
  };

  // Per-axis scale hints from variance-like targets.
  Eigen::VectorXd sigma = Eigen::VectorXd::Zero(d);
  for (const auto& s : problem.specs) {
    const double t = s.has_band()
                         ? 0.5 * (s.band_limits().lo + s.band_limits().hi)
                         : s.target();
    if (const auto* v = std::get_if<ValueSpec>(&s.payload())) {
      if (v->x.size() == d) absorb_point(v->x);
    } else if (const auto* dv = std::get_if<DerivativeSpec>(&s.payload())) {
      if (dv->x.size() == d) absorb_point(dv->x);
    } else if (const auto* p = std::get_if<IntervalProbSpec>(&s.payload())) {
      absorb_scalar(0, p->a);
      absorb_scalar(0, p->b);
    } else if (const auto* m = std::get_if<MomentSpec>(&s.payload())) {
      if (m->axis >= d) continue;
      if (m->order == 1 && m->kind == MomentKind::raw) {
        absorb_scalar(m->axis, t);
      } else if (m->order == 2 && m->kind == MomentKind::central &&
                 (m->axis2 < 0 || m->axis2 == m->axis) && t > 0.0) {
        sigma(m->axis) = std::max(sigma(m->axis), std::sqrt(t));
      }
    }
  }

  for (int a = 0; a < d; ++a) {
    if (!std::isfinite(lo(a)) || !std::isfinite(hi(a))) {
      const double s = sigma(a) > 0.0 ? 3.0 * sigma(a) : 3.0;
      lo(a) = -s;
      hi(a) = s;
    } else {
      const double pad = 3.0 * sigma(a);
      lo(a) -= pad;
      hi(a) += pad;
    }
    if (hi(a) - lo(a) < 1e-6) {  // all hints coincide; open the box up
      lo(a) -= 1.0;
      hi(a) += 1.0;
    }
  }
  return {lo, hi};
}

/// Equal-weight components spaced along the diagonal of the init box,
/// isotropic covariances sized to the per-component slice of the box.
RootMixture initial_root(const Problem& problem, const InitBox& box) {
  const int d = problem.dim;
  const int r = problem.root_components;
  std::vector<RootComponent> comps;
  comps.reserve(r);
  for (int i = 0; i < r; ++i) {
    const double frac = (i + 1.0) / (r + 1.0);
    const Eigen::VectorXd mean = box.lo + frac * (box.hi - box.lo);
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d, d);
    for (int a = 0; a < d; ++a) {
      const double s = std::max(0.05, (box.hi(a) - box.lo(a)) / (2.0 * r));
      cov(a, a) = s * s;
    }
    comps.push_back({1.0, Gaussian(mean, cov)});
  }
  return normalize(RootMixture(std::move(comps)));
}

Eigen::VectorXd jitter_theta(const Eigen::VectorXd& theta,
                             const ThetaLayout& layout, const InitBox& box,
                             std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Eigen::VectorXd out = theta;
  const int r = layout.components;
  for (int i = 0; i < r; ++i) {
    for (int a = 0; a < layout.dim; ++a) {
      const double spacing = (box.hi(a) - box.lo(a)) / (r + 1.0);
      out(layout.mean_index(i, a)) += 0.2 * spacing * unit(rng);
    }
    for (int a = 0; a < layout.dim; ++a)
      out(layout.chol_index(i, a, a)) += 0.5 * unit(rng);
  }
  return out;
}

/// Same root mixture with every covariance widened by the given factor.
RootMixture widened(const RootMixture& rm, double factor) {
  std::vector<RootComponent> comps;
  comps.reserve(rm.size());
  for (const auto& c : rm.components())
    comps.push_back(
        {c.weight, Gaussian(c.gaussian.mean(), factor * c.gaussian.cov())});
  return normalize(RootMixture(std::move(comps)));
}

struct StartOutcome {
  Eigen::VectorXd theta;
  double objective = kInf;
  double constraint = kInf;
  bool feasible = false;
  bool converged = false;
  bool diverged = false;
  bool infeasible = false;
  bool scale_floor_hit = false;
  int outer_iterations = 0;
  int inner_iterations = 0;
  int runaway_index = -1;
};

}  // namespace

double default_prune_threshold(int root_components) {
  return root_components <= 6 ? 0.0 : 1e-12;
}

Solution solve_with_objective(const Problem& problem,
                              const ObjectiveFn& objective) {
  require(problem.dim >= 1, "solve: dimension must be >= 1");
  require(problem.root_components >= 1,
          "solve: root component count must be >= 1");

  const SolverOptions& opt = problem.options;
  require(opt.max_outer_iterations > 0 && opt.inner_iterations > 0 &&
              opt.initial_penalty > 0 && opt.penalty_growth > 1 &&
              opt.equality_tolerance > 0 && opt.gradient_tolerance > 0 &&
              opt.fd_step > 0 && opt.parameter_bound > 0,
          "solve: option values must be positive");
  const ThetaLayout layout{problem.dim, problem.root_components};
  const double prune = opt.prune_threshold
                           ? *opt.prune_threshold
                           : default_prune_threshold(problem.root_components);

  // Constraint slot counts are fixed by the spec list, so the multiplier
  // vectors keep one shape across outer iterations.
  int n_eq = 0, n_ineq = 0;
  for (const auto& s : problem.specs) (s.has_band() ? n_ineq : n_eq) += 1;
  n_ineq *= 2;

  const auto augmented = [&](const Eigen::VectorXd& theta,
                             const Eigen::VectorXd& lambda,
                             const Eigen::VectorXd& eta, double mu) -> double {
    const RootMixture root = decode_root(theta, layout);
    const ExpansionResult ex = expand(root, prune);
    double value = objective(root, ex.mixture);
    const ConstraintValues c = constraint_values(problem.specs, ex.mixture);
    for (Eigen::Index i = 0; i < c.equality.size(); ++i) {
      const double h = c.equality(i);
      value += lambda(i) * h + 0.5 * mu * h * h;
    }
    for (Eigen::Index i = 0; i < c.inequality.size(); ++i) {
      const double shifted = std::max(0.0, c.inequality(i) + eta(i) / mu);
      value += 0.5 * mu * (shifted * shifted - (eta(i) / mu) * (eta(i) / mu));
    }
    return value;
  };

  // Covariance log-scales are floored so components cannot collapse to
  // spikes during intermediate infeasible iterates.
  Eigen::VectorXd lower =
      Eigen::VectorXd::Constant(layout.size(), -opt.parameter_bound);
  for (int i = 0; i < layout.components; ++i)
    for (int a = 0; a < layout.dim; ++a)
      lower(layout.chol_index(i, a, a)) =
          std::max(-opt.parameter_bound, opt.log_scale_floor);

  std::mt19937_64 rng(opt.seed);
  const InitBox box = init_box(problem);
  const Eigen::VectorXd base_theta = encode_root(initial_root(problem, box));

  std::vector<std::pair<int, Eigen::VectorXd>> starts;  // (index, theta)
  if (opt.warm_start) {
    require(opt.warm_start->dim() == problem.dim,
            "solve: warm start dimension mismatch");
    RootMixture seed = *opt.warm_start;
    if (static_cast<int>(seed.size()) < problem.root_components)
      seed = pad_components(seed, problem.root_components);
    require(static_cast<int>(seed.size()) == problem.root_components,
            "solve: warm start has more components than the problem");
    starts.emplace_back(-1, encode_root(seed));
  }
  for (int s = 0; s < std::max(1, opt.multistart); ++s) {
    Eigen::VectorXd theta = base_theta;
    if (s > 0) theta = jitter_theta(theta, layout, box, rng);
    starts.emplace_back(s, theta);
  }

  std::vector<OuterIterate> trace;
  std::vector<std::pair<int, StartOutcome>> outcomes;

  for (const auto& [start_index, start_theta] : starts) {
    StartOutcome run;
    run.theta = start_theta;
    Eigen::VectorXd lambda = Eigen::VectorXd::Zero(n_eq);
    Eigen::VectorXd eta = Eigen::VectorXd::Zero(n_ineq);
    double mu = opt.initial_penalty;
    double best_norm = kInf;

    for (int outer = 0; outer < opt.max_outer_iterations; ++outer) {
      QuasiNewtonOptions qn;
      qn.max_iterations = opt.inner_iterations;
      qn.grad_tolerance = opt.gradient_tolerance;
      qn.fd_step = opt.fd_step;
      qn.box_bound = opt.parameter_bound;
      qn.lower = lower;
      const QuasiNewtonResult inner = minimize(
          [&](const Eigen::VectorXd& t) {
            try {
              return augmented(t, lambda, eta, mu);
            } catch (const NumericError&) {
              return kInf;  // reject the trial point
            }
          },
          run.theta, qn);
      run.theta = inner.x;
      run.inner_iterations += inner.iterations;
      run.outer_iterations = outer + 1;
      run.scale_floor_hit = run.scale_floor_hit || inner.lower_hit;

      RootMixture root = decode_root(run.theta, layout);
      const ExpansionResult ex = expand(root, prune);
      const ConstraintValues c = constraint_values(problem.specs, ex.mixture);
      const double norm = constraint_norm(c);
      run.objective = objective(root, ex.mixture);
      run.constraint = norm;
      run.feasible = norm <= opt.equality_tolerance;
      trace.push_back({start_index, outer, run.objective, norm, run.feasible});

      // Runaway detection: a feasible iterate pinned to the parameter box
      // with the objective still falling means no specification limits the
      // remaining directions.
      if (run.feasible && inner.box_hit && inner.box_hit_decreasing) {
        run.diverged = true;
        run.runaway_index = inner.box_hit_index;
        break;
      }

      if (run.feasible && inner.converged) {
        // Gradient flatness alone cannot certify a minimum here: when no
        // specification fixes the scale, the objective keeps falling under
        // covariance widening with an exponentially vanishing gradient.
        // Probe that direction explicitly before accepting.
        bool runaway = false;
        try {
          const RootMixture wide = widened(root, 4.0);
          const ExpansionResult wex = expand(wide, prune);
          const double wide_norm =
              constraint_norm(constraint_values(problem.specs, wex.mixture));
          const double wide_objective = objective(wide, wex.mixture);
          runaway = wide_norm <= opt.equality_tolerance &&
                    wide_objective < 0.9 * run.objective;
        } catch (const NumericError&) {
          runaway = false;  // widening left the representable range
        }
        if (runaway) {
          run.diverged = true;
          run.runaway_index = layout.chol_index(0, 0, 0);
          break;
        }
        run.converged = true;
        break;
      }

      for (Eigen::Index i = 0; i < c.equality.size(); ++i)
        lambda(i) += mu * c.equality(i);
      for (Eigen::Index i = 0; i < c.inequality.size(); ++i)
        eta(i) = std::max(0.0, eta(i) + mu * c.inequality(i));
      if (norm > best_norm / 4.0 && !run.feasible)
        mu = std::min(mu * opt.penalty_growth, kPenaltyCap);
      best_norm = std::min(best_norm, norm);
    }

    // A start that exhausted the penalty schedule without approaching
    // feasibility marks the specification set as contradictory.
    if (!run.converged && !run.diverged && mu >= kPenaltyCap &&
        run.constraint > 1e3 * opt.equality_tolerance) {
      run.infeasible = true;
    }
    outcomes.emplace_back(start_index, run);
  }

  // Pick the best start: converged runs ranked by objective with ties
  // going to the earliest start, then feasible ones, then the closest to
  // feasible, with diverged runs last.
  const auto better = [](const StartOutcome& a, const StartOutcome& b) {
    if (a.converged != b.converged) return a.converged;
    if (a.feasible != b.feasible) return a.feasible;
    if (a.feasible && b.feasible) return a.objective < b.objective - 1e-10;
    if (a.diverged != b.diverged) return !a.diverged;
    return a.constraint < b.constraint;
  };
  const StartOutcome* best = nullptr;
  int best_index = 0;
  int total_inner = 0;
  for (const auto& [idx, run] : outcomes) {
    if (!best || better(run, *best)) {
      best = &run;
      best_index = idx;
    }
    total_inner += run.inner_iterations;
  }
  require(best != nullptr, "solve: no start produced an iterate");

  RootMixture root = decode_root(best->theta, layout);
  ExpansionResult ex = expand(root, prune);
  const double fisher = fisher_information_root(root);
  Solution solution{root,
                    ex.mixture,
                    fisher,
                    {},
                    /*converged=*/best->converged,
                    /*diverged=*/false,
                    /*infeasible=*/false,
                    /*message=*/"",
                    best->outer_iterations,
                    total_inner,
                    best_index,
                    best->scale_floor_hit,
                    ex.pruned_mass,
                    ex.renormalization,
                    std::move(trace)};
  for (const auto& s : problem.specs)
    solution.residuals.push_back(
        residual(s, ex.mixture, opt.equality_tolerance));

  if (best->converged) {
    std::ostringstream msg;
    msg << "converged: objective " << fisher << ", constraint norm "
        << best->constraint;
    solution.message = msg.str();
    return solution;
  }

  const bool all_diverged =
      std::all_of(outcomes.begin(), outcomes.end(),
                  [](const auto& o) { return o.second.diverged; });
  const bool any_infeasible =
      std::any_of(outcomes.begin(), outcomes.end(),
                  [](const auto& o) { return o.second.infeasible; });
  if (all_diverged) {
    solution.diverged = true;
    std::ostringstream msg;
    msg << "diverged: the objective decreases without bound";
    if (best->runaway_index >= 0)
      msg << " along " << layout.describe(best->runaway_index);
    msg << "; the specifications do not pin down a finite-information "
           "density";
    solution.message = msg.str();
  } else if (any_infeasible && !best->feasible) {
    solution.infeasible = true;
    std::ostringstream msg;
    msg << "infeasible: constraint norm stalled at " << best->constraint
        << " with the penalty at its cap; the specifications appear "
           "mutually inconsistent";
    solution.message = msg.str();
  } else {
    std::ostringstream msg;
    msg << "not converged: best constraint norm " << best->constraint
        << " after " << best->outer_iterations << " outer iterations";
    solution.message = msg.str();
  }
  return solution;
}

Solution solve(const Problem& problem) {
  return solve_with_objective(
      problem, [](const RootMixture& root, const GaussianMixture&) {
        return fisher_information_root(root);
      });
}

}  // namespace smoothmix
