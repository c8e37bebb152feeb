#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "smoothmix/optimizer.hpp"
#include "smoothmix/problem_io.hpp"
#include "smoothmix/quadrature.hpp"
#include "smoothmix/version.hpp"

namespace {

constexpr int kExitConverged = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNotConverged = 2;
constexpr int kExitDiverged = 3;

double relative_gap(double got, double reference) {
  return std::abs(got - reference) / std::max(std::abs(reference), 1e-12);
}

smoothmix::io::VerificationReport verify_solution(
    const smoothmix::Solution& sol) {
  namespace quad = smoothmix::quadrature;
  smoothmix::io::VerificationReport ver{};
  ver.mass_quadrature = quad::mass(sol.mixture);
  ver.fi_root_quadrature = quad::fi_root(sol.root);
  ver.fi_mixture_quadrature = quad::fi_mixture(sol.mixture);
  ver.fi_closed_form = sol.fisher_information;
  ver.max_relative_gap = std::max(
      {std::abs(ver.mass_quadrature - 1.0),
       relative_gap(ver.fi_root_quadrature, ver.fi_closed_form),
       relative_gap(ver.fi_mixture_quadrature, ver.fi_closed_form)});
  return ver;
}

int run_solve(const std::string& problem_path, const std::string& out_path,
              const std::string& plot_prefix, const std::string& grid_prefix,
              bool verify, std::optional<std::uint64_t> seed, bool quiet) {
  namespace io = smoothmix::io;

  smoothmix::Problem problem = io::load_problem(problem_path);
  if (seed) problem.options.seed = *seed;
  if (!plot_prefix.empty() && problem.dim != 1) {
    std::cerr << "--plot is available for one-dimensional problems only\n";
    return kExitUsage;
  }
  if (!grid_prefix.empty() && problem.dim != 2) {
    std::cerr << "--plot-grid is available for two-dimensional problems only\n";
    return kExitUsage;
  }
  if (verify && problem.dim > 2) {
    std::cerr << "--verify quadrature supports at most two dimensions\n";
    return kExitUsage;
  }

  const smoothmix::Solution sol = smoothmix::solve(problem);

  std::optional<io::VerificationReport> ver;
  if (verify) ver = verify_solution(sol);

  if (!out_path.empty())
    io::write_text_file(out_path,
                        io::render_solution(problem, sol, problem.options.seed,
                                            io::utc_timestamp(), ver));
  if (!plot_prefix.empty())
    io::write_text_file(plot_prefix + ".csv", io::plot_csv(sol.mixture));
  if (!grid_prefix.empty())
    io::write_text_file(grid_prefix + ".csv",
                        io::plot_grid_csv(sol.mixture));

  double max_residual = 0.0;
  for (const auto& r : sol.residuals)
    max_residual = std::max(max_residual, std::abs(r.residual));

  if (!quiet) {
    std::cout << "status: "
              << (sol.converged
                      ? "converged"
                      : (sol.diverged
                             ? "diverged"
                             : (sol.infeasible ? "infeasible"
                                               : "not converged")))
              << "\n"
              << "fisher information: " << sol.fisher_information << "\n"
              << "max residual: " << max_residual << "\n"
              << "iterations: " << sol.outer_iterations << " outer, "
              << sol.inner_iterations << " inner (start "
              << sol.multistart_index << ")\n";
    if (ver)
      std::cout << "verification max relative gap: " << ver->max_relative_gap
                << "\n";
    if (!out_path.empty()) std::cout << "wrote " << out_path << "\n";
    if (!plot_prefix.empty())
      std::cout << "wrote " << plot_prefix << ".csv\n";
    if (!grid_prefix.empty())
      std::cout << "wrote " << grid_prefix << ".csv\n";
  }

  if (sol.converged) return kExitConverged;
  std::cerr << sol.message << "\n";
  return (sol.diverged || sol.infeasible) ? kExitDiverged : kExitNotConverged;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"smoothest Gaussian mixture under moment/value/probability "
               "specifications"};
  app.set_version_flag("--version", smoothmix::kVersion);
  app.require_subcommand(1);

  auto* cmd = app.add_subcommand("solve", "solve a problem file");
  std::string problem_path, out_path, plot_prefix, grid_prefix;
  bool verify = false, quiet = false;
  std::uint64_t seed_value = 0;
  cmd->add_option("problem", problem_path, "problem JSON file")->required();
  cmd->add_option("--out", out_path, "write the solution JSON here");
  cmd->add_option("--plot", plot_prefix,
                  "write <prefix>.csv with x, f(x) and the weighted "
                  "components (1-D only)");
  cmd->add_option("--plot-grid", grid_prefix,
                  "write <prefix>.csv with x, y, f(x,y) on a 101x101 grid "
                  "(2-D only)");
  cmd->add_flag("--verify", verify,
                "cross-check the solution against quadrature and append a "
                "verification block");
  auto* seed_opt =
      cmd->add_option("--seed", seed_value, "override the problem seed");
  cmd->add_flag("--quiet", quiet, "suppress the progress summary");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    std::optional<std::uint64_t> seed;
    if (seed_opt->count() > 0) seed = seed_value;
    return run_solve(problem_path, out_path, plot_prefix, grid_prefix, verify,
                     seed, quiet);
  } catch (const smoothmix::ArgumentError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
