#ifndef SMOOTHMIX_PROBLEM_IO_HPP
#define SMOOTHMIX_PROBLEM_IO_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "smoothmix/optimizer.hpp"

namespace smoothmix::io {

/// Parses a problem document. The schema is strict: unknown keys anywhere
/// raise ArgumentError, as do type mismatches and malformed spec entries.
Problem parse_problem(const std::string& text);

/// parse_problem on the contents of a file. Unreadable file -> ArgumentError.
Problem load_problem(const std::string& path);

/// Oracle cross-check summary appended to the solution document on demand.
struct VerificationReport {
  double mass_quadrature;
  double fi_root_quadrature;
  double fi_mixture_quadrature;
  double fi_closed_form;
  double max_relative_gap;
};

/// Renders the solution document: root and expanded mixture parameters,
/// residual report, diagnostics, tool version, seed, timestamp. The output
/// is byte-deterministic for a fixed timestamp string.
std::string render_solution(
    const Problem& problem, const Solution& solution, std::uint64_t seed,
    const std::string& timestamp,
    const std::optional<VerificationReport>& verification = std::nullopt);

/// Current UTC time in RFC 3339 format, second resolution.
std::string utc_timestamp();

/// The subset of a solution document needed to re-validate it.
struct LoadedSolution {
  RootMixture root;
  GaussianMixture mixture;
  double fisher_information;
  std::vector<ResidualEntry> residuals;
  bool converged;
  std::uint64_t seed;
};

LoadedSolution load_solution(const std::string& path);

/// Plot table for scalar solutions: 401 rows over the support box with
/// columns x, f(x), then one weighted component density per expanded
/// component. Locale-independent CSV with a header row.
std::string plot_csv(const GaussianMixture& mixture);

/// Surface table for two-dimensional solutions: 101x101 nodes over the
/// support box, columns x, y, f(x,y).
std::string plot_grid_csv(const GaussianMixture& mixture);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace smoothmix::io

#endif
