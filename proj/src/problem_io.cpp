#include "smoothmix/problem_io.hpp"

#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "smoothmix/quadrature.hpp"
#include "smoothmix/version.hpp"

namespace smoothmix::io {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ArgumentError(where + ": " + what);
}

void check_keys(const json& j, const std::string& where,
                std::initializer_list<const char*> allowed) {
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* k : allowed)
      if (item.key() == k) {
        known = true;
        break;
      }
    if (!known) fail(where, "unknown key '" + item.key() + "'");
  }
}

const json& field(const json& j, const std::string& where,
                  const std::string& key) {
  const auto it = j.find(key);
  if (it == j.end()) fail(where, "missing key '" + key + "'");
  return *it;
}

int as_int(const json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where, "expected an integer");
  return j.get<int>();
}

double as_double(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  return j.get<double>();
}

/// Interval endpoints admit the strings "-inf" and "inf".
double as_endpoint(const json& j, const std::string& where) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    fail(where, "expected a number or \"-inf\"/\"inf\", got '" + s + "'");
  }
  return as_double(j, where);
}

Eigen::VectorXd as_point(const json& j, const std::string& where) {
  if (j.is_number()) {
    Eigen::VectorXd x(1);
    x(0) = j.get<double>();
    return x;
  }
  if (!j.is_array() || j.empty()) fail(where, "expected a number or an array");
  Eigen::VectorXd x(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
    x(static_cast<Eigen::Index>(i)) =
        as_double(j[i], where + "[" + std::to_string(i) + "]");
  return x;
}

Specification parse_spec(const json& j, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  const json& jt = field(j, where, "type");
  if (!jt.is_string()) fail(where + ".type", "expected a string");
  const std::string type = jt.get<std::string>();

  const bool has_target = j.contains("target");
  const bool has_band = j.contains("band");
  if (has_target == has_band)
    fail(where, "exactly one of 'target' or 'band' is required");

  Specification::Payload payload;
  if (type == "moment") {
    check_keys(j, where,
               {"type", "kind", "order", "axis", "axis2", "target", "band"});
    MomentSpec m;
    if (j.contains("kind")) {
      const json& k = j["kind"];
      if (!k.is_string()) fail(where + ".kind", "expected a string");
      const std::string kind = k.get<std::string>();
      if (kind == "raw")
        m.kind = MomentKind::raw;
      else if (kind == "central")
        m.kind = MomentKind::central;
      else
        fail(where + ".kind", "expected 'raw' or 'central', got '" + kind + "'");
    }
    m.order = as_int(field(j, where, "order"), where + ".order");
    if (j.contains("axis")) m.axis = as_int(j["axis"], where + ".axis");
    if (j.contains("axis2")) m.axis2 = as_int(j["axis2"], where + ".axis2");
    payload = m;
  } else if (type == "value") {
    check_keys(j, where, {"type", "x", "target", "band"});
    payload = ValueSpec{as_point(field(j, where, "x"), where + ".x")};
  } else if (type == "derivative") {
    check_keys(j, where, {"type", "x", "axis", "target", "band"});
    DerivativeSpec d;
    d.x = as_point(field(j, where, "x"), where + ".x");
    if (j.contains("axis")) d.axis = as_int(j["axis"], where + ".axis");
    payload = d;
  } else if (type == "interval_prob") {
    check_keys(j, where, {"type", "a", "b", "target", "band"});
    IntervalProbSpec p;
    p.a = as_endpoint(field(j, where, "a"), where + ".a");
    p.b = as_endpoint(field(j, where, "b"), where + ".b");
    payload = p;
  } else {
    fail(where + ".type", "unknown specification type '" + type + "'");
  }

  if (has_target)
    return Specification::equality(
        std::move(payload), as_double(j["target"], where + ".target"));
  const json& b = j["band"];
  if (!b.is_array() || b.size() != 2)
    fail(where + ".band", "expected [lo, hi]");
  return Specification::band(std::move(payload),
                             as_double(b[0], where + ".band[0]"),
                             as_double(b[1], where + ".band[1]"));
}

SolverOptions parse_options(const json& j, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  check_keys(j, where,
             {"max_outer_iterations", "inner_iterations", "initial_penalty",
              "penalty_growth", "equality_tolerance", "gradient_tolerance",
              "fd_step", "multistart", "seed", "prune_threshold",
              "parameter_bound", "log_scale_floor"});
  SolverOptions o;
  const auto opt_int = [&](const char* key, int& out) {
    if (j.contains(key)) out = as_int(j[key], where + "." + key);
  };
  const auto opt_double = [&](const char* key, double& out) {
    if (j.contains(key)) out = as_double(j[key], where + "." + key);
  };
  opt_int("max_outer_iterations", o.max_outer_iterations);
  opt_int("inner_iterations", o.inner_iterations);
  opt_double("initial_penalty", o.initial_penalty);
  opt_double("penalty_growth", o.penalty_growth);
  opt_double("equality_tolerance", o.equality_tolerance);
  opt_double("gradient_tolerance", o.gradient_tolerance);
  opt_double("fd_step", o.fd_step);
  opt_int("multistart", o.multistart);
  if (j.contains("seed")) {
    const json& s = j["seed"];
    if (!s.is_number_integer() ||
        (!s.is_number_unsigned() && s.get<long long>() < 0))
      fail(where + ".seed", "expected a nonnegative integer");
    o.seed = s.get<std::uint64_t>();
  }
  if (j.contains("prune_threshold")) {
    const double t = as_double(j["prune_threshold"], where + ".prune_threshold");
    if (t < 0) fail(where + ".prune_threshold", "must be >= 0");
    o.prune_threshold = t;
  }
  opt_double("parameter_bound", o.parameter_bound);
  opt_double("log_scale_floor", o.log_scale_floor);
  return o;
}

json vector_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

Eigen::VectorXd vector_from(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
    v(static_cast<Eigen::Index>(i)) =
        as_double(j[i], where + "[" + std::to_string(i) + "]");
  return v;
}

Eigen::MatrixXd matrix_from(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) fail(where, "expected a nested array");
  const auto rows = static_cast<Eigen::Index>(j.size());
  Eigen::MatrixXd m;
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Eigen::VectorXd row =
        vector_from(j[static_cast<std::size_t>(r)],
                    where + "[" + std::to_string(r) + "]");
    if (r == 0) m.resize(rows, row.size());
    if (row.size() != m.cols()) fail(where, "ragged matrix");
    m.row(r) = row;
  }
  return m;
}

}  // namespace

Problem parse_problem(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ArgumentError(std::string("problem file: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) fail("problem file", "top level must be an object");
  check_keys(j, "problem file", {"dim", "root_components", "specs", "options"});

  Problem p;
  p.dim = as_int(field(j, "problem file", "dim"), "dim");
  p.root_components =
      as_int(field(j, "problem file", "root_components"), "root_components");
  if (p.dim < 1) fail("dim", "must be >= 1");
  if (p.root_components < 1) fail("root_components", "must be >= 1");

  const json& specs = field(j, "problem file", "specs");
  if (!specs.is_array()) fail("specs", "expected an array");
  for (std::size_t i = 0; i < specs.size(); ++i)
    p.specs.push_back(
        parse_spec(specs[i], "specs[" + std::to_string(i) + "]"));

  if (j.contains("options")) p.options = parse_options(j["options"], "options");
  return p;
}

Problem load_problem(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("cannot open problem file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_problem(buf.str());
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char out[32];
  std::strftime(out, sizeof(out), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return out;
}

std::string render_solution(
    const Problem& problem, const Solution& solution, std::uint64_t seed,
    const std::string& timestamp,
    const std::optional<VerificationReport>& verification) {
  json root;
  {
    json w = json::array(), means = json::array(), covs = json::array();
    for (const auto& c : solution.root.components()) {
      w.push_back(c.weight);
      means.push_back(vector_json(c.gaussian.mean()));
      covs.push_back(matrix_json(c.gaussian.cov()));
    }
    root = {{"weights", w}, {"means", means}, {"covariances", covs}};
  }
  json mix;
  {
    json w = json::array(), means = json::array(), covs = json::array();
    for (const auto& c : solution.mixture.components()) {
      w.push_back(c.weight);
      means.push_back(vector_json(c.gaussian.mean()));
      covs.push_back(matrix_json(c.gaussian.cov()));
    }
    mix = {{"weights", w}, {"means", means}, {"covariances", covs}};
  }
  json residuals = json::array();
  for (const auto& r : solution.residuals)
    residuals.push_back({{"attained", r.attained},
                         {"residual", r.residual},
                         {"band", r.is_band},
                         {"satisfied", r.satisfied}});

  json doc = {
      {"dim", problem.dim},
      {"root_components", problem.root_components},
      {"converged", solution.converged},
      {"diverged", solution.diverged},
      {"infeasible", solution.infeasible},
      {"message", solution.message},
      {"fisher_information", solution.fisher_information},
      {"root_mixture", root},
      {"mixture", mix},
      {"residuals", residuals},
      {"diagnostics",
       {{"outer_iterations", solution.outer_iterations},
        {"inner_iterations", solution.inner_iterations},
        {"multistart_index", solution.multistart_index},
        {"pruned_mass", solution.pruned_mass},
        {"expansion_renormalization", solution.expansion_renormalization},
        {"scale_floor_hit", solution.scale_floor_hit}}},
      {"tool_version", kVersion},
      {"seed", seed},
      {"generated_at", timestamp},
  };
  if (verification) {
    doc["verification"] = {
        {"mass_quadrature", verification->mass_quadrature},
        {"fi_root_quadrature", verification->fi_root_quadrature},
        {"fi_mixture_quadrature", verification->fi_mixture_quadrature},
        {"fi_closed_form", verification->fi_closed_form},
        {"max_relative_gap", verification->max_relative_gap},
    };
  }
  return doc.dump(2) + "\n";
}

LoadedSolution load_solution(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("cannot open solution file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ArgumentError(std::string("solution file: invalid JSON: ") + e.what());
  }

  const auto mixture_components = [&](const json& m, const std::string& where) {
    const json& w = field(m, where, "weights");
    const json& means = field(m, where, "means");
    const json& covs = field(m, where, "covariances");
    if (!w.is_array() || w.size() != means.size() || w.size() != covs.size())
      fail(where, "weights/means/covariances sizes disagree");
    std::vector<std::pair<double, Gaussian>> out;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const std::string wi = where + "[" + std::to_string(i) + "]";
      out.emplace_back(as_double(w[i], wi),
                       Gaussian(vector_from(means[i], wi + ".mean"),
                                matrix_from(covs[i], wi + ".cov")));
    }
    return out;
  };

  std::vector<RootComponent> rcomps;
  for (auto& [w, g] : mixture_components(field(j, "solution", "root_mixture"),
                                         "root_mixture"))
    rcomps.push_back({w, std::move(g)});
  std::vector<WeightedComponent> mcomps;
  for (auto& [w, g] :
       mixture_components(field(j, "solution", "mixture"), "mixture"))
    mcomps.push_back({w, std::move(g)});

  std::vector<ResidualEntry> residuals;
  for (const auto& r : field(j, "solution", "residuals")) {
    ResidualEntry e{};
    e.attained = as_double(field(r, "residuals", "attained"), "attained");
    e.residual = as_double(field(r, "residuals", "residual"), "residual");
    e.is_band = field(r, "residuals", "band").get<bool>();
    e.satisfied = field(r, "residuals", "satisfied").get<bool>();
    residuals.push_back(e);
  }

  return LoadedSolution{
      RootMixture(std::move(rcomps), /*normalized=*/true),
      GaussianMixture(std::move(mcomps), /*normalized=*/true),
      as_double(field(j, "solution", "fisher_information"),
                "fisher_information"),
      std::move(residuals),
      field(j, "solution", "converged").get<bool>(),
      field(j, "solution", "seed").get<std::uint64_t>()};
}

std::string plot_csv(const GaussianMixture& mixture) {
  require(mixture.dim() == 1, "plot_csv: scalar mixtures only");
  const quadrature::Box box = quadrature::support_box(mixture);
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(17);
  os << "x,f";
  for (std::size_t i = 0; i < mixture.size(); ++i) os << ",wf_" << i;
  os << "\n";
  constexpr int kPoints = 401;
  Eigen::VectorXd x(1);
  for (int i = 0; i < kPoints; ++i) {
    x(0) = box.lo(0) + (box.hi(0) - box.lo(0)) * i / (kPoints - 1.0);
    os << x(0) << "," << mixture.eval(x);
    for (const auto& c : mixture.components())
      os << "," << c.weight * c.gaussian.eval(x);
    os << "\n";
  }
  return os.str();
}

std::string plot_grid_csv(const GaussianMixture& mixture) {
  require(mixture.dim() == 2, "plot_grid_csv: two-dimensional mixtures only");
  const quadrature::Box box = quadrature::support_box(mixture);
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(17);
  os << "x,y,f\n";
  constexpr int kNodes = 101;
  Eigen::VectorXd x(2);
  for (int i = 0; i < kNodes; ++i) {
    x(0) = box.lo(0) + (box.hi(0) - box.lo(0)) * i / (kNodes - 1.0);
    for (int j = 0; j < kNodes; ++j) {
      x(1) = box.lo(1) + (box.hi(1) - box.lo(1)) * j / (kNodes - 1.0);
      os << x(0) << "," << x(1) << "," << mixture.eval(x) << "\n";
    }
  }
  return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ArgumentError("cannot write file '" + path + "'");
  out << content;
  if (!out) throw ArgumentError("failed while writing '" + path + "'");
}

}  // namespace smoothmix::io
