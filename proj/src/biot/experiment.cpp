// Copyright 2026 The biot-semiexplicit Authors
// SPDX-License-Identifier: Apache-2.0

#include "biot/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace biot {
namespace {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Strict JSON reading

class Reader {
 public:
  Reader(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ConfigError(path_, "expected an object");
  }

  void allow(std::initializer_list<const char*> keys) const {
    std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& item : node_.items()) {
      if (!allowed.count(item.key())) throw ConfigError(at(item.key()), "unknown key");
    }
  }

  bool has(const char* key) const { return node_.contains(key); }
  const json& raw(const char* key) const { return node_.at(key); }
  std::string at(const std::string& key) const { return path_ + "." + key; }
  const std::string& path() const { return path_; }

  double number(const char* key) const {
    const json& v = require(key);
    if (!v.is_number()) throw ConfigError(at(key), "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(at(key), "must be finite");
    return x;
  }
  double number(const char* key, double fallback) const { return has(key) ? number(key) : fallback; }

  double positive(const char* key) const {
    const double x = number(key);
    if (!(x > 0.0)) throw ConfigError(at(key), "must be > 0");
    return x;
  }

  long long integer(const char* key) const {
    const json& v = require(key);
    if (!v.is_number_integer()) throw ConfigError(at(key), "expected an integer");
    return v.get<long long>();
  }

  bool boolean(const char* key, bool fallback) const {
    if (!has(key)) return fallback;
    const json& v = node_.at(key);
    if (!v.is_boolean()) throw ConfigError(at(key), "expected true or false");
    return v.get<bool>();
  }

  std::string string(const char* key) const {
    const json& v = require(key);
    if (!v.is_string()) throw ConfigError(at(key), "expected a string");
    return v.get<std::string>();
  }

  const json& array(const char* key) const {
    const json& v = require(key);
    if (!v.is_array()) throw ConfigError(at(key), "expected an array");
    return v;
  }

 private:
  const json& require(const char* key) const {
    if (!node_.contains(key)) throw ConfigError(at(key), "missing required key");
    return node_.at(key);
  }

  const json& node_;
  std::string path_;
};

permeability::Model parse_permeability(const json& node, const std::string& path) {
  const Reader r(node, path);
  const std::string kind = r.string("kind");
  permeability::Model model;
  if (kind == "constant") {
    r.allow({"kind", "kappa"});
    model = permeability::Constant{r.number("kappa")};
  } else if (kind == "kozeny-carman") {
    r.allow({"kind", "kappa0", "rho0", "c_s", "C_s"});
    permeability::KozenyCarman m;
    m.kappa0 = r.number("kappa0", m.kappa0);
    m.rho0 = r.number("rho0", m.rho0);
    m.c_s = r.number("c_s", m.c_s);
    m.C_s = r.number("C_s", m.C_s);
    model = m;
  } else if (kind == "network") {
    r.allow({"kind", "kappa0", "rho0", "rho_hat", "delta"});
    permeability::NetworkInspired m;
    m.kappa0 = r.number("kappa0", m.kappa0);
    m.rho0 = r.number("rho0", m.rho0);
    m.rho_hat = r.number("rho_hat", m.rho_hat);
    m.delta = r.number("delta", m.delta);
    model = m;
  } else if (kind == "quadratic") {
    r.allow({"kind", "kappa0", "rho0", "c_s", "C_s"});
    permeability::QuadraticClamped m;
    m.kappa0 = r.number("kappa0", m.kappa0);
    m.rho0 = r.number("rho0", m.rho0);
    m.c_s = r.number("c_s", m.c_s);
    m.C_s = r.number("C_s", m.C_s);
    model = m;
  } else {
    throw ConfigError(r.at("kind"),
                      "unknown permeability kind '" + kind +
                          "' (constant, kozeny-carman, network, quadratic)");
  }
  try {
    permeability::validate(model);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path, e.what());
  }
  return model;
}

ExperimentSpec parse_experiment(const json& node, const std::string& path) {
  ExperimentSpec spec;
  if (node.is_string()) {
    spec.name = node.get<std::string>();
  } else {
    const Reader r(node, path);
    r.allow({"name", "alpha", "overrides", "permeability"});
    spec.name = r.string("name");
    spec.alpha = r.number("alpha", spec.alpha);
    if (spec.alpha < 0.0) throw ConfigError(r.at("alpha"), "must be >= 0");
    if (r.has("overrides")) {
      const Reader o(r.raw("overrides"), r.at("overrides"));
      o.allow({"lambda", "mu", "alpha", "M", "kappa_over_nu"});
      if (o.has("lambda")) spec.lambda = o.number("lambda");
      if (o.has("mu")) spec.mu = o.positive("mu");
      if (o.has("alpha")) spec.biot_alpha = o.number("alpha");
      if (o.has("M")) spec.M = o.positive("M");
      if (o.has("kappa_over_nu")) spec.kappa_over_nu = o.positive("kappa_over_nu");
    }
    if (r.has("permeability")) {
      spec.permeability = parse_permeability(r.raw("permeability"), r.at("permeability"));
    }
  }
  static const std::set<std::string> known = {"ex41", "ex42", "ex43", "zero"};
  if (!known.count(spec.name)) {
    throw ConfigError(node.is_string() ? path : path + ".name",
                      "unknown experiment '" + spec.name + "' (ex41, ex42, ex43, zero)");
  }
  try {
    spec.problem();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path, e.what());
  }
  return spec;
}

SchemeSpec parse_scheme(const json& node, const std::string& path) {
  SchemeSpec spec;
  std::string name;
  if (node.is_string()) {
    name = node.get<std::string>();
  } else {
    const Reader r(node, path);
    r.allow({"scheme", "picard_max", "picard_tol"});
    name = r.string("scheme");
    if (r.has("picard_max")) {
      const long long m = r.integer("picard_max");
      if (m < 1 || m > 1000) throw ConfigError(r.at("picard_max"), "must lie in [1, 1000]");
      spec.picard_max = static_cast<int>(m);
    }
    if (r.has("picard_tol")) {
      spec.picard_tol = r.number("picard_tol");
      if (!(spec.picard_tol > 0.0 && spec.picard_tol < 1.0)) {
        throw ConfigError(r.at("picard_tol"), "must lie in (0, 1)");
      }
    }
  }
  if (name == "semi-explicit") {
    spec.scheme = Scheme::SemiExplicit;
  } else if (name == "implicit-picard") {
    spec.scheme = Scheme::ImplicitPicard;
  } else if (name == "delay-implicit") {
    spec.scheme = Scheme::DelayImplicit;
  } else {
    throw ConfigError(node.is_string() ? path : path + ".scheme",
                      "unknown scheme '" + name +
                          "' (semi-explicit, implicit-picard, delay-implicit)");
  }
  return spec;
}

std::vector<double> parse_positive_list(const Reader& r, const char* key) {
  std::vector<double> out;
  const json& list = r.array(key);
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string p = r.at(key) + "[" + std::to_string(i) + "]";
    if (!list[i].is_number()) throw ConfigError(p, "expected a number");
    const double x = list[i].get<double>();
    if (!(x > 0.0) || !std::isfinite(x)) throw ConfigError(p, "must be > 0");
    out.push_back(x);
  }
  return out;
}

void check_steps(double tau, double final_time, const std::string& path) {
  const double ratio = final_time / tau;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio) || std::round(ratio) < 1) {
    throw ConfigError(path, "T / tau must be a positive integer");
  }
}

// ---------------------------------------------------------------------------
// Execution helpers

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

template <class T>
std::string field(const std::optional<T>& v) {
  if (!v) return "";
  if constexpr (std::is_same_v<T, bool>) {
    return *v ? "1" : "0";
  } else if constexpr (std::is_integral_v<T>) {
    return std::to_string(*v);
  } else {
    return format_number(*v);
  }
}

/// Runs fn(i) for i in [0, n) on up to `workers` threads.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
  const std::size_t threads = std::min<std::size_t>(std::max(1, workers), n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

bool finite_state(const State& s) {
  auto ok = [](const Vector& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
  };
  return ok(s.u) && ok(s.p);
}

struct Outcome {
  std::optional<Trajectory> trajectory;
  double wall_time = 0.0;
  std::string failure;
};

// Median wall time over `repeats` identical runs; the last trajectory is kept.
Outcome timed_run(const Mesh& mesh, const StepperConfig& cfg, const ProblemData& problem,
                  int repeats) {
  Outcome out;
  std::vector<double> times;
  try {
    for (int r = 0; r < std::max(1, repeats); ++r) {
      Trajectory traj = run(mesh, cfg, problem);
      times.push_back(traj.report.wall_time);
      out.trajectory = std::move(traj);
    }
  } catch (const std::exception& e) {
    out.trajectory.reset();
    out.failure = e.what();
    return out;
  }
  std::sort(times.begin(), times.end());
  out.wall_time = times[times.size() / 2];
  if (!finite_state(out.trajectory->final_state())) {
    out.failure = "non-finite state";
  }
  return out;
}

std::vector<NormKind> csv_norms(const ExperimentConfig& config) {
  if (!config.norms.empty()) return config.norms;
  return {NormKind::A, NormKind::HV, NormKind::C, NormKind::Q, NormKind::HQ, NormKind::Triple};
}

void fill_errors(ResultRow& row, const ErrorReport& report) {
  row.err_u_a = report.u_error(NormKind::A);
  row.err_u_HV = report.u_error(NormKind::HV);
  row.err_p_c = report.p_error(NormKind::C);
  row.err_p_Q = report.p_error(NormKind::Q);
  row.err_p_HQ = report.p_error(NormKind::HQ);
  row.err_triple = report.triple_error();
}

void fill_statistics(ResultRow& row, const SchemeSpec& scheme, const Outcome& outcome) {
  row.wall_time = outcome.wall_time;
  if (scheme.scheme == Scheme::ImplicitPicard && outcome.trajectory) {
    row.picard_mean = outcome.trajectory->report.picard_mean;
    row.picard_max = outcome.trajectory->report.picard_max;
  }
}

struct ReferenceRun {
  Mesh mesh;
  Trajectory trajectory;
};

ReferenceRun reference_run(const ReferenceSpec& spec, const ProblemData& problem,
                           double final_time) {
  Mesh mesh = Mesh::structured(spec.n_ref);
  Trajectory traj = run(mesh, spec.scheme.stepper(spec.tau_ref, final_time), problem);
  if (!finite_state(traj.final_state())) {
    throw SolverFailure("reference run produced a non-finite state", 0.0);
  }
  return {std::move(mesh), std::move(traj)};
}

/// One (scheme, mesh, tau) measurement against the exact solution when the
/// problem has one, else against the reference run if provided.
ResultRow measure(const SchemeSpec& scheme, const Mesh& mesh, double tau,
                  const ProblemData& problem, double final_time,
                  const std::vector<NormKind>& kinds, const ReferenceRun* reference, int repeats,
                  std::optional<Trajectory>* keep = nullptr) {
  ResultRow row;
  row.scheme = scheme.label();
  row.h = mesh.h();
  row.tau = tau;
  const Outcome outcome = timed_run(mesh, scheme.stepper(tau, final_time), problem, repeats);
  fill_statistics(row, scheme, outcome);
  if (!outcome.failure.empty()) {
    row.failure = outcome.failure;
    return row;
  }
  const Trajectory& traj = *outcome.trajectory;
  if (problem.has_exact_solution()) {
    fill_errors(row, error_vs_manufactured(traj, mesh, problem.coeffs, *problem.exact_u,
                                           *problem.exact_p, final_time, kinds));
  } else if (reference) {
    fill_errors(row, error_vs_reference(traj, reference->trajectory, mesh, reference->mesh,
                                        problem.coeffs, kinds));
  }
  if (keep) *keep = outcome.trajectory;
  return row;
}

std::optional<double> order_between(const std::optional<double>& coarse,
                                    const std::optional<double>& fine) {
  if (!coarse || !fine || !(*coarse > 0.0) || !(*fine > 0.0)) return std::nullopt;
  const double values[2] = {*coarse, *fine};
  return convergence_order(values).front();
}

// Long-to-wide table: x column then one column per series.
std::string plot_csv(const std::string& x_name, const std::vector<std::string>& series,
                     const std::map<double, std::map<std::string, std::optional<double>>,
                                    std::greater<double>>& data) {
  std::ostringstream out;
  out << x_name;
  for (const auto& s : series) out << ',' << s;
  out << '\n';
  for (const auto& [x, values] : data) {
    out << format_number(x);
    for (const auto& s : series) {
      out << ',';
      const auto it = values.find(s);
      if (it != values.end() && it->second) out << format_number(*it->second);
    }
    out << '\n';
  }
  return out.str();
}

void require_schemes(const ExperimentConfig& config, const std::string& command) {
  if (config.schemes.empty()) throw ConfigError("$.schemes", command + " needs at least one scheme");
}

}  // namespace

// ---------------------------------------------------------------------------

std::string SchemeSpec::label() const {
  if (scheme == Scheme::ImplicitPicard) {
    return "implicit-picard(max=" + std::to_string(picard_max) + ")";
  }
  return scheme_name(scheme);
}

StepperConfig SchemeSpec::stepper(double tau, double final_time) const {
  StepperConfig cfg;
  cfg.scheme = scheme;
  cfg.tau = tau;
  cfg.final_time = final_time;
  cfg.picard_max = picard_max;
  cfg.picard_tol = picard_tol;
  return cfg;
}

ProblemData ExperimentSpec::problem(std::optional<double> alpha_override) const {
  Coefficients coeffs;
  if (name == "ex41") {
    coeffs = experiment_41_coefficients();
  } else if (name == "ex42") {
    coeffs = experiment_42_coefficients();
  } else if (name == "ex43") {
    coeffs = experiment_43_coefficients(alpha_override ? *alpha_override : alpha);
  } else if (name == "zero") {
    coeffs = Coefficients{};
  } else {
    throw std::invalid_argument("unknown experiment '" + name + "'");
  }
  if (lambda) coeffs.lambda = *lambda;
  if (mu) coeffs.mu = *mu;
  if (biot_alpha) coeffs.alpha = *biot_alpha;
  if (alpha_override && name == "ex43") coeffs.alpha = *alpha_override;
  if (M) coeffs.M = *M;
  if (kappa_over_nu) coeffs.kappa_over_nu_scale = *kappa_over_nu;
  if (permeability) coeffs.permeability = *permeability;
  coeffs.validate();

  ProblemData data;
  if (name == "ex41") {
    data = experiment_41_data();
  } else if (name == "ex42") {
    return experiment_42_data(coeffs);
  } else if (name == "ex43") {
    data = experiment_43_data(coeffs.alpha);
  } else {
    return zero_problem(coeffs);
  }
  data.coeffs = coeffs;
  return data;
}

ExperimentConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("$", std::string("invalid JSON: ") + e.what());
  }
  const Reader r(root, "$");
  r.allow({"experiment", "schemes", "mesh_levels", "tau_levels", "coupled", "final_time",
           "reference", "norms", "alphas", "runs", "repeats", "snapshots", "output_dir", "seed",
           "workers"});

  ExperimentConfig config;
  if (!r.has("experiment")) throw ConfigError("$.experiment", "missing required key");
  config.experiment = parse_experiment(r.raw("experiment"), "$.experiment");

  if (r.has("schemes")) {
    const json& list = r.array("schemes");
    for (std::size_t i = 0; i < list.size(); ++i) {
      config.schemes.push_back(parse_scheme(list[i], "$.schemes[" + std::to_string(i) + "]"));
    }
  }
  if (r.has("mesh_levels")) {
    const json& list = r.array("mesh_levels");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string p = "$.mesh_levels[" + std::to_string(i) + "]";
      if (!list[i].is_number_integer() || list[i].get<long long>() < 1 ||
          list[i].get<long long>() > 4096) {
        throw ConfigError(p, "expected an integer number of subdivisions in [1, 4096]");
      }
      config.mesh_levels.push_back(list[i].get<int>());
    }
  }
  if (r.has("tau_levels")) config.tau_levels = parse_positive_list(r, "tau_levels");
  config.coupled = r.boolean("coupled", false);
  if (r.has("final_time")) config.final_time = r.positive("final_time");

  const double horizon = config.horizon(config.experiment.problem());
  for (std::size_t i = 0; i < config.tau_levels.size(); ++i) {
    check_steps(config.tau_levels[i], horizon, "$.tau_levels[" + std::to_string(i) + "]");
  }

  if (r.has("reference")) {
    const Reader ref(r.raw("reference"), "$.reference");
    ref.allow({"n_ref", "tau_ref", "scheme"});
    ReferenceSpec spec;
    if (ref.has("n_ref")) {
      const long long n = ref.integer("n_ref");
      if (n < 1 || n > 4096) throw ConfigError(ref.at("n_ref"), "must lie in [1, 4096]");
      spec.n_ref = static_cast<int>(n);
    }
    if (ref.has("tau_ref")) spec.tau_ref = ref.positive("tau_ref");
    check_steps(spec.tau_ref, horizon, ref.at("tau_ref"));
    if (ref.has("scheme")) spec.scheme = parse_scheme(ref.raw("scheme"), ref.at("scheme"));
    for (std::size_t i = 0; i < config.mesh_levels.size(); ++i) {
      if (spec.n_ref % config.mesh_levels[i] != 0) {
        throw ConfigError("$.mesh_levels[" + std::to_string(i) + "]",
                          "must divide reference.n_ref");
      }
    }
    config.reference = spec;
  }

  if (r.has("norms")) {
    const json& list = r.array("norms");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string p = "$.norms[" + std::to_string(i) + "]";
      if (!list[i].is_string()) throw ConfigError(p, "expected a string");
      try {
        config.norms.push_back(parse_norm(list[i].get<std::string>()));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(p, e.what());
      }
    }
  }
  if (r.has("alphas")) {
    const json& list = r.array("alphas");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string p = "$.alphas[" + std::to_string(i) + "]";
      if (!list[i].is_number() || !(list[i].get<double>() >= 0.0)) {
        throw ConfigError(p, "expected a number >= 0");
      }
      config.alphas.push_back(list[i].get<double>());
    }
  }
  if (r.has("runs")) {
    const json& list = r.array("runs");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string p = "$.runs[" + std::to_string(i) + "]";
      const Reader run(list[i], p);
      run.allow({"scheme", "tau"});
      CompareRun entry;
      entry.scheme = parse_scheme(run.raw("scheme"), run.at("scheme"));
      entry.tau = run.positive("tau");
      check_steps(entry.tau, horizon, run.at("tau"));
      config.runs.push_back(entry);
    }
  }
  if (r.has("repeats")) {
    const long long k = r.integer("repeats");
    if (k < 1 || k > 100) throw ConfigError("$.repeats", "must lie in [1, 100]");
    config.repeats = static_cast<int>(k);
  }
  config.snapshots = r.boolean("snapshots", false);
  if (r.has("output_dir")) config.output_dir = r.string("output_dir");
  if (r.has("seed")) config.seed = r.integer("seed");
  if (r.has("workers")) {
    const long long w = r.integer("workers");
    if (w < 1 || w > 256) throw ConfigError("$.workers", "must lie in [1, 256]");
    config.workers = static_cast<int>(w);
  }
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("$", "cannot read config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

// ---------------------------------------------------------------------------

const std::vector<std::string>& ResultsTable::columns() {
  static const std::vector<std::string> names = {
      "scheme",    "h",          "tau",         "alpha",      "err_u_a",   "err_u_HV",
      "err_p_c",   "err_p_Q",    "err_p_HQ",    "err_triple", "order_u_a", "order_p_c",
      "picard_mean", "picard_max", "wall_time_s", "blowup_flag"};
  return names;
}

std::string ResultsTable::to_csv(bool include_timing) const {
  std::ostringstream out;
  const auto& names = columns();
  for (std::size_t i = 0; i < names.size(); ++i) out << (i ? "," : "") << names[i];
  out << '\n';
  for (const ResultRow& r : rows) {
    out << r.scheme << ',' << format_number(r.h) << ',' << format_number(r.tau) << ','
        << field(r.alpha) << ',' << field(r.err_u_a) << ',' << field(r.err_u_HV) << ','
        << field(r.err_p_c) << ',' << field(r.err_p_Q) << ',' << field(r.err_p_HQ) << ','
        << field(r.err_triple) << ',' << field(r.order_u_a) << ',' << field(r.order_p_c) << ','
        << field(r.picard_mean) << ',' << field(r.picard_max) << ','
        << (include_timing ? format_number(r.wall_time) : "") << ',' << field(r.blowup) << '\n';
  }
  return out.str();
}

int ResultsTable::failure_count() const {
  return static_cast<int>(std::count_if(rows.begin(), rows.end(),
                                        [](const ResultRow& r) { return !r.failure.empty(); }));
}

std::string format_snapshot(const Mesh& mesh, const State& state) {
  std::ostringstream out;
  out << "# t = " << format_number(state.t) << "\n# x y u1 u2 p\n";
  char line[160];
  for (int node = 0; node < mesh.node_count(); ++node) {
    const Point x = mesh.nodes()[node];
    const int k = mesh.interior_index(node);
    const double u1 = k < 0 ? 0.0 : state.u[2 * k];
    const double u2 = k < 0 ? 0.0 : state.u[2 * k + 1];
    const double p = k < 0 ? 0.0 : state.p[k];
    std::snprintf(line, sizeof line, "%.10g %.10g %.12g %.12g %.12g\n", x.x, x.y, u1, u2, p);
    out << line;
  }
  return out.str();
}

void CommandOutput::write(const std::filesystem::path& dir) const {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir.string());
  auto put = [&](const std::string& name, const std::string& text) {
    std::ofstream out(dir / name);
    out << text;
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
  };
  put("results.csv", table.to_csv());
  for (const auto& [name, text] : plots) put(name, text);
  if (!table.summary.empty()) {
    std::string text;
    for (const auto& line : table.summary) text += line + '\n';
    put("summary.txt", text);
  }
  if (table.failure_count() > 0) {
    std::string text;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
      if (!table.rows[i].failure.empty()) {
        text += "row " + std::to_string(i) + " (" + table.rows[i].scheme + ", tau=" +
                format_number(table.rows[i].tau) + "): " + table.rows[i].failure + '\n';
      }
    }
    put("failures.txt", text);
  }
  for (const Snapshot& s : snapshots) put(s.name, format_snapshot(s.mesh, s.state));
}

// ---------------------------------------------------------------------------

CommandOutput cmd_run(const ExperimentConfig& config) {
  if (config.schemes.size() != 1) throw ConfigError("$.schemes", "run needs exactly one scheme");
  if (config.mesh_levels.size() != 1) {
    throw ConfigError("$.mesh_levels", "run needs exactly one mesh level");
  }
  if (config.tau_levels.size() != 1) {
    throw ConfigError("$.tau_levels", "run needs exactly one tau level");
  }
  const ProblemData problem = config.experiment.problem();
  const double T = config.horizon(problem);
  std::optional<ReferenceRun> reference;
  if (!problem.has_exact_solution() && config.reference) {
    reference = reference_run(*config.reference, problem, T);
  }
  const Mesh mesh = Mesh::structured(config.mesh_levels.front());
  const SchemeSpec& scheme = config.schemes.front();
  std::optional<Trajectory> traj;
  CommandOutput out;
  out.table.rows.push_back(measure(scheme, mesh, config.tau_levels.front(), problem, T,
                                   csv_norms(config), reference ? &*reference : nullptr,
                                   config.repeats, &traj));
  if (problem.name == "ex43") out.table.rows.back().alpha = problem.coeffs.alpha;
  if (config.snapshots && traj) {
    out.snapshots.push_back({"snapshot_initial.txt", mesh, traj->states.front()});
    out.snapshots.push_back({"snapshot_final.txt", mesh, traj->final_state()});
  }
  return out;
}

CommandOutput cmd_convergence(const ExperimentConfig& config) {
  require_schemes(config, "convergence");
  const ProblemData problem = config.experiment.problem();
  const double T = config.horizon(problem);

  // Level sequence: (n, tau) pairs in refinement order.
  std::vector<std::pair<int, double>> levels;
  bool along_tau = true;
  if (config.coupled) {
    if (config.mesh_levels.size() < 2) {
      throw ConfigError("$.mesh_levels", "coupled convergence needs >= 2 mesh levels");
    }
    if (!config.tau_levels.empty() && config.tau_levels.size() != config.mesh_levels.size()) {
      throw ConfigError("$.tau_levels", "coupled mode pairs tau levels with mesh levels");
    }
    for (std::size_t i = 0; i < config.mesh_levels.size(); ++i) {
      const int n = config.mesh_levels[i];
      const double tau = config.tau_levels.empty() ? 1.0 / n : config.tau_levels[i];
      check_steps(tau, T, "$.mesh_levels[" + std::to_string(i) + "]");
      levels.emplace_back(n, tau);
    }
  } else {
    if (config.mesh_levels.empty()) throw ConfigError("$.mesh_levels", "needs >= 1 level");
    if (config.tau_levels.empty()) throw ConfigError("$.tau_levels", "needs >= 1 level");
    if (config.tau_levels.size() < 2 && config.mesh_levels.size() < 2) {
      throw ConfigError("$.tau_levels", "convergence needs >= 2 tau levels or mesh levels");
    }
    along_tau = config.tau_levels.size() >= 2;
    for (int n : config.mesh_levels) {
      for (double tau : config.tau_levels) levels.emplace_back(n, tau);
    }
  }

  std::optional<ReferenceRun> reference;
  if (!problem.has_exact_solution()) {
    if (!config.reference) {
      throw ConfigError("$.reference", "needed for experiments without exact solution");
    }
    reference = reference_run(*config.reference, problem, T);
  }
  const auto kinds = csv_norms(config);

  struct Job {
    std::size_t scheme;
    std::pair<int, double> level;
  };
  std::vector<Job> jobs;
  for (std::size_t s = 0; s < config.schemes.size(); ++s) {
    for (const auto& level : levels) jobs.push_back({s, level});
  }
  CommandOutput out;
  out.table.rows.resize(jobs.size());
  parallel_for(jobs.size(), config.workers, [&](std::size_t i) {
    const Job& job = jobs[i];
    const Mesh mesh = Mesh::structured(job.level.first);
    out.table.rows[i] = measure(config.schemes[job.scheme], mesh, job.level.second, problem, T,
                                kinds, reference ? &*reference : nullptr, config.repeats);
  });

  // Orders between consecutive rows of the same series.
  auto& rows = out.table.rows;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const ResultRow& prev = rows[i - 1];
    ResultRow& cur = rows[i];
    if (prev.scheme != cur.scheme) continue;
    if (!config.coupled) {
      if (along_tau && prev.h != cur.h) continue;
      if (!along_tau && prev.tau != cur.tau) continue;
    }
    cur.order_u_a = order_between(prev.err_u_a, cur.err_u_a);
    cur.order_p_c = order_between(prev.err_p_c, cur.err_p_c);
  }

  // Plot data: x = tau (or h), one series per scheme and mesh level.
  const std::string x_name = (config.coupled || along_tau) ? "tau" : "h";
  for (const auto& [metric, file] : {std::pair{"err_p_c", "plot_p.csv"},
                                     std::pair{"err_u_a", "plot_u.csv"}}) {
    std::vector<std::string> series;
    std::map<double, std::map<std::string, std::optional<double>>, std::greater<double>> data;
    for (const ResultRow& r : rows) {
      std::string name = r.scheme;
      if (!config.coupled && along_tau && config.mesh_levels.size() > 1) {
        name += "@h=" + format_number(r.h);
      }
      if (std::find(series.begin(), series.end(), name) == series.end()) series.push_back(name);
      const double x = x_name == "tau" ? r.tau : r.h;
      data[x][name] = std::string(metric) == "err_p_c" ? r.err_p_c : r.err_u_a;
    }
    out.plots.emplace_back(file, plot_csv(x_name, series, data));
  }
  return out;
}

CommandOutput cmd_sweep_alpha(const ExperimentConfig& config) {
  if (config.alphas.empty()) throw ConfigError("$.alphas", "sweep-alpha needs >= 1 alpha");
  if (config.mesh_levels.empty()) throw ConfigError("$.mesh_levels", "needs >= 1 level");
  if (config.tau_levels.empty()) throw ConfigError("$.tau_levels", "needs >= 1 level");
  const SchemeSpec* semi = nullptr;
  const SchemeSpec* implicit = nullptr;
  for (const auto& s : config.schemes) {
    if (s.scheme == Scheme::SemiExplicit && !semi) semi = &s;
    if (s.scheme == Scheme::ImplicitPicard && !implicit) implicit = &s;
  }
  if (!semi || !implicit) {
    throw ConfigError("$.schemes", "sweep-alpha needs a semi-explicit and an implicit-picard scheme");
  }

  struct Job {
    double alpha;
    int n;
    double tau;
  };
  std::vector<Job> jobs;
  for (double alpha : config.alphas) {
    for (int n : config.mesh_levels) {
      for (double tau : config.tau_levels) jobs.push_back({alpha, n, tau});
    }
  }
  CommandOutput out;
  out.table.rows.resize(jobs.size());
  parallel_for(jobs.size(), config.workers, [&](std::size_t i) {
    const Job& job = jobs[i];
    const ProblemData problem = config.experiment.problem(job.alpha);
    const double T = config.horizon(problem);
    const Mesh mesh = Mesh::structured(job.n);
    ResultRow row;
    row.scheme = semi->label();
    row.h = mesh.h();
    row.tau = job.tau;
    row.alpha = job.alpha;

    const Outcome ref = timed_run(mesh, implicit->stepper(job.tau, T), problem, 1);
    if (!ref.failure.empty()) {
      row.failure = "implicit reference: " + ref.failure;
      out.table.rows[i] = row;
      return;
    }
    const Outcome semi_run = timed_run(mesh, semi->stepper(job.tau, T), problem, config.repeats);
    row.wall_time = semi_run.wall_time;
    double deviation = std::numeric_limits<double>::infinity();
    if (semi_run.failure.empty()) {
      const NormSet norms(mesh, problem.coeffs);
      const ErrorReport report = error_between(semi_run.trajectory->final_state(),
                                               ref.trajectory->final_state(), norms,
                                               {NormKind::Triple});
      deviation = *report.triple_error();
    }
    // Overflow in the semi-explicit run is the phenomenon being measured.
    if (!std::isfinite(deviation)) deviation = std::numeric_limits<double>::infinity();
    row.err_triple = deviation;
    row.blowup = !(deviation <= 10.0);
    out.table.rows[i] = row;
  });

  // Plot data: x = alpha, one series per (h, tau).
  std::vector<std::string> series;
  std::map<double, std::map<std::string, std::optional<double>>, std::greater<double>> data;
  for (const ResultRow& r : out.table.rows) {
    const std::string name = "h=" + format_number(r.h) + ";tau=" + format_number(r.tau);
    if (std::find(series.begin(), series.end(), name) == series.end()) series.push_back(name);
    data[*r.alpha][name] = r.err_triple;
  }
  out.plots.emplace_back("plot_alpha.csv", plot_csv("alpha", series, data));
  return out;
}

CommandOutput cmd_compare(const ExperimentConfig& config) {
  if (config.mesh_levels.size() != 1) {
    throw ConfigError("$.mesh_levels", "compare needs exactly one mesh level");
  }
  std::vector<CompareRun> runs = config.runs;
  if (runs.empty()) {
    for (const auto& s : config.schemes) {
      for (double tau : config.tau_levels) runs.push_back({s, tau});
    }
  }
  if (runs.empty()) throw ConfigError("$.runs", "compare needs >= 1 (scheme, tau) pair");

  const ProblemData problem = config.experiment.problem();
  const double T = config.horizon(problem);
  std::optional<ReferenceRun> reference;
  if (!problem.has_exact_solution() && config.reference) {
    reference = reference_run(*config.reference, problem, T);
  }
  const Mesh mesh = Mesh::structured(config.mesh_levels.front());
  const auto kinds = csv_norms(config);

  CommandOutput out;
  out.table.rows.resize(runs.size());
  // Timing runs stay sequential so they do not compete for cores.
  for (std::size_t i = 0; i < runs.size(); ++i) {
    out.table.rows[i] = measure(runs[i].scheme, mesh, runs[i].tau, problem, T, kinds,
                                reference ? &*reference : nullptr, config.repeats);
  }

  const auto base = std::find_if(runs.begin(), runs.end(), [](const CompareRun& r) {
    return r.scheme.scheme == Scheme::SemiExplicit;
  });
  if (base != runs.end()) {
    const ResultRow& b = out.table.rows[static_cast<std::size_t>(base - runs.begin())];
    for (std::size_t i = 0; i < runs.size(); ++i) {
      if (runs[i].scheme.scheme != Scheme::ImplicitPicard) continue;
      const ResultRow& r = out.table.rows[i];
      if (!b.failure.empty() || !r.failure.empty() || !(b.wall_time > 0.0)) continue;
      out.table.summary.push_back("speed-up " + b.scheme + "(tau=" + format_number(b.tau) +
                                  ") vs " + r.scheme + "(tau=" + format_number(r.tau) +
                                  "): " + format_number(r.wall_time / b.wall_time));
    }
  }
  return out;
}

CommandOutput execute(const std::string& command, const ExperimentConfig& config) {
  if (command == "run") return cmd_run(config);
  if (command == "convergence") return cmd_convergence(config);
  if (command == "sweep-alpha") return cmd_sweep_alpha(config);
  if (command == "compare") return cmd_compare(config);
  throw std::invalid_argument("unknown command '" + command +
                              "' (run, convergence, sweep-alpha, compare)");
}

}  // namespace biot
