#include "fastosc/scenarios.hpp"

#include "fastosc/analytic.hpp"
#include "fastosc/beams.hpp"
#include "fastosc/correction.hpp"
#include "fastosc/eigensolver.hpp"
#include "fastosc/superpotential.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <thread>

namespace fastosc {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// ---------------------------------------------------------------------------------------------
// Parameter access with strict key checking

class Params {
 public:
  Params(const ScenarioConfig& config, std::set<std::string> allowed)
      : json_(config.parameters), scenario_(config.scenario) {
    if (!json_.is_object()) fail("parameters", "must be a JSON object");
    for (const auto& [key, value] : json_.items())
      if (!allowed.count(key)) fail(key, "is not a parameter of this scenario");
  }

  bool has(const std::string& key) const { return json_.contains(key) && !json_[key].is_null(); }

  double number(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    if (!json_[key].is_number()) fail(key, "must be a number");
    const double v = json_[key].get<double>();
    if (!std::isfinite(v)) fail(key, "must be finite");
    return v;
  }

  double positive(const std::string& key, double fallback) const {
    const double v = number(key, fallback);
    if (!(v > 0)) fail(key, "must be positive");
    return v;
  }

  int integer(const std::string& key, int fallback, int minimum) const {
    if (!has(key)) return fallback;
    if (!json_[key].is_number_integer()) fail(key, "must be an integer");
    const int v = json_[key].get<int>();
    if (v < minimum) fail(key, "must be at least " + std::to_string(minimum));
    return v;
  }

  bool flag(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    if (!json_[key].is_boolean()) fail(key, "must be true or false");
    return json_[key].get<bool>();
  }

  std::vector<double> numbers(const std::string& key, std::vector<double> fallback) const {
    if (!has(key)) return fallback;
    if (!json_[key].is_array() || json_[key].empty()) fail(key, "must be a non-empty array");
    std::vector<double> out;
    for (const auto& v : json_[key]) {
      if (!v.is_number()) fail(key, "must contain only numbers");
      out.push_back(v.get<double>());
    }
    return out;
  }

  const json& raw(const std::string& key) const { return json_[key]; }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    throw ConfigError(scenario_ + ": parameter '" + key + "' " + what);
  }

 private:
  const json& json_;
  std::string scenario_;
};

// ---------------------------------------------------------------------------------------------
// Profile / envelope / background specifications

PeriodicProfile profile_from_json(const json& entry, const Params& p, const std::string& key) {
  if (entry.is_string()) {
    const auto name = entry.get<std::string>();
    if (name == "cos") return cosine_profile();
    if (name == "sin") return sine_profile();
    p.fail(key, "names an unknown built-in profile '" + name + "' (use cos, sin or fourier)");
  }
  if (entry.is_object() && entry.contains("fourier") && entry["fourier"].is_array()) {
    std::vector<FourierTerm> terms;
    for (const auto& t : entry["fourier"]) {
      if (!t.is_array() || t.size() != 3 || !t[0].is_number_integer() || !t[1].is_number() ||
          !t[2].is_number())
        p.fail(key, "fourier entries must be [harmonic, cos_amplitude, sin_amplitude]");
      terms.push_back({t[0].get<int>(), t[1].get<double>(), t[2].get<double>()});
    }
    try {
      return fourier_profile(std::move(terms));
    } catch (const ProfileError& e) {
      p.fail(key, e.what());
    }
  }
  p.fail(key, "must be \"cos\", \"sin\" or {\"fourier\": [[n, a, b], ...]}");
}

double field_number(const json& entry, const char* name, const Params& p, const std::string& key) {
  if (!entry.contains(name) || !entry[name].is_number())
    p.fail(key, std::string("needs a numeric '") + name + "'");
  return entry[name].get<double>();
}

Envelope envelope_from_json(const json& entry, const Params& p, const std::string& key) {
  if (!entry.is_object() || !entry.contains("type") || !entry["type"].is_string())
    p.fail(key, "must be an object with a 'type'");
  const auto type = entry["type"].get<std::string>();
  try {
    if (type == "zero") return zero_envelope();
    if (type == "sech") return sech_envelope(field_number(entry, "amplitude", p, key));
    if (type == "square")
      return square_envelope(field_number(entry, "amplitude", p, key),
                             entry.contains("half_width") ? field_number(entry, "half_width", p, key)
                                                         : 1.0);
    if (type == "gaussian")
      return gaussian_envelope(field_number(entry, "amplitude", p, key),
                               field_number(entry, "sigma", p, key));
    if (type == "tabulated") {
      std::vector<double> xs, values;
      std::vector<Discontinuity> jumps;
      if (!entry.contains("points") || !entry["points"].is_array())
        p.fail(key, "tabulated envelope needs 'points': [[x, value], ...]");
      for (const auto& pt : entry["points"]) {
        if (!pt.is_array() || pt.size() != 2 || !pt[0].is_number() || !pt[1].is_number())
          p.fail(key, "points must be [x, value] pairs");
        xs.push_back(pt[0].get<double>());
        values.push_back(pt[1].get<double>());
      }
      if (entry.contains("discontinuities")) {
        for (const auto& d : entry["discontinuities"]) {
          if (!d.is_array() || d.size() != 2 || !d[0].is_number() || !d[1].is_number())
            p.fail(key, "discontinuities must be [x, jump] pairs");
          jumps.push_back({d[0].get<double>(), d[1].get<double>()});
        }
      }
      return tabulated_envelope(std::move(xs), std::move(values), std::move(jumps));
    }
  } catch (const std::invalid_argument& e) {
    p.fail(key, e.what());
  }
  p.fail(key, "has unknown type '" + type + "'");
}

RealFunction background_from_json(const json& entry, const Params& p, const std::string& key) {
  if (entry.is_null()) return {};
  if (entry.is_string() && entry.get<std::string>() == "none") return {};
  const Envelope shape = envelope_from_json(entry, p, key);
  if (!shape.discontinuities().empty()) p.fail(key, "background must be continuous");
  return [shape](double x) { return shape(x); };
}

/// Smallest integer half-width >= floor at which |Φ| < 5e-7 on both sides.
double auto_half_width(const Envelope& envelope, double floor) {
  for (double x = std::ceil(floor); x < 1000; x += 1)
    if (std::abs(envelope(x)) < 5e-7 && std::abs(envelope(-x)) < 5e-7) return x;
  throw ConfigError("envelope does not decay within |x| < 1000");
}

/// Symmetric grid whose nodes include ±anchor.
Grid aligned_grid(double half_width, double max_dx, double anchor) {
  const double cells_per_anchor = std::ceil(anchor / max_dx - 1e-9);
  const double dx = anchor / cells_per_anchor;
  const double cells_half = std::ceil(half_width / dx - 1e-9);
  const double x_max = cells_half * dx;
  return Grid(-x_max, x_max, static_cast<Eigen::Index>(2 * cells_half) - 1);
}

double max_spacing(double k, int nodes_per_period) {
  return std::min(kTwoPi / (nodes_per_period * k), 0.01);
}

// ---------------------------------------------------------------------------------------------
// Utilities

template <typename F>
void parallel_for(std::size_t count, int threads, F&& body) {
  unsigned workers = threads > 0 ? unsigned(threads) : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, unsigned(std::max<std::size_t>(count, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = next++; i < count; i = next++) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

/// Lowest m energies; with `richardson` the O(dx²) term is removed using a grid of half spacing.
Eigen::VectorXd grid_energies(const std::function<Grid(double)>& make_grid, double max_dx,
                              const RealFunction& potential, std::span<const DeltaTerm> deltas,
                              Eigen::Index m, bool richardson) {
  const Eigen::VectorXd coarse = lowest_energies(assemble(make_grid(max_dx), potential, deltas), m);
  if (!richardson) return coarse;
  const Eigen::VectorXd fine =
      lowest_energies(assemble(make_grid(max_dx / 2), potential, deltas), m);
  return (4 * fine - coarse) / 3;
}

json grid_json(const Grid& g) {
  return {{"x_min", g.x_min()}, {"x_max", g.x_max()}, {"n", g.size()}, {"dx", g.dx()}};
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Smoothed state sampled and discretely normalized.
Eigen::VectorXd normalized(Eigen::VectorXd psi, double dx) {
  normalize_state(psi, dx);
  return psi;
}

Table eigenfunction_table(const std::string& name, const Grid& grid, int stride,
                          const Eigen::VectorXd& exact, const Eigen::VectorXd& effective,
                          const Eigen::VectorXd* corrected) {
  Table t{name, "Eigenfunction samples on the solver grid", {"x", "psi_exact", "psi_effective"}, {}};
  if (corrected) t.columns.push_back("psi_corrected");
  for (Eigen::Index j = 0; j < grid.size(); j += stride) {
    std::vector<double> row{grid.x(j), exact[j], effective[j]};
    if (corrected) row.push_back((*corrected)[j]);
    t.rows.push_back(std::move(row));
  }
  return t;
}

double right_mass(const Eigen::VectorXd& psi, const Grid& grid) {
  double right = 0;
  for (Eigen::Index j = 0; j < grid.size(); ++j) {
    const double x = grid.x(j);
    const double w = x > 0 ? 1.0 : (x == 0 ? 0.5 : 0.0);
    right += w * psi[j] * psi[j] * grid.dx();
  }
  return right;
}

// ---------------------------------------------------------------------------------------------
// Scenario: sech envelope, smooth effective potential (five lowest states)

struct SechSettings {
  double a, k;
  int m, nodes_per_period, stride;
  double half_width;
  json profile_entry;
  PeriodicProfile profile = cosine_profile();
};

SechSettings parse_sech(const ScenarioConfig& c) {
  Params p(c, {"a", "k", "m", "profile", "half_width", "nodes_per_period", "stride"});
  SechSettings s;
  s.a = p.positive("a", 2 * std::sqrt(210.0));
  s.k = p.positive("k", 250.0);
  s.m = p.integer("m", 5, 1);
  s.nodes_per_period = p.integer("nodes_per_period", 16, 4);
  s.stride = p.integer("stride", 1, 1);
  s.profile_entry = p.has("profile") ? p.raw("profile") : json("cos");
  s.profile = profile_from_json(s.profile_entry, p, "profile");
  s.half_width = p.has("half_width") ? p.positive("half_width", 0)
                                     : auto_half_width(sech_envelope(s.a), 6);
  return s;
}

ResultBundle run_sech(const SechSettings& s) {
  const double k = find_phase_locked_k(s.k, {});
  const ModulatedPotential mp(k, s.profile, sech_envelope(s.a));
  const Grid grid = Grid::resolving(-s.half_width, s.half_width, k, s.nodes_per_period);
  require_decay(mp.envelope(), grid.x_min(), grid.x_max());
  const double dx = grid.dx();

  const Spectrum exact = lowest_eigenpairs(assemble(grid, [&](double x) { return mp(x); }), s.m);
  const EffectivePotential eff = effective_potential(mp);
  const Spectrum effective = lowest_eigenpairs(assemble(grid, eff), s.m);

  // -<g²>a² sech² is the Pöschl–Teller well with a_eff² / 2 = <g²> a².
  const double a_eff = s.a * std::sqrt(2 * mp.profile().g_mean_square());
  const double lambda = pt_lambda(a_eff);
  const auto analytic = pt_energies(a_eff);
  const bool integer_lambda = std::abs(lambda - std::round(lambda)) < 1e-9 * std::max(1.0, lambda);

  ResultBundle out;
  Table energies{"energies", "Exact, effective-grid and analytic energies",
                 {"a", "k", "n", "E_exact", "E_effective_grid", "E_analytic"}, {}};
  Table states{"states", "Overlaps and L2 errors of the exact states",
               {"a", "k", "n", "nodes_exact", "nodes_smoothed", "overlap_smoothed",
                "overlap_effective_grid", "l2_smoothed", "l2_corrected"},
               {}};
  double min_overlap = 1.0;
  json nodes = json::array();
  for (int n = 0; n < s.m; ++n) {
    const double e_an = n < int(analytic.size()) ? analytic[n] : kNaN;
    energies.rows.push_back({s.a, k, double(n), exact.energies[n], effective.energies[n], e_an});

    Eigen::VectorXd smooth;
    if (integer_lambda && n < int(std::round(lambda)))
      smooth = normalized(grid.sample([&](double x) { return pt_wavefunction(n, a_eff, x); }), dx);
    else
      smooth = effective.state(n);
    const Eigen::VectorXd psi = exact.state(n);
    const Eigen::VectorXd corrected = smooth + oscillatory_correction(mp, grid, smooth);
    const double ov = overlap(psi, smooth, dx);
    min_overlap = std::min(min_overlap, ov);
    states.rows.push_back({s.a, k, double(n), double(exact.node_counts[n]),
                           double(count_nodes(smooth)), ov, overlap(psi, effective.state(n), dx),
                           aligned_l2_distance(psi, smooth, dx),
                           aligned_l2_distance(psi, corrected, dx)});
    nodes.push_back(exact.node_counts[n]);
    out.tables.push_back(eigenfunction_table("eigenfunction_n" + std::to_string(n), grid, s.stride,
                                             psi, smooth, &corrected));
  }
  out.tables.insert(out.tables.begin(), {energies, states});
  out.metadata["grid"] = grid_json(grid);
  out.metadata["resolved_k"] = k;
  out.metadata["smoothed_states"] = integer_lambda ? "analytic" : "effective_grid";
  out.metrics = {{"lambda", lambda}, {"min_overlap", min_overlap}, {"node_counts", nodes}};
  return out;
}

// ---------------------------------------------------------------------------------------------
// Scenario: energies versus envelope height

struct SweepASettings {
  std::vector<double> a_values;
  double k, threshold;
  int nodes_per_period;
  bool richardson;
  json profile_entry;
  PeriodicProfile profile = cosine_profile();
};

SweepASettings parse_sweep_a(const ScenarioConfig& c) {
  Params p(c, {"a_values", "a_min", "a_max", "a_count", "k", "profile", "nodes_per_period",
               "richardson", "threshold"});
  SweepASettings s;
  if (p.has("a_values")) {
    if (p.has("a_min") || p.has("a_max") || p.has("a_count"))
      p.fail("a_values", "cannot be combined with a_min/a_max/a_count");
    s.a_values = p.numbers("a_values", {});
  } else {
    const double lo = p.positive("a_min", 1.0), hi = p.positive("a_max", 30.0);
    const int count = p.integer("a_count", 59, 2);
    if (!(hi > lo)) p.fail("a_max", "must exceed a_min");
    for (int i = 0; i < count; ++i) s.a_values.push_back(lo + (hi - lo) * i / (count - 1));
  }
  for (double a : s.a_values)
    if (!(a > 0)) p.fail("a_values", "must be positive");
  s.k = p.positive("k", 250.0);
  s.threshold = p.number("threshold", 4.0);
  s.nodes_per_period = p.integer("nodes_per_period", 16, 4);
  s.richardson = p.flag("richardson", false);
  s.profile_entry = p.has("profile") ? p.raw("profile") : json("cos");
  s.profile = profile_from_json(s.profile_entry, p, "profile");
  return s;
}

ResultBundle run_sweep_a(const SweepASettings& s, int threads) {
  const double k = find_phase_locked_k(s.k, {});
  struct Row {
    double a, lambda;
    Eigen::VectorXd exact;
    std::vector<double> analytic;
    Eigen::Index exact_bound;
  };
  std::vector<Row> rows(s.a_values.size());
  const double msq = s.profile.g_mean_square();
  parallel_for(rows.size(), threads, [&](std::size_t i) {
    const double a = s.a_values[i];
    const ModulatedPotential mp(k, s.profile, sech_envelope(a));
    const double a_eff = a * std::sqrt(2 * msq);
    std::vector<double> analytic;
    for (double e : pt_energies(a_eff))
      if (e < 0) analytic.push_back(e);
    const double hw = auto_half_width(mp.envelope(), 6);
    auto make = [hw](double dx) { return Grid::with_max_spacing(-hw, hw, dx); };
    const double dx = max_spacing(k, s.nodes_per_period);
    const RealFunction v = [&mp](double x) { return mp(x); };
    const auto m = static_cast<Eigen::Index>(std::max<std::size_t>(1, analytic.size()));
    rows[i] = {a, pt_lambda(a_eff), grid_energies(make, dx, v, {}, m, s.richardson), analytic,
               count_bound(assemble(make(dx), v))};
  });

  ResultBundle out;
  Table energies{"energies", "Bound energies versus envelope height",
                 {"a", "k", "lambda", "n", "E_exact", "E_analytic", "rel_error"}, {}};
  Table counts{"bound_counts", "Number of bound states",
               {"a", "k", "lambda", "analytic_bound", "exact_bound"}, {}};
  double worst = 0.0;
  for (const Row& r : rows) {
    for (std::size_t n = 0; n < r.analytic.size(); ++n) {
      const double rel = std::abs(r.exact[Eigen::Index(n)] - r.analytic[n]) / std::abs(r.analytic[n]);
      if (std::abs(r.analytic[n]) >= s.threshold) worst = std::max(worst, rel);
      energies.rows.push_back({r.a, k, r.lambda, double(n), r.exact[Eigen::Index(n)], r.analytic[n], rel});
    }
    counts.rows.push_back({r.a, k, r.lambda, double(r.analytic.size()), double(r.exact_bound)});
  }
  out.tables = {energies, counts};
  out.metadata["resolved_k"] = k;
  out.metrics = {{"max_rel_error_above_threshold", worst}, {"threshold", s.threshold}};
  return out;
}

// ---------------------------------------------------------------------------------------------
// Scenarios: square envelope with cos (no deltas) or sin (edge deltas)

struct SquareSettings {
  double a, envelope_half_width, target_k, phase, half_width, count_half_width;
  int m, nodes_per_period, stride;
  PeriodicProfile profile = cosine_profile();
};

SquareSettings parse_square(const ScenarioConfig& c, PeriodicProfile profile) {
  Params p(c, {"a", "envelope_half_width", "target_k", "phase", "m", "half_width",
               "count_half_width", "nodes_per_period", "stride"});
  SquareSettings s;
  s.a = p.positive("a", 20.0);
  s.envelope_half_width = p.positive("envelope_half_width", 1.0);
  s.target_k = p.positive("target_k", 250.0);
  s.phase = p.number("phase", 0.0);
  s.m = p.integer("m", 5, 1);
  s.half_width = p.positive("half_width", 6.0);
  s.count_half_width = p.positive("count_half_width", 60.0);
  s.nodes_per_period = p.integer("nodes_per_period", 16, 4);
  s.stride = p.integer("stride", 1, 1);
  if (!(s.half_width > s.envelope_half_width)) p.fail("half_width", "must exceed envelope_half_width");
  if (s.count_half_width < s.half_width) p.fail("count_half_width", "must be >= half_width");
  s.profile = std::move(profile);
  return s;
}

ResultBundle run_square(const SquareSettings& s) {
  const double L = s.envelope_half_width;
  const double k = find_phase_locked_k(s.target_k, {{-L, s.phase}, {L, s.phase}});
  const ModulatedPotential mp(k, s.profile, square_envelope(s.a, L));
  const double max_dx = max_spacing(k, s.nodes_per_period);
  const Grid grid = aligned_grid(s.half_width, max_dx, L);
  const double dx = grid.dx();
  const RealFunction v = [&mp](double x) { return mp(x); };

  const Spectrum exact = lowest_eigenpairs(assemble(grid, v), s.m);
  const EffectivePotential eff = effective_potential(mp);
  const Spectrum effective = lowest_eigenpairs(assemble(grid, eff), s.m);
  const bool has_deltas = std::any_of(eff.deltas.begin(), eff.deltas.end(),
                                      [](const DeltaTerm& d) { return std::abs(d.strength) > 1e-12; });

  const double depth = mp.profile().g_mean_square() * s.a * s.a;
  const auto levels = finite_well_levels(depth, L);

  const Grid wide = aligned_grid(s.count_half_width, max_dx, L);
  const auto exact_bound = count_bound(assemble(wide, v));
  const auto effective_bound = count_bound(assemble(wide, eff));

  ResultBundle out;
  Table energies{"energies", "Exact, effective-grid and bare finite-well energies",
                 {"a", "k", "n", "E_exact", "E_effective_grid", "E_finite_well"}, {}};
  Table states{"states", "Overlaps of the exact states with the reference states",
               {"a", "k", "n", "nodes_exact", "overlap_reference", "overlap_effective_grid",
                "right_mass"},
               {}};
  double min_overlap = 1.0;
  for (int n = 0; n < s.m; ++n) {
    const double e_well = n < int(levels.size()) ? levels[n] : kNaN;
    energies.rows.push_back({s.a, k, double(n), exact.energies[n], effective.energies[n], e_well});
    Eigen::VectorXd reference;
    if (!has_deltas && n < int(levels.size()))
      reference = normalized(grid.sample([&](double x) {
                               return finite_well_wavefunction(depth, L, levels[n], n, x);
                             }),
                             dx);
    else
      reference = effective.state(n);
    const Eigen::VectorXd psi = exact.state(n);
    const double ov = overlap(psi, reference, dx);
    min_overlap = std::min(min_overlap, ov);
    states.rows.push_back({s.a, k, double(n), double(exact.node_counts[n]), ov,
                           overlap(psi, effective.state(n), dx), right_mass(psi, grid)});
    out.tables.push_back(eigenfunction_table("eigenfunction_n" + std::to_string(n), grid, s.stride,
                                             psi, reference, nullptr));
  }
  Table counts{"bound_counts", "Bound-state counts on the wide grid",
               {"a", "k", "count_half_width", "oracle", "exact", "effective_grid"},
               {{s.a, k, wide.x_max(), double(levels.size()), double(exact_bound),
                 double(effective_bound)}}};
  out.tables.insert(out.tables.begin(), {energies, states, counts});

  json deltas = json::array();
  for (const auto& d : eff.deltas) deltas.push_back({{"position", d.position}, {"strength", d.strength}});
  out.metadata["grid"] = grid_json(grid);
  out.metadata["count_grid"] = grid_json(wide);
  out.metadata["resolved_k"] = k;
  out.metadata["reference_states"] = has_deltas ? "effective_grid" : "finite_well";
  const double mass = right_mass(exact.state(0), grid);
  out.metrics = {{"min_overlap", min_overlap},
                 {"deltas", deltas},
                 {"well_depth", depth},
                 {"bound_count_oracle", levels.size()},
                 {"bound_count_exact", exact_bound},
                 {"bound_count_effective_grid", effective_bound},
                 {"ground_right_mass", mass},
                 {"ground_left_mass", 1.0 - mass}};
  return out;
}

// ---------------------------------------------------------------------------------------------
// Scenario: crossed Gaussian beams

struct BeamSettings {
  BeamSetup setup;
  double min_separation, half_width;
  int m, nodes_per_period, stride, profile_points;
};

BeamSettings parse_beams(const ScenarioConfig& c) {
  Params p(c, {"kappa", "alpha", "b", "amplitude", "cancel_background", "min_separation", "m",
               "half_width", "nodes_per_period", "stride", "profile_points"});
  BeamSettings s;
  s.setup.kappa = p.positive("kappa", 200.0);
  s.setup.alpha = p.positive("alpha", kTwoPi / 12);
  s.setup.b = p.positive("b", 2.0);
  s.setup.amplitude = p.number("amplitude", 10 * 2 * 200.0 * std::cos(kTwoPi / 12));
  s.setup.cancel_background = p.flag("cancel_background", true);
  s.min_separation = p.positive("min_separation", 10.0);
  s.m = p.integer("m", 5, 1);
  s.nodes_per_period = p.integer("nodes_per_period", 16, 4);
  s.stride = p.integer("stride", 1, 1);
  s.profile_points = p.integer("profile_points", 4001, 3);
  try {
    validate(s.setup);
    const BeamMapping mapping = to_modulated_form(s.setup, s.min_separation);
    s.half_width = p.has("half_width") ? p.positive("half_width", 0)
                                       : auto_half_width(mapping.potential.envelope(), 6);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("beams: ") + e.what());
  }
  return s;
}

ResultBundle run_beams(const BeamSettings& s) {
  const BeamMapping mapping = to_modulated_form(s.setup, s.min_separation);
  const ModulatedPotential& mp = mapping.potential;
  const double k = find_phase_locked_k(mp.k(), {});
  const Grid grid = Grid::resolving(-s.half_width, s.half_width, k, s.nodes_per_period);
  require_decay(mp.envelope(), grid.x_min(), grid.x_max());
  const double dx = grid.dx();

  const Spectrum exact = lowest_eigenpairs(assemble(grid, [&](double x) { return mp(x); }), s.m);
  const EffectivePotential eff = effective_potential(mp);
  const Spectrum effective = lowest_eigenpairs(assemble(grid, eff), s.m);

  ResultBundle out;
  Table profile{"potential_profile", "On-axis intensity, background and potentials",
                {"x", "intensity", "background", "V_full", "V_effective_smooth"}, {}};
  for (int i = 0; i < s.profile_points; ++i) {
    const double x = grid.x_min() + (grid.x_max() - grid.x_min()) * i / (s.profile_points - 1);
    profile.rows.push_back({x, intensity_on_axis(s.setup, x), background(s.setup, x), mp(x),
                            eff.smooth(x)});
  }
  Table energies{"energies", "Exact and effective energies",
                 {"k", "n", "E_exact", "E_effective_grid", "overlap"}, {}};
  double min_overlap = 1.0;
  for (int n = 0; n < s.m; ++n) {
    const double ov = overlap(exact.state(n), effective.state(n), dx);
    min_overlap = std::min(min_overlap, ov);
    energies.rows.push_back({k, double(n), exact.energies[n], effective.energies[n], ov});
    const Eigen::VectorXd smooth = effective.state(n);
    const Eigen::VectorXd corrected = smooth + oscillatory_correction(mp, grid, smooth);
    out.tables.push_back(eigenfunction_table("eigenfunction_n" + std::to_string(n), grid, s.stride,
                                             exact.state(n), smooth, &corrected));
  }
  out.tables.insert(out.tables.begin(), {profile, energies});
  out.metadata["grid"] = grid_json(grid);
  out.metadata["resolved_k"] = k;
  const double peak = mp.envelope()(0.0);
  out.metrics = {{"k", k},
                 {"scale_separation", mapping.scale_separation},
                 {"envelope_width", s.setup.b / std::sin(s.setup.alpha)},
                 {"effective_depth", mp.profile().g_mean_square() * peak * peak},
                 {"min_overlap", min_overlap}};
  return out;
}

// ---------------------------------------------------------------------------------------------
// Scenario: ground-energy error versus k

struct ConvergenceSettings {
  double a;
  std::vector<double> k_values;
  int nodes_per_period;
  bool richardson;
  double half_width;
  PeriodicProfile profile = cosine_profile();
  std::optional<Envelope> envelope;
  RealFunction background;
};

ConvergenceSettings parse_convergence(const ScenarioConfig& c) {
  Params p(c, {"a", "k_values", "profile", "envelope", "background", "nodes_per_period",
               "richardson", "half_width"});
  ConvergenceSettings s;
  s.a = p.positive("a", 5.0);
  s.k_values = p.numbers("k_values", {250, 500, 1000, 2000});
  for (double k : s.k_values)
    if (!(k > 0)) p.fail("k_values", "must be positive");
  s.nodes_per_period = p.integer("nodes_per_period", 32, 4);
  s.richardson = p.flag("richardson", true);
  if (p.has("profile")) s.profile = profile_from_json(p.raw("profile"), p, "profile");
  if (p.has("envelope")) s.envelope = envelope_from_json(p.raw("envelope"), p, "envelope");
  if (p.has("background")) s.background = background_from_json(p.raw("background"), p, "background");
  const Envelope env = s.envelope ? *s.envelope : sech_envelope(s.a);
  s.half_width = p.has("half_width") ? p.positive("half_width", 0) : auto_half_width(env, 6);
  return s;
}

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = double(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ResultBundle run_convergence(const ConvergenceSettings& s, int threads) {
  const Envelope envelope = s.envelope ? *s.envelope : sech_envelope(s.a);
  const double hw = s.half_width;
  auto make = [hw](double dx) { return Grid::with_max_spacing(-hw, hw, dx); };

  // Reference: analytic Pöschl–Teller ground state for the default sech case, otherwise the
  // effective potential on a fine grid.
  const bool analytic = !s.envelope && !s.background;
  double reference;
  if (analytic) {
    const double a_eff = s.a * std::sqrt(2 * s.profile.g_mean_square());
    reference = pt_energies(a_eff).front();
  } else {
    const ModulatedPotential any(s.k_values.front(), s.profile, envelope, s.background);
    const EffectivePotential eff = effective_potential(any);
    reference = grid_energies(make, 2e-3, eff.smooth, eff.deltas, 1, true)[0];
  }

  std::vector<double> exact(s.k_values.size());
  parallel_for(exact.size(), threads, [&](std::size_t i) {
    const double k = find_phase_locked_k(s.k_values[i], {});
    const ModulatedPotential mp(k, s.profile, envelope, s.background);
    require_decay(mp.envelope(), -hw, hw);
    const RealFunction v = [&mp](double x) { return mp(x); };
    exact[i] = grid_energies(make, max_spacing(k, s.nodes_per_period), v, {}, 1, s.richardson)[0];
  });

  ResultBundle out;
  Table table{"convergence", "Ground-energy error of the effective description versus k",
              {"a", "k", "E0_exact", "E0_reference", "abs_error"}, {}};
  std::vector<double> errors;
  for (std::size_t i = 0; i < exact.size(); ++i) {
    errors.push_back(std::abs(exact[i] - reference));
    table.rows.push_back({s.a, s.k_values[i], exact[i], reference, errors.back()});
  }
  out.tables = {table};
  out.metadata["reference"] = analytic ? "analytic" : "effective_grid";
  out.metadata["half_width"] = hw;
  out.metadata["resolved_k"] = s.k_values;
  out.metrics = {{"slope", s.k_values.size() > 1 ? loglog_slope(s.k_values, errors) : kNaN},
                 {"errors", errors}};
  return out;
}

// ---------------------------------------------------------------------------------------------
// Scenario: superpotential averaging error versus k

struct AveragingSettings {
  double a, x0, x1, w0, cap;
  std::vector<double> k_values;
  int trajectory_points;
  PeriodicProfile profile = cosine_profile();
  std::optional<Envelope> envelope;
  RealFunction background;
};

AveragingSettings parse_averaging(const ScenarioConfig& c) {
  Params p(c, {"a", "x0", "x1", "w0", "cap", "k_values", "profile", "envelope", "background",
               "trajectory_points"});
  AveragingSettings s;
  s.a = p.positive("a", 1.0);
  s.x0 = p.number("x0", -3.0);
  s.x1 = p.number("x1", 0.0);
  if (!(s.x1 > s.x0)) p.fail("x1", "must exceed x0");
  s.w0 = p.number("w0", 0.0);
  s.cap = p.positive("cap", 1e6);
  s.k_values = p.numbers("k_values", {250, 500, 1000, 2000});
  for (double k : s.k_values)
    if (!(k > 0)) p.fail("k_values", "must be positive");
  s.trajectory_points = p.integer("trajectory_points", 2001, 2);
  if (p.has("profile")) s.profile = profile_from_json(p.raw("profile"), p, "profile");
  if (p.has("envelope")) s.envelope = envelope_from_json(p.raw("envelope"), p, "envelope");
  if (p.has("background")) s.background = background_from_json(p.raw("background"), p, "background");
  return s;
}

ResultBundle run_averaging(const AveragingSettings& s, int threads) {
  const Envelope envelope = s.envelope ? *s.envelope : sech_envelope(s.a);
  struct Case {
    double k, error;
    Trajectory exact, averaged;
    Eigen::VectorXd w;
  };
  std::vector<Case> cases(s.k_values.size());
  parallel_for(cases.size(), threads, [&](std::size_t i) {
    const double k = find_phase_locked_k(s.k_values[i], {});
    const ModulatedPotential mp(k, s.profile, envelope, s.background);
    RiccatiOptions opt{s.cap, riccati_step(k)};
    Case c;
    c.k = k;
    c.error = averaging_error(mp, s.x0, s.w0, s.x1, opt);
    c.exact = integrate_exact(mp, s.x0, s.w0, s.x1, opt);
    c.averaged = integrate_averaged(mp.profile().g_mean_square(), mp.envelope(),
                                    mp.background_function(), s.x0, s.w0, s.x1, opt,
                                    effective_potential(mp).deltas);
    c.w = recover_superpotential(mp, c.exact);
    cases[i] = std::move(c);
  });

  ResultBundle out;
  Table errors{"averaging_error", "Sup-norm distance between exact and averaged W'",
               {"a", "k", "error", "ratio_to_previous", "order_estimate"}, {}};
  json ratios = json::array();
  for (std::size_t i = 0; i < cases.size(); ++i) {
    double ratio = kNaN, order = kNaN;
    if (i > 0) {
      ratio = cases[i].error / cases[i - 1].error;
      order = std::log(cases[i - 1].error / cases[i].error) / std::log(cases[i].k / cases[i - 1].k);
      ratios.push_back(ratio);
    }
    errors.rows.push_back({s.a, cases[i].k, cases[i].error, ratio, order});
  }
  out.tables.push_back(errors);
  for (const Case& c : cases) {
    Table t{"trajectory_k" + std::to_string(static_cast<long>(std::llround(c.k))),
            "Exact and averaged transformed superpotentials",
            {"k", "x", "W_prime_exact", "W_prime_averaged", "W_exact"},
            {}};
    const Eigen::Index n = c.exact.x.size();
    const Eigen::Index stride = std::max<Eigen::Index>(1, n / (s.trajectory_points - 1));
    for (Eigen::Index j = 0; j < n; j += stride)
      t.rows.push_back({c.k, c.exact.x[j], c.exact.value[j], c.averaged.value[j], c.w[j]});
    if ((n - 1) % stride != 0)
      t.rows.push_back({c.k, c.exact.x[n - 1], c.exact.value[n - 1], c.averaged.value[n - 1],
                        c.w[n - 1]});
    out.tables.push_back(std::move(t));
  }
  std::vector<double> errs;
  for (const auto& c : cases) errs.push_back(c.error);
  out.metrics = {{"errors", errs}, {"ratios", ratios}};
  out.metadata["resolved_k"] = s.k_values;
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------------------------

const std::vector<ScenarioInfo>& scenario_catalog() {
  static const std::vector<ScenarioInfo> catalog{
      {"sech_figure1", "sech envelope with cos modulation: lowest states, exact vs Pöschl–Teller"},
      {"energies_figure2", "bound energies versus envelope height a at fixed k"},
      {"square_cos_figure3", "square envelope, v = cos, phase-locked k: finite-well comparison"},
      {"square_sin_figure4", "square envelope, v = sin, phase-locked k: well plus edge deltas"},
      {"beams", "crossed Gaussian laser beams mapped onto the modulated form"},
      {"convergence_sweep", "ground-energy error of the effective description versus k"},
      {"averaging_sweep", "superpotential averaging error versus k"},
  };
  return catalog;
}

ScenarioConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config: top level must be a JSON object");
  for (const auto& [key, value] : doc.items())
    if (key != "scenario" && key != "parameters" && key != "output_dir")
      throw ConfigError("config: unknown key '" + key + "'");
  if (!doc.contains("scenario") || !doc["scenario"].is_string())
    throw ConfigError("config: 'scenario' must be a string");
  ScenarioConfig c;
  c.scenario = doc["scenario"].get<std::string>();
  if (doc.contains("parameters")) c.parameters = doc["parameters"];
  if (doc.contains("output_dir")) {
    if (!doc["output_dir"].is_string()) throw ConfigError("config: 'output_dir' must be a string");
    c.output_dir = doc["output_dir"].get<std::string>();
  }
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  json doc;
  try {
    doc = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError("config: " + path.string() + ": " + e.what());
  }
  return parse_config(doc);
}

void validate(const ScenarioConfig& c) {
  const auto& names = scenario_catalog();
  if (std::none_of(names.begin(), names.end(), [&](const auto& s) { return s.name == c.scenario; }))
    throw ConfigError("config: unknown scenario '" + c.scenario + "'");
  if (c.scenario == "sech_figure1") parse_sech(c);
  if (c.scenario == "energies_figure2") parse_sweep_a(c);
  if (c.scenario == "square_cos_figure3") parse_square(c, cosine_profile());
  if (c.scenario == "square_sin_figure4") parse_square(c, sine_profile());
  if (c.scenario == "beams") parse_beams(c);
  if (c.scenario == "convergence_sweep") parse_convergence(c);
  if (c.scenario == "averaging_sweep") parse_averaging(c);
}

ResultBundle run(const ScenarioConfig& c, const RunOptions& options) {
  validate(c);
  ResultBundle out;
  try {
    if (c.scenario == "sech_figure1") out = run_sech(parse_sech(c));
    if (c.scenario == "energies_figure2") out = run_sweep_a(parse_sweep_a(c), options.threads);
    if (c.scenario == "square_cos_figure3") out = run_square(parse_square(c, cosine_profile()));
    if (c.scenario == "square_sin_figure4") out = run_square(parse_square(c, sine_profile()));
    if (c.scenario == "beams") out = run_beams(parse_beams(c));
    if (c.scenario == "convergence_sweep")
      out = run_convergence(parse_convergence(c), options.threads);
    if (c.scenario == "averaging_sweep") out = run_averaging(parse_averaging(c), options.threads);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw std::runtime_error(c.scenario + ": " + e.what());
  }
  out.metadata["scenario"] = c.scenario;
  out.metadata["parameters"] = c.parameters;
  out.metadata["version"] = std::string(kVersion);
  out.metadata["generated_at"] = utc_now();
  return out;
}

const Table* ResultBundle::find(std::string_view name) const {
  for (const auto& t : tables)
    if (t.name == name) return &t;
  return nullptr;
}

std::string format_csv(const Table& table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out += ',';
    out += table.columns[i];
  }
  out += '\n';
  char buf[40];
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      std::snprintf(buf, sizeof buf, "%.17g", row[i]);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

std::vector<std::filesystem::path> emit(const ResultBundle& bundle,
                                        const std::filesystem::path& directory) {
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec) throw std::runtime_error("emit: cannot create " + directory.string() + ": " + ec.message());

  std::vector<std::filesystem::path> written;
  json summary{{"metadata", bundle.metadata}, {"metrics", bundle.metrics}, {"tables", json::array()}};
  for (const Table& t : bundle.tables) {
    const auto path = directory / (t.name + ".csv");
    std::ofstream out(path, std::ios::binary);
    out << format_csv(t);
    if (!out) throw std::runtime_error("emit: failed writing " + path.string());
    written.push_back(path);
    summary["tables"].push_back({{"name", t.name},
                                 {"file", path.filename().string()},
                                 {"description", t.description},
                                 {"columns", t.columns},
                                 {"rows", t.rows.size()}});
  }
  const auto path = directory / "summary.json";
  std::ofstream out(path, std::ios::binary);
  out << summary.dump(2) << '\n';
  if (!out) throw std::runtime_error("emit: failed writing " + path.string());
  written.push_back(path);
  return written;
}

}  // namespace fastosc
