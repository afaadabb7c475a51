#include "uavrelay/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>

#include "uavrelay/dualhop.hpp"
#include "uavrelay/errors.hpp"
#include "uavrelay/multihop.hpp"
#include "uavrelay/multisource.hpp"
#include "uavrelay/oracle.hpp"
#include "uavrelay/scenario_io.hpp"
#include "uavrelay/stochastic.hpp"

namespace uavrelay::cli {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double to_db(double v) { return 10 * std::log10(v); }

// NaN and infinities are not JSON numbers
json jnum(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

struct Csv {
  std::ostringstream out;
  Csv(const std::string& command, std::initializer_list<const char*> cols) {
    out << "# uavplan-csv v1 " << command << "\n";
    bool first = true;
    for (auto c : cols) out << (first ? "" : ",") << c, first = false;
    out << "\n";
  }
  template <class... T>
  void row(const T&... cells) {
    bool first = true;
    ((out << (first ? "" : ",") << cell(cells), first = false), ...);
    out << "\n";
  }
  static std::string cell(double v) { return num(v); }
  static std::string cell(std::size_t v) { return std::to_string(v); }
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(bool v) { return v ? "1" : "0"; }
  static std::string cell(const std::string& v) { return v; }
  static std::string cell(const char* v) { return v; }
};

struct Options {
  std::string command;
  std::string scenario;
  std::string out;
  std::string gamma;
  std::string gamma_sweep;
  std::string grid;
  std::string kind = "deterministic";
  std::string mode = "cartesian";
  std::string inner;
  std::string record;
  std::vector<std::string> vary;
  double epsilon = 0.1;
  double eps_h = 10;
  std::optional<double> h;
  std::size_t n_uavs = 1;
  std::size_t iterations = 30;
  std::size_t trials = 1000;
  std::size_t n_max = 8;
  std::size_t per_hop_grid = 64;
  std::size_t samples = 512;
  std::uint64_t seed = 1;
};

struct Result {
  json outputs;
  std::string csv;
  json provenance = json::object();
};

std::pair<std::size_t, std::size_t> parse_grid(const std::string& g, std::size_t nx, std::size_t nh) {
  if (g.empty()) return {nx, nh};
  auto p = g.find('x');
  try {
    if (p == std::string::npos) throw std::invalid_argument(g);
    return {std::stoul(g.substr(0, p)), std::stoul(g.substr(p + 1))};
  } catch (const std::exception&) {
    throw DomainError("--grid expects NXxNH, got '" + g + "'");
  }
}

double require_gamma(const Options& o) {
  if (o.gamma.empty()) throw DomainError(o.command + ": --gamma is required");
  return parse_gamma(o.gamma);
}

const InterferenceModel& require_field(const ScenarioBundle& b, const std::string& cmd) {
  if (!b.field) throw DomainError(cmd + ": the scenario has no interference_field section");
  return *b.field;
}

double altitude(const Options& o, const Scenario& s) { return o.h.value_or(s.h_min); }

json placement_json(const Placement& pl) {
  return {{"hops_m", pl.hop_distances}, {"positions_m", pl.positions()}, {"altitudes_m", pl.altitudes}};
}

Result dualhop_opt(const Options&, const ScenarioBundle& b) {
  auto r = optimal_position(b.scenario);
  Result res;
  res.outputs = {{"x_m", r.x},
                 {"h_m", r.h},
                 {"sir_uav", r.report.per_link[0]},
                 {"sir_rx", r.report.per_link[1]},
                 {"sir_system", r.report.system_sir},
                 {"sir_system_db", to_db(r.report.system_sir)},
                 {"rule", r.rule},
                 {"locus_empty", r.locus_empty},
                 {"psi_convention_disagrees", r.psi_convention_disagrees}};
  Csv c("dualhop-opt", {"x_m", "h_m", "sir_uav", "sir_rx", "sir_system", "rule"});
  c.row(r.x, r.h, r.report.per_link[0], r.report.per_link[1], r.report.system_sir, r.rule);
  res.csv = c.out.str();
  return res;
}

Result dualhop_locus(const Options& o, const ScenarioBundle& b) {
  const Scenario& s = b.scenario;
  if (o.samples < 2) throw DomainError("dualhop-locus: --samples must be >= 2");
  Csv c("dualhop-locus", {"x_m", "h_plus_m", "h_minus_m", "plus_in_band", "minus_in_band"});
  std::size_t in_band = 0;
  for (std::size_t i = 0; i < o.samples; ++i) {
    double x = s.D * double(i) / double(o.samples - 1);
    auto L = locus_lambda(s, x);
    double hp = L.real && L.plus > 0 ? std::sqrt(L.plus) : kNaN;
    double hm = L.real && L.minus > 0 ? std::sqrt(L.minus) : kNaN;
    bool bp = hp >= s.h_min && hp <= s.h_max, bm = hm >= s.h_min && hm <= s.h_max;
    in_band += bp + bm;
    c.row(x, hp, hm, bp, bm);
  }
  Result res;
  res.outputs = {{"samples", o.samples}, {"points_in_band", in_band}};
  res.csv = c.out.str();
  return res;
}

std::vector<double> gamma_points(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  if (parts.size() != 3) throw DomainError("--gamma-sweep expects lo:hi:count");
  std::size_t n = 0;
  try {
    n = std::stoul(parts[2]);
  } catch (const std::exception&) {
    throw DomainError("--gamma-sweep: bad count '" + parts[2] + "'");
  }
  if (n < 1) throw DomainError("--gamma-sweep: count must be >= 1");
  double lo = parse_gamma(parts[0]), hi = parse_gamma(parts[1]);
  auto is_db = [](const std::string& t) { return t.size() > 2 && t.substr(t.size() - 2) == "db"; };
  const bool db = is_db(parts[0]) && is_db(parts[1]);
  std::vector<double> out;
  for (std::size_t i = 0; i < n; ++i) {
    double t = n == 1 ? 0.0 : double(i) / double(n - 1);
    out.push_back(db ? std::pow(10.0, (to_db(lo) + t * (to_db(hi) - to_db(lo))) / 10) : lo + t * (hi - lo));
  }
  return out;
}

Result multihop_design(const Options& o, const ScenarioBundle& b) {
  const Scenario& s = b.scenario;
  const double h = altitude(o, s);
  Result res;
  if (!o.gamma_sweep.empty()) {
    Csv c("multihop-design", {"gamma", "gamma_db", "n_uavs", "achieved", "status"});
    json rows = json::array();
    for (double g : gamma_points(o.gamma_sweep)) {
      try {
        auto d = design_min_uavs(s, h, g);
        c.row(g, to_db(g), d.uav_count(), d.achieved_gamma, "ok");
        rows.push_back({{"gamma", g}, {"n_uavs", d.uav_count()}, {"achieved", d.achieved_gamma}});
      } catch (const InfeasibleTarget& e) {
        c.row(g, to_db(g), std::string(), kNaN, "infeasible:" + e.cap);
        rows.push_back({{"gamma", g}, {"n_uavs", nullptr}, {"infeasible_cap", e.cap}});
      }
    }
    res.outputs = {{"h_m", h}, {"sweep", rows}};
    res.csv = c.out.str();
    return res;
  }
  const double g = require_gamma(o);
  auto d = design_min_uavs(s, h, g);
  json branches = json::array();
  for (auto br : d.trace) branches.push_back(to_string(br));
  res.outputs = {{"gamma", g},
                 {"h_m", h},
                 {"n_uavs", d.uav_count()},
                 {"achieved", d.achieved_gamma},
                 {"placement", placement_json(d.placement)},
                 {"branches", branches}};
  Csv c("multihop-design", {"hop", "d_m", "branch"});
  for (std::size_t k = 0; k < d.placement.hop_distances.size(); ++k)
    c.row(k + 1, d.placement.hop_distances[k], k < d.trace.size() ? to_string(d.trace[k]) : "last");
  res.csv = c.out.str();
  return res;
}

Result multihop_distributed(const Options& o, const ScenarioBundle& b) {
  const Scenario& s = b.scenario;
  const double h = altitude(o, s);
  auto r = distributed_max_sir(s, h, o.n_uavs, o.epsilon);
  Result res;
  res.outputs = {{"h_m", h},
                 {"n_uavs", o.n_uavs},
                 {"epsilon", o.epsilon},
                 {"gamma0", r.gamma0},
                 {"gamma_final", r.gamma_final},
                 {"iterations", r.trace.iterations.size()},
                 {"system_sir", jnum(r.trace.iterations.back().system_sir)},
                 {"placement", placement_json(r.placement)}};
  Csv c("multihop-distributed", {"iteration", "gamma", "gamma_db", "system_sir", "covered"});
  for (std::size_t i = 0; i < r.trace.iterations.size(); ++i) {
    auto& it = r.trace.iterations[i];
    c.row(i, it.gamma, to_db(it.gamma), it.system_sir, it.covered);
  }
  res.csv = c.out.str();
  return res;
}

Result refine(const Options& o, const ScenarioBundle& b) {
  const Scenario& s = b.scenario;
  const double h = altitude(o, s);
  auto start = distributed_max_sir(s, h, o.n_uavs, o.epsilon);
  RefineOptions ro;
  ro.eps_h = o.eps_h;
  ro.iterations = o.iterations;
  auto r = refine_altitudes(s, start.placement, ro);
  Result res;
  res.outputs = {{"h_m", h},
                 {"start_sir", r.sir_history.front()},
                 {"final_sir", r.sir_history.back()},
                 {"improvement", r.sir_history.back() / r.sir_history.front() - 1},
                 {"placement", placement_json(r.placement)}};
  Csv c("refine-altitudes", {"iteration", "system_sir", "system_sir_db"});
  for (std::size_t i = 0; i < r.sir_history.size(); ++i)
    c.row(i, r.sir_history[i], to_db(r.sir_history[i]));
  res.csv = c.out.str();
  return res;
}

Result stochastic_single(const Options& o, const ScenarioBundle& b) {
  const Scenario& s = b.scenario;
  const double h = altitude(o, s);
  auto r = single_uav_position(require_field(b, o.command), s, h, o.epsilon);
  Result res;
  res.outputs = {{"h_m", h},         {"x_m", r.x},           {"achieved", r.achieved},
                 {"fallback", r.fallback}, {"gamma_min", r.gamma_min}, {"gamma_max", r.gamma_max},
                 {"probes", r.trace.size()}};
  Csv c("stochastic-single", {"probe", "gamma", "x_m", "e_sir_uav"});
  for (std::size_t i = 0; i < r.trace.size(); ++i)
    c.row(i, r.trace[i].gamma, r.trace[i].x, r.trace[i].e_sir_uav);
  res.csv = c.out.str();
  return res;
}

Result stochastic_design(const Options& o, const ScenarioBundle& b) {
  const Scenario& s = b.scenario;
  const double h = altitude(o, s), g = require_gamma(o);
  auto r = design_min_uavs_stochastic(require_field(b, o.command), s, h, g);
  json d1 = json::array();
  for (auto& iv : r.d1_set) d1.push_back({iv.lo, iv.hi});
  Result res;
  res.outputs = {{"gamma", g},     {"h_m", h},         {"n_uavs", r.uav_count()},
                 {"achieved", r.achieved}, {"rho_m", r.rho}, {"d_max_m", r.d_max},
                 {"d1_set_m", d1}, {"placement", placement_json(r.placement)}};
  Csv c("stochastic-design", {"uav", "x_m"});
  auto xs = r.placement.positions();
  for (std::size_t k = 0; k < xs.size(); ++k) c.row(k + 1, xs[k]);
  res.csv = c.out.str();
  return res;
}

Result stochastic_distributed(const Options& o, const ScenarioBundle& b) {
  const Scenario& s = b.scenario;
  const double h = altitude(o, s);
  auto r = distributed_max_esir(require_field(b, o.command), s, h, o.n_uavs, o.epsilon);
  Result res;
  res.outputs = {{"h_m", h},
                 {"gamma0", r.gamma0},
                 {"gamma_final", r.gamma_final},
                 {"iterations", r.trace.size()},
                 {"placement", placement_json(r.placement)}};
  Csv c("stochastic-distributed", {"iteration", "gamma", "system_esir", "covered"});
  for (std::size_t i = 0; i < r.trace.size(); ++i)
    c.row(i, r.trace[i].gamma, r.trace[i].system_esir, r.trace[i].covered);
  res.csv = c.out.str();
  return res;
}

Result msi_fit(const Options& o, const ScenarioBundle& b) {
  if (b.sources.empty()) throw DomainError("msi-fit: the scenario has no sources section");
  auto [nx, nh] = parse_grid(o.grid, 128, 32);
  auto m = fit_hypothetical_msi(b.sources, b.scenario, {nx, nh});
  Result res;
  res.outputs = {{"x_h_m", m.x_h},         {"y_h_m", m.y_h},    {"p_h_w", m.p_h},
                 {"residual", m.residual}, {"scale", m.scale}, {"relative_residual", m.residual / m.scale}};
  res.provenance["grid"] = {nx, nh};
  Csv c("msi-fit", {"x_h_m", "y_h_m", "p_h_w", "residual", "scale"});
  c.row(m.x_h, m.y_h, m.p_h, m.residual, m.scale);
  res.csv = c.out.str();
  return res;
}

Result oracle_grid(const Options& o, const ScenarioBundle& b) {
  auto [nx, nh] = parse_grid(o.grid, 500, 500);
  auto r = grid_search_dual(b.scenario, {nx, nh});
  Result res;
  res.outputs = {{"x_m", r.x}, {"h_m", r.h}, {"sir_system", r.sir}, {"slack", r.slack}};
  res.provenance["grid"] = {nx, nh};
  Csv c("oracle-grid", {"x_m", "h_m", "sir_system", "slack"});
  c.row(r.x, r.h, r.sir, r.slack);
  res.csv = c.out.str();
  return res;
}

Result oracle_exhaustive(const Options& o, const ScenarioBundle& b) {
  const Scenario& s = b.scenario;
  const double h = altitude(o, s), g = require_gamma(o);
  PlannerKind kind;
  if (o.kind == "deterministic") kind = PlannerKind::deterministic;
  else if (o.kind == "stochastic") kind = PlannerKind::stochastic;
  else throw DomainError("--kind must be deterministic or stochastic");
  const InterferenceModel* field = kind == PlannerKind::stochastic ? &require_field(b, o.command) : nullptr;
  auto r = exhaustive_min_uavs(kind, s, h, g, o.n_max, o.per_hop_grid, field);
  Result res;
  res.outputs = {{"gamma", g}, {"h_m", h}, {"found", r.found}, {"n_max", r.n_max},
                 {"n_uavs", r.found ? json(r.n) : json(nullptr)}, {"positions_m", r.positions}};
  res.provenance["per_hop_grid"] = o.per_hop_grid;
  Csv c("oracle-exhaustive", {"found", "n_uavs", "n_max"});
  c.row(r.found, r.found ? std::to_string(r.n) : std::string("unknown"), r.n_max);
  res.csv = c.out.str();
  return res;
}

Result baseline(const Options& o, const ScenarioBundle& b) {
  BaselineOptions bo;
  bo.altitude = o.h;
  auto r = random_placement_baseline(b.scenario, o.n_uavs, o.trials, o.seed, bo);
  Result res;
  res.outputs = {{"mean", r.mean}, {"max", r.max}, {"min", r.min}, {"trials", r.trials}, {"n_uavs", o.n_uavs}};
  res.provenance["seed"] = o.seed;
  res.provenance["generator"] = "mt19937_64 per trial, seeded by splitmix64(seed + (trial+1)*0x9E3779B97F4A7C15)";
  res.provenance["distribution"] = r.distribution + (o.h ? " (fixed)" : " (uniform in band)");
  Csv c("baseline-random", {"trial", "system_sir"});
  for (std::size_t t = 0; t < r.samples.size(); ++t) c.row(t, r.samples[t]);
  res.csv = c.out.str();
  return res;
}

Outcome run_impl(const std::vector<std::string>& args, const ScenarioBundle* override_scenario);

std::vector<std::string> split_words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> w;
  for (std::string t; in >> t;) w.push_back(t);
  return w;
}

struct Axis {
  std::string name;
  std::vector<double> values;
};

Axis parse_vary(const std::string& spec) {
  auto eq = spec.find('=');
  if (eq == std::string::npos) throw DomainError("--vary expects name=lo:hi:count or name=v1,v2,...");
  Axis a{spec.substr(0, eq), {}};
  std::string rest = spec.substr(eq + 1);
  try {
    if (rest.find(':') != std::string::npos) {
      std::vector<std::string> p;
      std::stringstream ss(rest);
      for (std::string t; std::getline(ss, t, ':');) p.push_back(t);
      if (p.size() != 3) throw DomainError("--vary: range needs lo:hi:count");
      double lo = std::stod(p[0]), hi = std::stod(p[1]);
      std::size_t n = std::stoul(p[2]);
      if (n < 1) throw DomainError("--vary: count must be >= 1");
      for (std::size_t i = 0; i < n; ++i)
        a.values.push_back(n == 1 ? lo : lo + (hi - lo) * double(i) / double(n - 1));
    } else {
      std::stringstream ss(rest);
      for (std::string t; std::getline(ss, t, ',');) a.values.push_back(std::stod(t));
    }
  } catch (const std::invalid_argument&) {
    throw DomainError("--vary: cannot parse '" + spec + "'");
  }
  if (a.values.empty()) throw DomainError("--vary: no values in '" + spec + "'");
  return a;
}

// flattens numeric scalars of an outputs object for the aggregated CSV
void scalar_columns(const json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
  for (auto& [k, v] : j.items()) {
    if (v.is_number()) out.push_back({prefix + k, num(v.get<double>())});
    else if (v.is_boolean()) out.push_back({prefix + k, v.get<bool>() ? "1" : "0"});
    else if (v.is_null()) out.push_back({prefix + k, "nan"});
  }
}

Result sweep(const Options& o, const ScenarioBundle& base) {
  if (o.inner.empty()) throw DomainError("sweep: --inner is required");
  if (o.vary.empty()) throw DomainError("sweep: at least one --vary is required");
  auto inner = split_words(o.inner);
  if (inner.empty() || inner[0] == "sweep" || inner[0] == "replay")
    throw DomainError("sweep: --inner must name a planning subcommand");
  std::vector<Axis> axes;
  for (auto& v : o.vary) axes.push_back(parse_vary(v));

  std::vector<std::vector<double>> points;
  if (o.mode == "zip") {
    for (auto& a : axes)
      if (a.values.size() != axes[0].values.size()) throw DomainError("sweep: zip axes differ in length");
    for (std::size_t i = 0; i < axes[0].values.size(); ++i) {
      std::vector<double> p;
      for (auto& a : axes) p.push_back(a.values[i]);
      points.push_back(p);
    }
  } else if (o.mode == "cartesian") {
    points.push_back({});
    for (auto& a : axes) {
      std::vector<std::vector<double>> next;
      for (auto& p : points)
        for (double v : a.values) {
          auto q = p;
          q.push_back(v);
          next.push_back(q);
        }
      points = std::move(next);
    }
  } else {
    throw DomainError("sweep: --mode must be cartesian or zip");
  }

  std::vector<Outcome> results(points.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < long(points.size()); ++i) {
    auto args = inner;
    ScenarioBundle b = base;
    std::string failure;
    try {
      for (std::size_t a = 0; a < axes.size(); ++a) {
        if (axes[a].name == "h_m") {
          args.push_back("--altitude");
          args.push_back(num(points[i][a]));
        } else {
          set_scenario_field(b, axes[a].name, points[i][a]);
        }
      }
      b.scenario.validate();
    } catch (const std::exception& e) {
      failure = e.what();
    }
    if (failure.empty()) {
      results[i] = run_impl(args, &b);
    } else {
      results[i].exit_code = kExitSchema;
      results[i].record = {{"error", {{"kind", "schema"}, {"message", failure}}}};
    }
  }

  json records = json::array();
  std::ostringstream csv;
  csv << "# uavplan-csv v1 sweep " << inner[0] << "\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    std::vector<std::pair<std::string, std::string>> cols = {{"index", std::to_string(i)}};
    for (std::size_t a = 0; a < axes.size(); ++a) cols.push_back({axes[a].name, num(points[i][a])});
    cols.push_back({"exit_code", std::to_string(results[i].exit_code)});
    if (results[i].record.contains("outputs")) scalar_columns(results[i].record["outputs"], "", cols);
    if (i == 0) {
      for (std::size_t c = 0; c < cols.size(); ++c) csv << (c ? "," : "") << cols[c].first;
      csv << "\n";
    }
    for (std::size_t c = 0; c < cols.size(); ++c) csv << (c ? "," : "") << cols[c].second;
    csv << "\n";
    records.push_back(results[i].record);
  }
  Result res;
  res.outputs = {{"points", points.size()}, {"records", records}};
  res.csv = csv.str();
  return res;
}

void add_common(CLI::App* sub, Options& o, bool needs_scenario = true) {
  auto* sc = sub->add_option("--scenario", o.scenario, "scenario file (YAML or JSON)");
  if (needs_scenario) sc->required();
  sub->add_option("--out", o.out, "output prefix for <out>.json and <out>.csv");
  sub->add_option("--gamma", o.gamma, "target SIR: x12.5 (linear) or 11db");
  sub->add_option("--epsilon", o.epsilon, "SIR step of the iterative algorithms");
  sub->add_option("--n-uavs", o.n_uavs, "number of UAVs");
  sub->add_option("--grid", o.grid, "grid size NXxNH");
  sub->add_option("--seed", o.seed, "random seed");
  sub->add_option("--altitude", o.h, "planning altitude in meters (default h_min)");
}

}  // namespace

double parse_gamma(const std::string& t) {
  auto fail = [&] { return DomainError("gamma '" + t + "': use x<linear> or <value>db"); };
  if (t.empty()) throw fail();
  std::size_t used = 0;
  double v = 0;
  try {
    if (t[0] == 'x') {
      v = std::stod(t.substr(1), &used);
      if (used != t.size() - 1) throw fail();
    } else if (t.size() > 2 && t.substr(t.size() - 2) == "db") {
      v = std::pow(10.0, std::stod(t.substr(0, t.size() - 2), &used) / 10);
      if (used != t.size() - 2) throw fail();
    } else {
      throw fail();
    }
  } catch (const std::invalid_argument&) {
    throw fail();
  } catch (const std::out_of_range&) {
    throw fail();
  }
  if (!(v > 0) || !std::isfinite(v)) throw DomainError("gamma '" + t + "' must be positive and finite");
  return v;
}

namespace {

Outcome run_impl(const std::vector<std::string>& args, const ScenarioBundle* override_scenario) {
  Options o;
  CLI::App app{"UAV relay placement planner", "uavplan"};
  app.require_subcommand(1);
  using Handler = Result (*)(const Options&, const ScenarioBundle&);
  std::vector<std::pair<CLI::App*, Handler>> subs;
  auto add = [&](const char* name, const char* help, Handler h) {
    auto* s = app.add_subcommand(name, help);
    add_common(s, o, override_scenario == nullptr);
    subs.push_back({s, h});
    return s;
  };
  add("dualhop-opt", "optimal single-UAV position", dualhop_opt);
  add("dualhop-locus", "equal-SIR locus samples", dualhop_locus)->add_option("--samples", o.samples);
  add("multihop-design", "minimum UAV count for a target SIR", multihop_design)
      ->add_option("--gamma-sweep", o.gamma_sweep, "lo:hi:count");
  add("multihop-distributed", "distributed max-SIR placement", multihop_distributed);
  {
    auto* s = add("refine-altitudes", "altitude refinement from the distributed placement", refine);
    s->add_option("--eps-h", o.eps_h);
    s->add_option("--iterations", o.iterations);
  }
  add("stochastic-single", "single UAV under a stochastic field", stochastic_single);
  add("stochastic-design", "minimum UAV count under a stochastic field", stochastic_design);
  add("stochastic-distributed", "distributed max expected SIR", stochastic_distributed);
  add("msi-fit", "fit one hypothetical MSI to the sources", msi_fit);
  add("oracle-grid", "brute-force dual-hop grid search", oracle_grid);
  {
    auto* s = add("oracle-exhaustive", "exhaustive minimum UAV count", oracle_exhaustive);
    s->add_option("--kind", o.kind);
    s->add_option("--n-max", o.n_max);
    s->add_option("--per-hop-grid", o.per_hop_grid);
  }
  add("baseline-random", "random placement baseline", baseline)->add_option("--trials", o.trials);
  {
    auto* s = add("sweep", "parameter sweep over another subcommand", sweep);
    s->add_option("--vary", o.vary, "name=lo:hi:count or name=v1,v2 (repeatable)");
    s->add_option("--mode", o.mode, "cartesian or zip");
    s->add_option("--inner", o.inner, "inner subcommand and flags, without --scenario");
  }
  auto* replay = app.add_subcommand("replay", "re-run a result record and compare outputs");
  replay->add_option("record", o.record)->required();

  Outcome out;
  out.record = {{"schema_version", kSchemaVersion}, {"command", args}};
  auto error = [&](int code, const std::string& kind, const std::string& msg) {
    out.exit_code = code;
    out.record["error"] = {{"kind", kind}, {"message", msg}};
    return out;
  };

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    std::string text = app.help();
    for (auto* s : app.get_subcommands()) text = s->help();
    out.record["help"] = text;
    return out;
  } catch (const CLI::ParseError& e) {
    return error(kExitSchema, "usage", e.what());
  }

  if (replay->parsed()) {
    std::ifstream in(o.record);
    if (!in) return error(kExitSchema, "schema", "cannot open record '" + o.record + "'");
    json rec;
    try {
      rec = json::parse(in);
    } catch (const json::exception& e) {
      return error(kExitSchema, "schema", std::string("record: ") + e.what());
    }
    if (!rec.contains("command") || !rec.contains("resolved_parameters"))
      return error(kExitSchema, "schema", "record lacks command or resolved_parameters");
    ScenarioBundle b;
    try {
      b = scenario_from_json(rec["resolved_parameters"]["scenario"]);
    } catch (const SchemaError& e) {
      return error(kExitSchema, "schema", std::string("record scenario: ") + e.what());
    }
    auto again = run_impl(rec["command"].get<std::vector<std::string>>(), &b);
    const bool same = again.record.value("outputs", json()) == rec.value("outputs", json()) &&
                      again.record.value("resolved_parameters", json()) == rec["resolved_parameters"];
    out.record["outputs"] = {{"identical", same},
                             {"replayed_command", rec["command"]},
                             {"replayed_exit_code", again.exit_code}};
    out.csv = again.csv;
    out.exit_code = same ? kExitOk : kExitReplayMismatch;
    return out;
  }

  CLI::App* chosen = nullptr;
  Handler handler = nullptr;
  for (auto& [s, h] : subs)
    if (s->parsed()) chosen = s, handler = h;
  o.command = chosen->get_name();

  try {
    ScenarioBundle b = override_scenario ? *override_scenario : parse_scenario(o.scenario);
    out.record["resolved_parameters"] = {{"scenario", scenario_to_json(b)},
                                         {"h_m", altitude(o, b.scenario)},
                                         {"epsilon", o.epsilon},
                                         {"n_uavs", o.n_uavs},
                                         {"gamma", o.gamma.empty() ? json(nullptr) : json(parse_gamma(o.gamma))}};
    Result r = handler(o, b);
    out.record["outputs"] = r.outputs;
    r.provenance["tool"] = "uavplan";
    r.provenance["version"] = kToolVersion;
    if (!r.provenance.contains("seed")) r.provenance["seed"] = o.seed;
    out.record["provenance"] = r.provenance;
    out.csv = r.csv;
  } catch (const SchemaError& e) {
    error(kExitSchema, "schema", e.what());
    out.record["error"]["line"] = e.line;
    out.record["error"]["column"] = e.column;
  } catch (const DomainError& e) {
    error(kExitSchema, "domain", e.what());
  } catch (const InfeasibleTarget& e) {
    error(kExitInfeasible, "infeasible", e.what());
    out.record["error"]["cap"] = e.cap;
  } catch (const NumericFailure& e) {
    error(kExitNumeric, "numeric", e.what());
  } catch (const std::exception& e) {
    error(kExitNumeric, "internal", e.what());
  }
  return out;
}

}  // namespace

Outcome run(const std::vector<std::string>& args) { return run_impl(args, nullptr); }

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  if (args.empty() || args[0] == "--help" || args[0] == "-h") {
    std::cout << "usage: uavplan <subcommand> --scenario FILE [flags]\n"
                 "subcommands: dualhop-opt dualhop-locus multihop-design multihop-distributed\n"
                 "  refine-altitudes stochastic-single stochastic-design stochastic-distributed\n"
                 "  msi-fit oracle-grid oracle-exhaustive baseline-random sweep replay\n"
                 "run `uavplan <subcommand> --help` for flags\n";
    return args.empty() ? kExitSchema : kExitOk;
  }
  auto r = run(args);
  if (r.record.contains("help")) {
    std::cout << r.record["help"].get<std::string>();
    return kExitOk;
  }
  std::string out;
  for (std::size_t i = 0; i + 1 < args.size(); ++i)
    if (args[i] == "--out") out = args[i + 1];
  if (!out.empty()) {
    std::ofstream(out + ".json") << r.record.dump(2) << "\n";
    if (!r.csv.empty()) std::ofstream(out + ".csv") << r.csv;
  } else {
    std::cout << r.record.dump(2) << "\n";
  }
  if (r.record.contains("error")) std::cerr << "uavplan: " << r.record["error"]["message"].get<std::string>() << "\n";
  return r.exit_code;
}

}  // namespace uavrelay::cli
