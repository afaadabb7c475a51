#include "uavrelay/scenario_io.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "uavrelay/errors.hpp"

namespace uavrelay {

namespace {

[[noreturn]] void fail(const YAML::Node& n, const std::string& msg) {
  const auto m = n.Mark();
  if (m.is_null()) throw SchemaError(msg);
  throw SchemaError(msg, m.line + 1, m.column + 1);
}

const std::vector<std::string> kUnitSuffixes = {"_m", "_w", "_hz", "_per_w"};

// rejects unknown keys; a known key missing only its unit suffix gets a clearer message
void check_keys(const YAML::Node& map, const std::set<std::string>& allowed, const std::string& where) {
  if (!map.IsMap()) fail(map, where + ": expected a mapping");
  for (auto it = map.begin(); it != map.end(); ++it) {
    auto key = it->first.as<std::string>();
    if (allowed.count(key)) continue;
    for (auto& suf : kUnitSuffixes)
      if (allowed.count(key + suf))
        fail(it->first, where + "." + key + ": unit suffix missing, expected '" + key + suf + "'");
    fail(it->first, where + ": unknown key '" + key + "'");
  }
}

double number(const YAML::Node& parent, const std::string& key, const std::string& where) {
  auto n = parent[key];
  if (!n) fail(parent, where + ": missing required key '" + key + "'");
  if (!n.IsScalar()) fail(n, where + "." + key + ": expected a number");
  try {
    return n.as<double>();
  } catch (const YAML::Exception&) {
    fail(n, where + "." + key + ": expected a number");
  }
}

std::optional<double> maybe(const YAML::Node& parent, const std::string& key, const std::string& where) {
  if (!parent[key]) return std::nullopt;
  return number(parent, key, where);
}

void positive(const YAML::Node& parent, const std::string& key, double v, const std::string& where) {
  if (!(v > 0)) fail(parent[key], where + "." + key + ": must be positive");
}

InterferenceModel parse_field(const YAML::Node& f) {
  const std::string w = "interference_field";
  check_keys(f, {"variant", "i_max_w", "knots", "bins"}, w);
  if (!f["variant"]) fail(f, w + ": missing required key 'variant'");
  auto variant = f["variant"].as<std::string>();
  if (variant == "empirical") {
    auto bins = f["bins"];
    if (!bins || !bins.IsSequence()) fail(f, w + ": empirical variant needs a 'bins' list");
    std::vector<InterferenceModel::Bin> out;
    for (auto b : bins) {
      check_keys(b, {"x_lo_m", "x_hi_m", "samples_w"}, w + ".bins");
      InterferenceModel::Bin bin{number(b, "x_lo_m", w + ".bins"), number(b, "x_hi_m", w + ".bins"), {}};
      if (!b["samples_w"] || !b["samples_w"].IsSequence()) fail(b, w + ".bins: missing 'samples_w' list");
      for (auto v : b["samples_w"]) bin.samples.push_back(v.as<double>());
      out.push_back(std::move(bin));
    }
    try {
      return InterferenceModel::empirical(std::move(out));
    } catch (const DomainError& e) {
      fail(bins, e.what());
    }
  }
  std::set<std::string> kk;
  std::string ka, kb;
  if (variant == "deterministic") kk = {"x_m", "c_w"}, ka = "c_w";
  else if (variant == "beta") kk = {"x_m", "alpha", "beta"}, ka = "alpha", kb = "beta";
  else if (variant == "tabulated") kk = {"x_m", "upsilon_per_w"}, ka = "upsilon_per_w";
  else if (variant == "gamma") kk = {"x_m", "shape", "scale_w"}, ka = "shape", kb = "scale_w";
  else fail(f["variant"], w + ".variant: unknown variant '" + variant + "'");
  auto knots = f["knots"];
  if (!knots || !knots.IsSequence() || knots.size() == 0) fail(f, w + ": missing 'knots' list");
  std::vector<InterferenceModel::Knot> ks;
  for (auto k : knots) {
    check_keys(k, kk, w + ".knots");
    InterferenceModel::Knot q;
    q.x = number(k, "x_m", w + ".knots");
    q.a = number(k, ka, w + ".knots");
    if (!kb.empty()) q.b = number(k, kb, w + ".knots");
    ks.push_back(q);
  }
  try {
    if (variant == "deterministic") return InterferenceModel::deterministic(ks);
    if (variant == "beta") {
      if (!f["i_max_w"]) fail(f, w + ": beta variant needs 'i_max_w'");
      return InterferenceModel::beta(ks, number(f, "i_max_w", w));
    }
    if (variant == "tabulated") return InterferenceModel::tabulated(ks);
    // gamma: knots carry (shape, scale), M(-y) = (1 + scale*y)^-shape
    return InterferenceModel::gamma_mgf(ks);
  } catch (const DomainError& e) {
    fail(knots, e.what());
  }
}

ScenarioBundle parse_root(const YAML::Node& root) {
  check_keys(root, {"channel", "geometry", "powers", "sources", "interference_field"}, "scenario");
  for (auto sec : {"channel", "geometry", "powers"})
    if (!root[sec]) fail(root, std::string("scenario: missing required section '") + sec + "'");

  ScenarioBundle b;
  Scenario& s = b.scenario;
  auto ch = root["channel"];
  check_keys(ch, {"carrier_frequency_hz", "c_los", "c_nlos", "eta_nlos", "path_loss_exponent"}, "channel");
  double fc = number(ch, "carrier_frequency_hz", "channel");
  positive(ch, "carrier_frequency_hz", fc, "channel");
  double cl = number(ch, "c_los", "channel"), cn = number(ch, "c_nlos", "channel");
  positive(ch, "c_los", cl, "channel");
  positive(ch, "c_nlos", cn, "channel");
  auto eta = maybe(ch, "eta_nlos", "channel");
  if (eta) positive(ch, "eta_nlos", *eta, "channel");
  double alpha = maybe(ch, "path_loss_exponent", "channel").value_or(2.0);
  if (alpha != 2.0) fail(ch["path_loss_exponent"], "channel.path_loss_exponent: only 2 is supported");
  s.channel = ChannelParams::make(fc, cl, cn, eta, alpha);

  auto g = root["geometry"];
  check_keys(g, {"d_m", "msi_x_m", "msi_y_m", "h_min_m", "h_max_m", "d_min_m"}, "geometry");
  s.D = number(g, "d_m", "geometry");
  positive(g, "d_m", s.D, "geometry");
  s.msi_x = number(g, "msi_x_m", "geometry");
  s.msi_y = number(g, "msi_y_m", "geometry");
  if (s.msi_y < 0) fail(g["msi_y_m"], "geometry.msi_y_m: must be non-negative");
  s.h_min = number(g, "h_min_m", "geometry");
  positive(g, "h_min_m", s.h_min, "geometry");
  s.h_max = number(g, "h_max_m", "geometry");
  if (s.h_max < s.h_min) fail(g["h_max_m"], "geometry.h_max_m: must be >= h_min_m");
  s.d_min = number(g, "d_min_m", "geometry");
  if (s.d_min < 0) fail(g["d_min_m"], "geometry.d_min_m: must be non-negative");

  auto p = root["powers"];
  check_keys(p, {"p_tx_w", "p_uav_w", "p_msi_w"}, "powers");
  for (auto [k, dst] : {std::pair{"p_tx_w", &s.p_tx}, {"p_uav_w", &s.p_uav}, {"p_msi_w", &s.p_msi}}) {
    *dst = number(p, k, "powers");
    positive(p, k, *dst, "powers");
  }

  if (auto src = root["sources"]) {
    if (!src.IsSequence()) fail(src, "sources: expected a list");
    for (auto q : src) {
      check_keys(q, {"x_m", "y_m", "p_w"}, "sources");
      InterferenceSource is{number(q, "x_m", "sources"), number(q, "y_m", "sources"),
                            number(q, "p_w", "sources")};
      positive(q, "p_w", is.power, "sources");
      b.sources.push_back(is);
    }
  }
  if (auto f = root["interference_field"]) b.field = parse_field(f);
  try {
    s.validate();
  } catch (const DomainError& e) {
    throw SchemaError(e.what());
  }
  return b;
}

}  // namespace

ScenarioBundle parse_scenario_text(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw SchemaError("scenario: " + e.msg, e.mark.line + 1, e.mark.column + 1);
  }
  try {
    return parse_root(root);
  } catch (const YAML::Exception& e) {
    throw SchemaError("scenario: " + e.msg, e.mark.line + 1, e.mark.column + 1);
  }
}

ScenarioBundle parse_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open scenario file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario_text(ss.str());
}

nlohmann::json scenario_to_json(const ScenarioBundle& b) {
  const Scenario& s = b.scenario;
  const auto& c = s.channel;
  nlohmann::json j;
  j["channel"] = {{"carrier_frequency_hz", c.carrier_frequency}, {"c_los", c.excess_loss_los},
                  {"c_nlos", c.excess_loss_nlos}, {"eta_nlos", c.eta_nlos},
                  {"path_loss_exponent", c.path_loss_exponent}};
  j["geometry"] = {{"d_m", s.D},         {"msi_x_m", s.msi_x}, {"msi_y_m", s.msi_y},
                   {"h_min_m", s.h_min}, {"h_max_m", s.h_max}, {"d_min_m", s.d_min}};
  j["powers"] = {{"p_tx_w", s.p_tx}, {"p_uav_w", s.p_uav}, {"p_msi_w", s.p_msi}};
  if (!b.sources.empty()) {
    j["sources"] = nlohmann::json::array();
    for (auto& q : b.sources) j["sources"].push_back({{"x_m", q.x}, {"y_m", q.y}, {"p_w", q.power}});
  }
  if (b.field) {
    const auto& m = *b.field;
    nlohmann::json f;
    using K = InterferenceModel::Kind;
    if (m.kind() == K::empirical) {
      f["variant"] = "empirical";
      for (auto& bin : m.bins())
        f["bins"].push_back({{"x_lo_m", bin.x_lo}, {"x_hi_m", bin.x_hi}, {"samples_w", bin.samples}});
    } else if (m.kind() != K::numeric_mgf) {
      static const std::map<K, std::array<const char*, 3>> names = {
          {K::deterministic, {"deterministic", "c_w", nullptr}},
          {K::beta, {"beta", "alpha", "beta"}},
          {K::tabulated_upsilon, {"tabulated", "upsilon_per_w", nullptr}},
          {K::gamma_mgf, {"gamma", "shape", "scale_w"}}};
      auto& nm = names.at(m.kind());
      f["variant"] = nm[0];
      if (m.kind() == K::beta) f["i_max_w"] = m.i_max();
      for (auto& k : m.knots()) {
        nlohmann::json kj = {{"x_m", k.x}, {nm[1], k.a}};
        if (nm[2]) kj[nm[2]] = k.b;
        f["knots"].push_back(kj);
      }
    } else {
      throw DomainError("scenario_to_json: a callable MGF field has no file form");
    }
    j["interference_field"] = f;
  }
  return j;
}

ScenarioBundle scenario_from_json(const nlohmann::json& j) { return parse_scenario_text(j.dump()); }

void set_scenario_field(ScenarioBundle& b, const std::string& name, double v) {
  Scenario& s = b.scenario;
  static const std::map<std::string, double Scenario::*> fields = {
      {"d_m", &Scenario::D},         {"msi_x_m", &Scenario::msi_x}, {"msi_y_m", &Scenario::msi_y},
      {"h_min_m", &Scenario::h_min}, {"h_max_m", &Scenario::h_max}, {"d_min_m", &Scenario::d_min},
      {"p_tx_w", &Scenario::p_tx},   {"p_uav_w", &Scenario::p_uav}, {"p_msi_w", &Scenario::p_msi}};
  if (auto it = fields.find(name); it != fields.end()) {
    s.*(it->second) = v;
    return;
  }
  // channel fields go back through the file form so derived coefficients stay consistent
  auto j = scenario_to_json(b);
  if (name == "carrier_frequency_hz" || name == "c_los" || name == "c_nlos" || name == "eta_nlos") {
    // keep eta tied to mu_los when it was defaulted
    if (name != "eta_nlos" && s.channel.eta_nlos == s.channel.mu_los) j["channel"].erase("eta_nlos");
    j["channel"][name] = v;
    b = scenario_from_json(j);
    return;
  }
  throw DomainError("unknown scenario field '" + name + "'");
}

}  // namespace uavrelay
