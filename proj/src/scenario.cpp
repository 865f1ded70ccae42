#include "dcbsim/scenario.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "json.hpp"

#include "dcbsim/channelization.hpp"

namespace dcbsim {

namespace {

constexpr std::uint64_t kScenarioStream = 0x5C37A21Bull;

}  // namespace

Scenario generate_scenario(const DeploymentParams& params, std::uint64_t seed) {
  if (params.n_wlans < 1) throw std::invalid_argument("deployment needs at least one WLAN");
  if (params.sta_distance_min_m <= 0 || params.sta_distance_max_m < params.sta_distance_min_m)
    throw std::invalid_argument("bad STA distance range");

  Rng rng = make_stream(seed, kScenarioStream);
  Scenario s;
  s.seed = seed;

  long long attempts = 0;
  constexpr long long kMaxAttempts = 1'000'000;
  double center = params.area_m / 2.0;

  for (int w = 0; w < params.n_wlans; ++w) {
    WlanConfig cfg;
    cfg.id = w;
    if (w == 0) {
      cfg.ap = {center, center};
    } else {
      for (;;) {
        if (++attempts > kMaxAttempts) throw std::runtime_error("infeasible deployment parameters");
        Vec2 pos{uniform01(rng) * params.area_m, uniform01(rng) * params.area_m};
        bool ok = true;
        for (const WlanConfig& other : s.wlans)
          if (distance(pos, other.ap) < params.min_ap_separation_m) {
            ok = false;
            break;
          }
        if (ok) {
          cfg.ap = pos;
          break;
        }
      }
    }

    double angle = uniform01(rng) * 2.0 * std::numbers::pi;
    double radius = params.sta_distance_min_m +
                    uniform01(rng) * (params.sta_distance_max_m - params.sta_distance_min_m);
    cfg.sta = {cfg.ap.x + radius * std::cos(angle), cfg.ap.y + radius * std::sin(angle)};

    if (w == 0) {
      cfg.alloc.channels = ChannelSet::all();
      cfg.alloc.primary = 1 + uniform_below(rng, kNumChannels);
      cfg.dcb = true;
      cfg.load_bps = params.central_load_bps;
    } else {
      int n_c = kWidths[uniform_below(rng, 4)];
      int block = uniform_below(rng, kNumChannels / n_c);
      cfg.alloc.channels = ChannelSet::block(block * n_c + 1, n_c);
      cfg.alloc.primary = block * n_c + 1 + uniform_below(rng, n_c);
      cfg.dcb = uniform01(rng) < 0.5;
      cfg.load_bps = params.neighbor_load_min_bps +
                     uniform01(rng) * (params.neighbor_load_max_bps - params.neighbor_load_min_bps);
    }
    s.wlans.push_back(cfg);
  }
  return s;
}

namespace {

using nlohmann::json;

json wlan_to_json(const WlanConfig& w) {
  json j;
  j["id"] = w.id;
  j["ap"] = {w.ap.x, w.ap.y};
  j["sta"] = {w.sta.x, w.sta.y};
  j["alloc_channels"] = w.alloc.channels.channels();
  j["primary"] = w.alloc.primary;
  j["capability"] = w.dcb ? "DCB" : "SC";
  j["load_bps"] = w.load_bps;
  return j;
}

WlanConfig wlan_from_json(const json& j, int index) {
  std::string ctx = "wlan[" + std::to_string(index) + "]: ";
  WlanConfig w;
  auto need = [&](const char* field) -> const json& {
    auto it = j.find(field);
    if (it == j.end()) throw std::runtime_error(ctx + "missing field '" + field + "'");
    return *it;
  };
  try {
    w.id = need("id").get<int>();
    auto ap = need("ap");
    auto sta = need("sta");
    if (!ap.is_array() || ap.size() != 2 || !sta.is_array() || sta.size() != 2)
      throw std::runtime_error(ctx + "'ap'/'sta' must be [x, y]");
    w.ap = {ap[0].get<double>(), ap[1].get<double>()};
    w.sta = {sta[0].get<double>(), sta[1].get<double>()};
    for (const auto& c : need("alloc_channels")) w.alloc.channels.set(c.get<int>());
    w.alloc.primary = need("primary").get<int>();
    std::string cap = need("capability").get<std::string>();
    if (cap != "DCB" && cap != "SC")
      throw std::runtime_error(ctx + "capability must be 'DCB' or 'SC'");
    w.dcb = cap == "DCB";
    w.load_bps = need("load_bps").get<double>();
  } catch (const json::exception& e) {
    throw std::runtime_error(ctx + e.what());
  }
  return w;
}

}  // namespace

std::string scenario_to_json(const Scenario& s) {
  json j;
  j["seed"] = s.seed;
  j["wlans"] = json::array();
  for (const WlanConfig& w : s.wlans) j["wlans"].push_back(wlan_to_json(w));
  return j.dump(2) + "\n";
}

Scenario scenario_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("scenario parse error: ") + e.what());
  }
  Scenario s;
  if (!j.contains("seed")) throw std::runtime_error("scenario: missing field 'seed'");
  if (!j.contains("wlans") || !j["wlans"].is_array())
    throw std::runtime_error("scenario: missing field 'wlans'");
  s.seed = j["seed"].get<std::uint64_t>();
  int i = 0;
  for (const auto& wj : j["wlans"]) s.wlans.push_back(wlan_from_json(wj, i++));
  return s;
}

void save_scenario(const Scenario& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write scenario file: " + path);
  out << scenario_to_json(s);
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return scenario_from_json(text);
}

std::vector<std::string> validate_scenario(const Scenario& s, const DeploymentParams& params) {
  std::vector<std::string> problems;
  auto wlan_tag = [](int i) { return "wlan[" + std::to_string(i) + "]: "; };

  if (s.wlans.empty()) problems.push_back("scenario has no WLANs");
  for (size_t i = 0; i < s.wlans.size(); ++i) {
    const WlanConfig& w = s.wlans[i];
    if (w.id != static_cast<int>(i))
      problems.push_back(wlan_tag(i) + "id must equal its position (" + std::to_string(w.id) + ")");
    try {
      validate_allocation(w.alloc);
    } catch (const std::exception& e) {
      problems.push_back(wlan_tag(i) + e.what());
    }
    if (!(w.load_bps > 0)) problems.push_back(wlan_tag(i) + "load_bps must be positive");
    double d = distance(w.ap, w.sta);
    if (d < params.sta_distance_min_m - 1e-9 || d > params.sta_distance_max_m + 1e-9)
      problems.push_back(wlan_tag(i) + "STA distance " + std::to_string(d) + " outside [" +
                         std::to_string(params.sta_distance_min_m) + ", " +
                         std::to_string(params.sta_distance_max_m) + "] m");
    for (size_t k = 0; k < i; ++k)
      if (distance(w.ap, s.wlans[k].ap) < params.min_ap_separation_m - 1e-9)
        problems.push_back(wlan_tag(i) + "AP closer than " +
                           std::to_string(params.min_ap_separation_m) + " m to wlan[" +
                           std::to_string(k) + "]");
  }
  return problems;
}

}  // namespace dcbsim
