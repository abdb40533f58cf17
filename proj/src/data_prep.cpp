#include "itl/data_prep.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "itl/error.hpp"
#include "itl/geo.hpp"

namespace itl {

LoadabilityParams LoadabilityParams::defaults() {
  LoadabilityParams p;
  p.classes = {
      {69.0, {100.0, 0.50, 12.0}},    {115.0, {200.0, 0.48, 35.0}},   {138.0, {250.0, 0.48, 50.0}},
      {161.0, {300.0, 0.48, 65.0}},   {230.0, {500.0, 0.49, 135.0}},  {345.0, {1200.0, 0.37, 390.0}},
      {500.0, {2500.0, 0.33, 900.0}}, {765.0, {4000.0, 0.27, 2200.0}},
  };
  return p;
}

void LoadabilityParams::validate() const {
  if (!(max_angle_deg > 0.0 && max_angle_deg < 90.0)) throw ConfigError("max_angle_deg must be in (0, 90)");
  if (!(max_voltage_drop_frac > 0.0 && max_voltage_drop_frac < 1.0))
    throw ConfigError("max_voltage_drop_frac must be in (0, 1)");
  if (!(min_length_km > 0.0)) throw ConfigError("min_length_km must be > 0");
  for (const auto& [kv, c] : classes) {
    if (!(kv > 0.0)) throw ConfigError("voltage class kV must be > 0");
    if (!(c.thermal_limit_mw > 0.0) || !(c.reactance_ohm_per_km > 0.0))
      throw ConfigError("voltage class " + std::to_string(kv) + " kV needs positive thermal limit and reactance");
  }
}

const VoltageClass& LoadabilityParams::lookup(double voltage_kv) const {
  if (classes.empty()) throw ConfigError("loadability table is empty");
  auto hi = classes.lower_bound(voltage_kv);
  if (hi == classes.end()) return std::prev(hi)->second;
  if (hi->first == voltage_kv || hi == classes.begin()) return hi->second;
  auto lo = std::prev(hi);
  return (voltage_kv - lo->first) <= (hi->first - voltage_kv) ? lo->second : hi->second;
}

void PrepConfig::validate() const {
  if (!(boundary_buffer_km >= 0.0)) throw ConfigError("boundary_buffer_km must be >= 0");
  if (!(neighborhood_radius_km >= 0.0)) throw ConfigError("neighborhood_radius_km must be >= 0");
  if (boundary_polygon && boundary_polygon->size() < 3) throw ConfigError("boundary polygon needs at least 3 vertices");
  loadability.validate();
}

Network infer_missing_locations(const Network& network) {
  const auto& buses = network.buses();
  const auto incident = network.incident_lines();
  auto neighbor = [&](std::size_t bus, std::size_t line) {
    const Line& l = network.lines()[line];
    auto other = network.find_bus(l.from_bus == buses[bus].id ? l.to_bus : l.from_bus);
    return *other;
  };

  std::vector<Bus> out = buses;
  for (std::size_t start = 0; start < buses.size(); ++start) {
    if (buses[start].location) continue;
    std::vector<int> depth(buses.size(), -1);
    std::deque<std::size_t> queue{start};
    depth[start] = 0;
    int found_depth = -1;
    std::vector<GeoPoint> found;
    while (!queue.empty()) {
      std::size_t b = queue.front();
      queue.pop_front();
      if (found_depth >= 0 && depth[b] > found_depth) break;
      if (buses[b].location) {
        found_depth = depth[b];
        found.push_back(*buses[b].location);
        continue;
      }
      for (std::size_t l : incident[b]) {
        std::size_t n = neighbor(b, l);
        if (depth[n] < 0) {
          depth[n] = depth[b] + 1;
          queue.push_back(n);
        }
      }
    }
    if (found.empty())
      throw ImputationError("cannot infer location of bus '" + buses[start].id +
                            "': its connected component has no located bus");
    GeoPoint centroid;
    for (const auto& p : found) {
      centroid.lat_deg += p.lat_deg;
      centroid.lon_deg += p.lon_deg;
    }
    centroid.lat_deg /= static_cast<double>(found.size());
    centroid.lon_deg /= static_cast<double>(found.size());
    out[start].location = centroid;
  }
  return Network(std::move(out), network.lines(), network.base_mva());
}

Network filter_by_geography(const Network& network, const PrepConfig& config) {
  if (!config.boundary_polygon) return network;
  std::vector<std::string> keep;
  for (const auto& bus : network.buses()) {
    if (!bus.location) throw ValidationError("bus '" + bus.id + "' has no location for the geographic filter");
    if (geo::distance_to_polygon_km(*config.boundary_polygon, *bus.location) <= config.boundary_buffer_km)
      keep.push_back(bus.id);
  }
  if (keep.size() == network.buses().size()) return network;
  return induced_subnetwork(network, keep);
}

namespace {

BusType absorb(BusType survivor, BusType removed) {
  auto can_inject = [](BusType t) { return t == BusType::Generator || t == BusType::Unconstrained; };
  auto can_withdraw = [](BusType t) { return t == BusType::Load || t == BusType::Unconstrained; };
  const bool inject = can_inject(survivor) || can_inject(removed);
  const bool withdraw = can_withdraw(survivor) || can_withdraw(removed);
  if (inject && withdraw) return BusType::Unconstrained;
  if (inject) return BusType::Generator;
  if (withdraw) return BusType::Load;
  return BusType::Transmission;
}

}  // namespace

Network reduce_radial_buses(const Network& network) {
  const auto& buses = network.buses();
  const auto& lines = network.lines();
  std::vector<BusType> types;
  for (const auto& b : buses) types.push_back(b.type);
  std::vector<bool> bus_alive(buses.size(), true);
  std::vector<bool> line_alive(lines.size(), true);

  // Neighbors per bus, as (neighbor index, line index).
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(buses.size());
  for (std::size_t l = 0; l < lines.size(); ++l) {
    auto f = network.find_bus(lines[l].from_bus);
    auto t = network.find_bus(lines[l].to_bus);
    if (!f || !t || *f == *t) continue;
    adj[*f].push_back({*t, l});
    adj[*t].push_back({*f, l});
  }

  // Returns the sole neighbor if the bus is radial and removable.
  auto sole_neighbor = [&](std::size_t b) -> std::optional<std::size_t> {
    std::optional<std::size_t> only;
    for (auto [n, l] : adj[b]) {
      if (!line_alive[l]) continue;
      if (only && *only != n) return std::nullopt;
      only = n;
    }
    if (!only || buses[*only].zone != buses[b].zone) return std::nullopt;
    return only;
  };

  std::set<std::pair<std::string, std::size_t>> work;
  for (std::size_t b = 0; b < buses.size(); ++b) work.insert({buses[b].id, b});
  while (!work.empty()) {
    auto [id, b] = *work.begin();
    work.erase(work.begin());
    if (!bus_alive[b]) continue;
    auto n = sole_neighbor(b);
    if (!n) continue;
    bus_alive[b] = false;
    for (auto [m, l] : adj[b]) line_alive[l] = false;
    types[*n] = absorb(types[*n], types[b]);
    work.insert({buses[*n].id, *n});
  }

  std::vector<Bus> out_buses;
  for (std::size_t b = 0; b < buses.size(); ++b) {
    if (!bus_alive[b]) continue;
    out_buses.push_back(buses[b]);
    out_buses.back().type = types[b];
  }
  std::vector<Line> out_lines;
  for (std::size_t l = 0; l < lines.size(); ++l) {
    if (line_alive[l]) out_lines.push_back(lines[l]);
  }
  return Network(std::move(out_buses), std::move(out_lines), network.base_mva());
}

Network drop_dc_elements(const Network& network) {
  std::unordered_set<std::string> touched_by_dc;
  std::unordered_set<std::string> touched_by_ac;
  std::vector<Line> lines;
  for (const auto& line : network.lines()) {
    auto& set = line.is_dc ? touched_by_dc : touched_by_ac;
    set.insert(line.from_bus);
    set.insert(line.to_bus);
    if (!line.is_dc) lines.push_back(line);
  }
  std::vector<Bus> buses;
  for (const auto& bus : network.buses()) {
    if (touched_by_dc.contains(bus.id) && !touched_by_ac.contains(bus.id)) continue;
    buses.push_back(bus);
  }
  return Network(std::move(buses), std::move(lines), network.base_mva());
}

double loadability_limit(double length_km, double voltage_kv, const LoadabilityParams& params) {
  const VoltageClass& vc = params.lookup(voltage_kv);
  const double length = std::max(length_km, params.min_length_km);
  const double x_total = vc.reactance_ohm_per_km * length;
  const double angle = params.max_angle_deg * std::numbers::pi / 180.0;
  const double angular = voltage_kv * voltage_kv / x_total * std::sin(angle);
  return std::min(vc.thermal_limit_mw, angular);
}

double line_length_km(const Network& network, const Line& line) {
  if (line.kind == LineKind::Transformer) return 0.0;
  const Bus& a = network.bus(line.from_bus);
  const Bus& b = network.bus(line.to_bus);
  if (!a.location || !b.location)
    throw ImputationError("line '" + line.id + "' needs endpoint locations to compute its length");
  return geo::distance_km(*a.location, *b.location);
}

Network impute_ratings(const Network& network, const LoadabilityParams& params) {
  std::vector<Line> lines = network.lines();
  for (auto& line : lines) {
    if (line.rating && *line.rating > 0.0) continue;
    line.rating = loadability_limit(line_length_km(network, line), line.voltage_kv, params);
  }
  return Network(network.buses(), std::move(lines), network.base_mva());
}

namespace {

struct Donor {
  double length_km;
  std::string id;
  double reactance;
};

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Exact kV match or, failing that, the nearest voltage with donors (ties go low).
template <typename Map>
const typename Map::mapped_type* donors_for(const Map& by_voltage, double kv, bool& fell_back) {
  fell_back = false;
  if (auto it = by_voltage.find(kv); it != by_voltage.end()) return &it->second;
  if (by_voltage.empty()) return nullptr;
  fell_back = true;
  auto hi = by_voltage.lower_bound(kv);
  if (hi == by_voltage.end()) return &std::prev(hi)->second;
  if (hi == by_voltage.begin()) return &hi->second;
  auto lo = std::prev(hi);
  return (kv - lo->first) <= (hi->first - kv) ? &lo->second : &hi->second;
}

}  // namespace

Network impute_reactances(const Network& network, std::vector<std::string>* warnings) {
  auto has_x = [](const Line& l) { return l.reactance && *l.reactance > 0.0; };

  std::map<double, std::vector<Donor>> line_donors;
  std::map<double, std::vector<double>> transformer_donors;
  for (const auto& line : network.lines()) {
    if (!has_x(line)) continue;
    if (line.kind == LineKind::Transformer) {
      transformer_donors[line.voltage_kv].push_back(*line.reactance);
    } else if (line.is_dc) {
      continue;
    } else {
      const Bus& a = network.bus(line.from_bus);
      const Bus& b = network.bus(line.to_bus);
      if (!a.location || !b.location) continue;
      line_donors[line.voltage_kv].push_back({line_length_km(network, line), line.id, *line.reactance});
    }
  }

  std::vector<Line> lines = network.lines();
  for (auto& line : lines) {
    if (has_x(line)) continue;
    bool fell_back = false;
    if (line.kind == LineKind::Transformer) {
      const auto* pool = donors_for(transformer_donors, line.voltage_kv, fell_back);
      if (!pool) throw ImputationError("no transformer with known reactance to copy for '" + line.id + "'");
      line.reactance = median(*pool);
    } else {
      const auto* pool = donors_for(line_donors, line.voltage_kv, fell_back);
      if (!pool) throw ImputationError("no line with known reactance to copy for '" + line.id + "'");
      const double length = line_length_km(network, line);
      const Donor* best = nullptr;
      for (const auto& d : *pool) {
        if (!best) {
          best = &d;
          continue;
        }
        const double gap = std::abs(d.length_km - length);
        const double best_gap = std::abs(best->length_km - length);
        if (gap < best_gap || (gap == best_gap && d.id < best->id)) best = &d;
      }
      line.reactance = best->reactance;
    }
    if (fell_back && warnings) {
      warnings->push_back("reactance of '" + line.id + "' copied from another voltage class (no " +
                          std::to_string(line.voltage_kv) + " kV donor)");
    }
  }
  return Network(network.buses(), std::move(lines), network.base_mva());
}

Network neighborhood_filter(const Network& network, const Interface& interface, const PrepConfig& config) {
  if (network.buses().size() <= config.large_component_threshold) return network;

  std::vector<GeoPoint> anchors;
  std::unordered_set<std::string> crossing;
  for (const auto& c : interface.crossing_lines) {
    auto idx = network.find_line(c.line_id);
    if (!idx) continue;
    const Line& line = network.lines()[*idx];
    crossing.insert(line.id);
    for (const auto* end : {&line.from_bus, &line.to_bus}) {
      const Bus& bus = network.bus(*end);
      if (!bus.location) throw ValidationError("bus '" + bus.id + "' has no location for the neighborhood filter");
      anchors.push_back(*bus.location);
    }
  }

  std::vector<std::string> keep;
  for (const auto& bus : network.buses()) {
    if (!bus.location) throw ValidationError("bus '" + bus.id + "' has no location for the neighborhood filter");
    for (const auto& a : anchors) {
      if (geo::distance_km(a, *bus.location) <= config.neighborhood_radius_km) {
        keep.push_back(bus.id);
        break;
      }
    }
  }
  Network near = induced_subnetwork(network, keep);

  std::unordered_set<std::string> with_crossing;
  for (const auto& line : near.lines()) {
    if (crossing.contains(line.id)) with_crossing.insert(line.from_bus);
  }
  std::vector<std::string> retained;
  for (const auto& component : connected_components(near)) {
    bool has = std::any_of(component.begin(), component.end(),
                           [&](const std::string& id) { return with_crossing.contains(id); });
    if (has) retained.insert(retained.end(), component.begin(), component.end());
  }
  return induced_subnetwork(near, retained);
}

namespace {

bool needs_locations(const Network& network, const PrepConfig& config) {
  if (config.boundary_polygon) return true;
  for (const auto& line : network.lines()) {
    if (line.kind == LineKind::Transformer || line.is_dc) continue;
    const bool missing_x = !(line.reactance && *line.reactance > 0.0);
    const bool missing_r = !(line.rating && *line.rating > 0.0);
    if (missing_x || missing_r) return true;
  }
  for (const auto& component : connected_components(network)) {
    if (component.size() > config.large_component_threshold) return true;
  }
  return false;
}

}  // namespace

PrepResult prepare_network(const Network& raw, const PrepConfig& config) {
  config.validate();
  PrepResult result;
  auto& log = result.log;
  auto note = [&log](const std::string& step, const Network& before, const Network& after) {
    log.push_back(step + ": " + std::to_string(before.buses().size()) + " -> " +
                  std::to_string(after.buses().size()) + " buses, " + std::to_string(before.lines().size()) +
                  " -> " + std::to_string(after.lines().size()) + " lines");
  };

  Network net = raw;
  const bool any_missing = std::any_of(net.buses().begin(), net.buses().end(),
                                       [](const Bus& b) { return !b.location; });
  if (any_missing && needs_locations(net, config)) {
    net = infer_missing_locations(net);
    log.push_back("infer_missing_locations: filled missing bus locations");
  } else if (any_missing) {
    log.push_back("infer_missing_locations: skipped (no step needs locations)");
  }

  Network next = filter_by_geography(net, config);
  note("filter_by_geography", net, next);
  net = std::move(next);

  next = drop_dc_elements(net);
  note("drop_dc_elements", net, next);
  net = std::move(next);

  next = impute_reactances(net, &log);
  note("impute_reactances", net, next);
  net = std::move(next);

  next = impute_ratings(net, config.loadability);
  note("impute_ratings", net, next);
  net = std::move(next);

  next = reduce_radial_buses(net);
  note("reduce_radial_buses", net, next);
  net = std::move(next);

  ValidationReport report = validate_network(net);
  if (!report.empty()) {
    const auto& v = report.violations.front();
    throw ValidationError("prepared network is not solver-ready: " + std::string(to_string(v.kind)) + " at '" +
                          v.element + "' (" + std::to_string(report.violations.size()) + " violation(s))");
  }
  result.network = std::move(net);
  return result;
}

}  // namespace itl
