#include "itl/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

#include "itl/data_prep.hpp"
#include "itl/geo.hpp"

namespace itl {

namespace {

std::string padded(char prefix, std::size_t n, int width) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%c%0*zu", prefix, width, n);
  return buf;
}

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[std::max(a, b)] = std::min(a, b);
    return true;
  }
};

// Uniform draws built from raw engine output so results do not depend on the
// standard library's distribution implementations.
class Draw {
 public:
  explicit Draw(std::uint64_t seed) : engine_(seed) {}
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(unit() * static_cast<double>(n)) % n; }
  bool chance(double p) { return unit() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace

Network generate_synthetic_grid(const SyntheticGridOptions& options) {
  if (options.buses < 2 * options.zones || options.zones < 2)
    throw std::invalid_argument("synthetic grid needs at least two zones and two buses per zone");
  Draw draw(options.seed);

  const std::size_t radial = static_cast<std::size_t>(std::round(options.radial_fraction * options.buses));
  const std::size_t core = options.buses - radial;

  std::vector<GeoPoint> where(core);
  for (auto& p : where) p = {draw.uniform(30.0, 47.0), draw.uniform(-120.0, -76.0)};

  // The first `zones` points act as zone seeds, so every zone is populated.
  std::vector<std::size_t> zone_of(core);
  for (std::size_t i = 0; i < core; ++i) {
    std::size_t best = 0;
    double best_d = geo::distance_km(where[i], where[0]);
    for (std::size_t z = 1; z < options.zones; ++z) {
      const double d = geo::distance_km(where[i], where[z]);
      if (d < best_d) best = z, best_d = d;
    }
    zone_of[i] = best;
  }

  std::set<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i < core; ++i) {
    std::vector<std::pair<double, std::size_t>> near;
    for (std::size_t j = 0; j < core; ++j)
      if (j != i) near.emplace_back(geo::distance_km(where[i], where[j]), j);
    const std::size_t k = std::min(options.neighbors, near.size());
    std::partial_sort(near.begin(), near.begin() + static_cast<std::ptrdiff_t>(k), near.end());
    for (std::size_t n = 0; n < k; ++n) edges.insert({std::min(i, near[n].second), std::max(i, near[n].second)});
  }
  // Join any leftover islands through their closest pair of buses.
  UnionFind uf(core);
  for (const auto& [a, b] : edges) uf.unite(a, b);
  for (;;) {
    std::set<std::size_t> roots;
    for (std::size_t i = 0; i < core; ++i) roots.insert(uf.find(i));
    if (roots.size() == 1) break;
    const std::size_t root = *roots.begin();
    double best_d = std::numeric_limits<double>::infinity();
    std::pair<std::size_t, std::size_t> best{0, 0};
    for (std::size_t i = 0; i < core; ++i) {
      if (uf.find(i) != root) continue;
      for (std::size_t j = 0; j < core; ++j) {
        if (uf.find(j) == root) continue;
        const double d = geo::distance_km(where[i], where[j]);
        if (d < best_d) best_d = d, best = {std::min(i, j), std::max(i, j)};
      }
    }
    edges.insert(best);
    uf.unite(best.first, best.second);
  }

  auto zone_name = [](std::size_t z) { return padded('Z', z + 1, 2); };
  auto bus_name = [](std::size_t i) { return padded('B', i + 1, 3); };

  std::vector<Bus> buses;
  for (std::size_t i = 0; i < core; ++i) {
    Bus b;
    b.id = bus_name(i);
    b.zone = zone_name(zone_of[i]);
    const double u = draw.unit();
    b.type = u < 0.35 ? BusType::Generator : u < 0.80 ? BusType::Load : u < 0.95 ? BusType::Transmission
                                                                                 : BusType::Unconstrained;
    if (!draw.chance(options.missing_location_fraction)) b.location = where[i];
    buses.push_back(std::move(b));
  }

  const LoadabilityParams table = LoadabilityParams::defaults();
  const double kvs[] = {115.0, 138.0, 230.0, 230.0, 345.0, 345.0, 500.0};
  const double base_mva = 100.0;
  std::vector<Line> lines;
  auto add_line = [&](std::size_t a, std::size_t b, GeoPoint pa, GeoPoint pb, bool allow_missing) {
    Line l;
    l.id = padded('L', lines.size() + 1, 4);
    l.from_bus = bus_name(a);
    l.to_bus = bus_name(b);
    l.voltage_kv = kvs[draw.index(std::size(kvs))];
    const VoltageClass& vc = table.lookup(l.voltage_kv);
    const double length = std::max(geo::distance_km(pa, pb), 1.0);
    const double z_base = l.voltage_kv * l.voltage_kv / base_mva;
    const double x = vc.reactance_ohm_per_km * length / z_base * draw.uniform(0.85, 1.15);
    if (!(allow_missing && draw.chance(options.missing_reactance_fraction))) l.reactance = x;
    const double limit = std::min(vc.thermal_limit_mw,
                                  l.voltage_kv * l.voltage_kv / (vc.reactance_ohm_per_km * length) *
                                      std::sin(45.0 * std::acos(-1.0) / 180.0));
    if (!(allow_missing && draw.chance(options.missing_rating_fraction)))
      l.rating = std::round(limit * draw.uniform(0.6, 1.0));
    lines.push_back(std::move(l));
  };
  for (const auto& [a, b] : edges) add_line(a, b, where[a], where[b], true);

  // Radial spurs hang off random core buses in the same zone.
  for (std::size_t r = 0; r < radial; ++r) {
    const std::size_t host = draw.index(core);
    const std::size_t i = core + r;
    Bus b;
    b.id = bus_name(i);
    b.zone = buses[host].zone;
    b.type = draw.chance(0.5) ? BusType::Generator : BusType::Load;
    const GeoPoint p{where[host].lat_deg + draw.uniform(-0.2, 0.2), where[host].lon_deg + draw.uniform(-0.2, 0.2)};
    b.location = p;
    buses.push_back(std::move(b));
    add_line(host, i, where[host], p, false);
  }

  // One long DC link between the two most distant zone seeds.
  {
    std::size_t a = 0, b = 1;
    double far = 0.0;
    for (std::size_t i = 0; i < options.zones; ++i)
      for (std::size_t j = i + 1; j < options.zones; ++j)
        if (double d = geo::distance_km(where[i], where[j]); d > far) far = d, a = i, b = j;
    Line dc;
    dc.id = padded('L', lines.size() + 1, 4);
    dc.from_bus = bus_name(a);
    dc.to_bus = bus_name(b);
    dc.voltage_kv = 500.0;
    dc.rating = 3000.0;
    dc.is_dc = true;
    lines.push_back(std::move(dc));
  }
  return Network(std::move(buses), std::move(lines), base_mva);
}

Network generate_random_network(const RandomNetworkOptions& options) {
  if (options.max_buses < 3 || options.min_zones < 2 || options.max_zones < options.min_zones)
    throw std::invalid_argument("random network options are inconsistent");
  Draw draw(options.seed * 0x9E3779B97F4A7C15ULL + 17);

  const std::size_t zones_wanted = options.min_zones + draw.index(options.max_zones - options.min_zones + 1);
  const std::size_t min_buses = std::max<std::size_t>(3, zones_wanted);
  const std::size_t n = min_buses + draw.index(options.max_buses - min_buses + 1);
  const std::size_t zones = std::min(zones_wanted, n);

  std::vector<Bus> buses(n);
  for (std::size_t i = 0; i < n; ++i) {
    buses[i].id = padded('b', i, 2);
    // The first `zones` buses seed each zone so none is empty.
    buses[i].zone = "z" + std::to_string(i < zones ? i : draw.index(zones));
    if (options.all_unconstrained) {
      buses[i].type = BusType::Unconstrained;
    } else {
      const double u = draw.unit();
      buses[i].type = u < 0.3 ? BusType::Generator : u < 0.6 ? BusType::Load : u < 0.75 ? BusType::Transmission
                                                                                     : BusType::Unconstrained;
    }
  }

  std::vector<Line> lines;
  auto add = [&](std::size_t a, std::size_t b) {
    Line l;
    l.id = padded('l', lines.size(), 2);
    l.from_bus = buses[a].id;
    l.to_bus = buses[b].id;
    l.reactance = draw.uniform(0.01, 0.5);
    l.rating = std::round(draw.uniform(50.0, 500.0));
    l.voltage_kv = 230.0;
    lines.push_back(std::move(l));
  };
  // Random spanning tree, then extra lines up to the budget.
  for (std::size_t i = 1; i < n; ++i) add(draw.index(i), i);
  const std::size_t budget = std::max(n - 1, std::min(options.max_lines, n - 1 + draw.index(n + 1)));
  while (lines.size() < budget) {
    const std::size_t a = draw.index(n);
    const std::size_t b = draw.index(n);
    if (a != b) add(a, b);
  }
  return Network(std::move(buses), std::move(lines), 100.0);
}

}  // namespace itl
