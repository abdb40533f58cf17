#include "itl/aggregation.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include "itl/error.hpp"

namespace itl {

RegionMapping identity_mapping(const Network& network) {
  RegionMapping mapping;
  for (const auto& zone : network.zones()) mapping.emplace(zone, zone);
  return mapping;
}

Network relabel_zones(const Network& network, const RegionMapping& mapping) {
  std::vector<Bus> buses = network.buses();
  for (auto& bus : buses) {
    auto it = mapping.find(bus.zone);
    if (it == mapping.end()) throw ConfigError("zone '" + bus.zone + "' has no region in the mapping");
    bus.zone = it->second;
  }
  return Network(std::move(buses), network.lines(), network.base_mva());
}

std::vector<ItlResult> aggregate_direct(const Network& network, const RegionMapping& mapping,
                                        const StudyOptions& options) {
  return compute_all_itls(relabel_zones(network, mapping), options);
}

std::vector<ContingencyResult> aggregate_direct_contingencies(const Network& network, const RegionMapping& mapping,
                                                              const StudyOptions& options) {
  return compute_all_contingencies(relabel_zones(network, mapping), options);
}

namespace {

const std::string& region_of(const RegionMapping& mapping, const std::string& zone) {
  auto it = mapping.find(zone);
  if (it == mapping.end()) throw ConfigError("zone '" + zone + "' has no region in the mapping");
  return it->second;
}

Direction flip(Direction d) { return d == Direction::Forward ? Direction::Reverse : Direction::Forward; }

}  // namespace

std::vector<SummedItl> aggregate_summed(const std::vector<ItlResult>& zonal_results, const RegionMapping& mapping) {
  using Key = std::tuple<std::string, std::string, Direction>;
  std::map<Key, SummedItl> sums;
  // Constituent interfaces per region pair, and which (interface, direction) have usable results.
  std::map<std::pair<std::string, std::string>, std::set<std::string>> constituents;
  std::set<std::pair<std::string, Direction>> usable;
  std::map<std::string, double> rating_sums;
  std::map<std::string, bool> zonal_forward_aligned;

  for (const auto& r : zonal_results) {
    const std::string& ra = region_of(mapping, r.zone_a);
    const std::string& rb = region_of(mapping, r.zone_b);
    if (ra == rb) continue;
    const bool aligned = ra < rb;
    const std::pair<std::string, std::string> pair = aligned ? std::pair{ra, rb} : std::pair{rb, ra};
    constituents[pair].insert(r.interface_id);
    rating_sums[r.interface_id] = r.rating_sum_mw;
    zonal_forward_aligned[r.interface_id] = aligned;
    if (!r.usable()) continue;
    usable.insert({r.interface_id, r.direction});

    const Direction region_dir = aligned ? r.direction : flip(r.direction);
    SummedItl& s = sums[{pair.first, pair.second, region_dir}];
    s.itl_mw += r.itl_mw;
    s.constituents.push_back(r.interface_id + ":" + std::string(to_string(r.direction)));
  }

  std::vector<SummedItl> out;
  for (const auto& [pair, ids] : constituents) {
    for (Direction region_dir : {Direction::Forward, Direction::Reverse}) {
      auto it = sums.find({pair.first, pair.second, region_dir});
      const bool any_direction_seen = std::any_of(ids.begin(), ids.end(), [&](const std::string& id) {
        const Direction zonal_dir = zonal_forward_aligned[id] ? region_dir : flip(region_dir);
        return std::any_of(zonal_results.begin(), zonal_results.end(), [&](const ItlResult& r) {
          return r.interface_id == id && r.direction == zonal_dir;
        });
      });
      if (it == sums.end() && !any_direction_seen) continue;

      SummedItl s = it == sums.end() ? SummedItl{} : it->second;
      s.region_a = pair.first;
      s.region_b = pair.second;
      s.direction = region_dir;
      s.rating_sum_mw = 0.0;
      for (const auto& id : ids) {
        s.rating_sum_mw += rating_sums[id];
        const Direction zonal_dir = zonal_forward_aligned[id] ? region_dir : flip(region_dir);
        if (!usable.contains({id, zonal_dir})) s.missing.push_back(id + ":" + std::string(to_string(zonal_dir)));
      }
      std::sort(s.constituents.begin(), s.constituents.end());
      out.push_back(std::move(s));
    }
  }
  return out;
}

std::optional<bool> AggregationRow::summed_n0_at_least_direct(double tol) const {
  if (!summed_n0 || !direct_n0) return std::nullopt;
  return *summed_n0 >= *direct_n0 - tol;
}

std::optional<bool> AggregationRow::summed_n1_below_direct(double tol) const {
  if (!summed_n1 || !direct_n1) return std::nullopt;
  return *summed_n1 < *direct_n1 - tol;
}

std::vector<AggregationRow> compare_direct_vs_summed(const std::vector<ItlResult>& direct_n0,
                                                     const std::vector<ItlResult>& direct_n1,
                                                     const std::vector<SummedItl>& summed_n0,
                                                     const std::vector<SummedItl>& summed_n1) {
  using Key = std::tuple<std::string, std::string, Direction>;
  std::map<Key, AggregationRow> rows;
  auto row = [&rows](const std::string& a, const std::string& b, Direction d) -> AggregationRow& {
    AggregationRow& r = rows[{a, b, d}];
    r.region_a = a;
    r.region_b = b;
    r.direction = d;
    return r;
  };
  for (const auto& r : direct_n0) {
    AggregationRow& x = row(r.zone_a, r.zone_b, r.direction);
    x.rating_sum_mw = r.rating_sum_mw;
    if (r.usable()) x.direct_n0 = r.itl_mw;
  }
  for (const auto& r : direct_n1) {
    if (r.usable()) row(r.zone_a, r.zone_b, r.direction).direct_n1 = r.itl_mw;
  }
  for (const auto& s : summed_n0) {
    AggregationRow& x = row(s.region_a, s.region_b, s.direction);
    x.summed_n0 = s.itl_mw;
    if (x.rating_sum_mw == 0.0) x.rating_sum_mw = s.rating_sum_mw;
    x.partial = x.partial || s.partial();
  }
  for (const auto& s : summed_n1) {
    AggregationRow& x = row(s.region_a, s.region_b, s.direction);
    x.summed_n1 = s.itl_mw;
    x.partial = x.partial || s.partial();
  }
  std::vector<AggregationRow> out;
  out.reserve(rows.size());
  for (auto& [key, r] : rows) out.push_back(std::move(r));
  return out;
}

}  // namespace itl
