#include "itl/network.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <unordered_set>

#include "itl/error.hpp"

namespace itl {

Network::Network(std::vector<Bus> buses, std::vector<Line> lines, double base_mva)
    : buses_(std::move(buses)), lines_(std::move(lines)), base_mva_(base_mva) {
  bus_index_.reserve(buses_.size());
  for (std::size_t i = 0; i < buses_.size(); ++i) bus_index_.try_emplace(buses_[i].id, i);
  line_index_.reserve(lines_.size());
  for (std::size_t i = 0; i < lines_.size(); ++i) line_index_.try_emplace(lines_[i].id, i);
}

std::optional<std::size_t> Network::find_bus(std::string_view id) const {
  auto it = bus_index_.find(std::string(id));
  if (it == bus_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> Network::find_line(std::string_view id) const {
  auto it = line_index_.find(std::string(id));
  if (it == line_index_.end()) return std::nullopt;
  return it->second;
}

const Bus& Network::bus(std::string_view id) const {
  auto idx = find_bus(id);
  if (!idx) throw MismatchError("unknown bus '" + std::string(id) + "'");
  return buses_[*idx];
}

const Line& Network::line(std::string_view id) const {
  auto idx = find_line(id);
  if (!idx) throw MismatchError("unknown line '" + std::string(id) + "'");
  return lines_[*idx];
}

std::vector<std::vector<std::size_t>> Network::incident_lines() const {
  std::vector<std::vector<std::size_t>> incident(buses_.size());
  for (std::size_t l = 0; l < lines_.size(); ++l) {
    auto from = find_bus(lines_[l].from_bus);
    auto to = find_bus(lines_[l].to_bus);
    if (!from || !to) continue;
    incident[*from].push_back(l);
    if (*to != *from) incident[*to].push_back(l);
  }
  return incident;
}

std::vector<std::string> Network::zones() const {
  std::set<std::string> zones;
  for (const auto& bus : buses_) zones.insert(bus.zone);
  return {zones.begin(), zones.end()};
}

std::size_t ValidationReport::count(ViolationKind kind) const {
  return static_cast<std::size_t>(std::count_if(violations.begin(), violations.end(),
                                                [kind](const Violation& v) { return v.kind == kind; }));
}

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::DuplicateBusId: return "duplicate-bus-id";
    case ViolationKind::DuplicateLineId: return "duplicate-line-id";
    case ViolationKind::DanglingEndpoint: return "dangling-endpoint";
    case ViolationKind::SelfLoop: return "self-loop";
    case ViolationKind::MissingReactance: return "missing-reactance";
    case ViolationKind::NonpositiveReactance: return "nonpositive-reactance";
    case ViolationKind::MissingRating: return "missing-rating";
    case ViolationKind::NonpositiveRating: return "nonpositive-rating";
    case ViolationKind::NonpositiveVoltage: return "nonpositive-voltage";
    case ViolationKind::DcLine: return "dc-line";
    case ViolationKind::MissingZone: return "missing-zone";
  }
  return "unknown";
}

ValidationReport validate_network(const Network& network) {
  ValidationReport report;
  auto add = [&report](ViolationKind kind, const std::string& element, std::string message) {
    report.violations.push_back({kind, element, std::move(message)});
  };

  std::unordered_set<std::string> seen;
  for (const auto& bus : network.buses()) {
    if (!seen.insert(bus.id).second) add(ViolationKind::DuplicateBusId, bus.id, "bus id appears more than once");
    if (bus.zone.empty()) add(ViolationKind::MissingZone, bus.id, "bus has no zone");
  }
  seen.clear();
  for (const auto& line : network.lines()) {
    if (!seen.insert(line.id).second) add(ViolationKind::DuplicateLineId, line.id, "line id appears more than once");
    for (const auto* end : {&line.from_bus, &line.to_bus}) {
      if (!network.find_bus(*end)) add(ViolationKind::DanglingEndpoint, line.id, "references unknown bus '" + *end + "'");
    }
    if (line.from_bus == line.to_bus) add(ViolationKind::SelfLoop, line.id, "from_bus equals to_bus");
    if (!line.reactance) {
      add(ViolationKind::MissingReactance, line.id, "reactance missing");
    } else if (!(*line.reactance > 0.0)) {
      add(ViolationKind::NonpositiveReactance, line.id, "reactance must be > 0");
    }
    if (!line.rating) {
      add(ViolationKind::MissingRating, line.id, "rating missing");
    } else if (!(*line.rating > 0.0)) {
      add(ViolationKind::NonpositiveRating, line.id, "rating must be > 0");
    }
    if (!(line.voltage_kv > 0.0)) add(ViolationKind::NonpositiveVoltage, line.id, "voltage_kv must be > 0");
    if (line.is_dc) add(ViolationKind::DcLine, line.id, "DC line present after preparation");
  }
  return report;
}

std::vector<Interface> build_interfaces(const Network& network) {
  std::map<std::pair<std::string, std::string>, std::vector<CrossingLine>> by_pair;
  for (const auto& line : network.lines()) {
    if (line.is_dc) continue;
    auto from = network.find_bus(line.from_bus);
    auto to = network.find_bus(line.to_bus);
    if (!from || !to) continue;
    const std::string& zf = network.buses()[*from].zone;
    const std::string& zt = network.buses()[*to].zone;
    if (zf == zt) continue;
    // std::string comparison is byte-wise lexicographic.
    if (zf < zt) {
      by_pair[{zf, zt}].push_back({line.id, +1});
    } else {
      by_pair[{zt, zf}].push_back({line.id, -1});
    }
  }
  std::vector<Interface> interfaces;
  interfaces.reserve(by_pair.size());
  for (auto& [pair, lines] : by_pair) {
    std::sort(lines.begin(), lines.end(),
              [](const CrossingLine& a, const CrossingLine& b) { return a.line_id < b.line_id; });
    interfaces.push_back({pair.first, pair.second, std::move(lines)});
  }
  return interfaces;
}

double rating_sum(const Network& network, const Interface& interface) {
  double sum = 0.0;
  for (const auto& c : interface.crossing_lines) {
    if (auto idx = network.find_line(c.line_id)) sum += network.lines()[*idx].rating.value_or(0.0);
  }
  return sum;
}

namespace {

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

}  // namespace

std::vector<std::vector<std::string>> connected_components(const Network& network) {
  const auto& buses = network.buses();
  std::vector<std::size_t> parent(buses.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  for (const auto& line : network.lines()) {
    if (line.is_dc) continue;
    auto from = network.find_bus(line.from_bus);
    auto to = network.find_bus(line.to_bus);
    if (!from || !to) continue;
    std::size_t a = find_root(parent, *from);
    std::size_t b = find_root(parent, *to);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::map<std::size_t, std::vector<std::string>> groups;
  for (std::size_t i = 0; i < buses.size(); ++i) groups[find_root(parent, i)].push_back(buses[i].id);

  std::vector<std::vector<std::string>> components;
  components.reserve(groups.size());
  for (auto& [root, ids] : groups) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    components.push_back(std::move(ids));
  }
  std::sort(components.begin(), components.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return components;
}

Network induced_subnetwork(const Network& network, const std::vector<std::string>& bus_ids) {
  std::unordered_set<std::string> keep(bus_ids.begin(), bus_ids.end());
  std::vector<Bus> buses;
  for (const auto& bus : network.buses()) {
    if (keep.contains(bus.id)) buses.push_back(bus);
  }
  std::vector<Line> lines;
  for (const auto& line : network.lines()) {
    if (keep.contains(line.from_bus) && keep.contains(line.to_bus)) lines.push_back(line);
  }
  return Network(std::move(buses), std::move(lines), network.base_mva());
}

Network without_lines(const Network& network, const std::vector<std::string>& line_ids) {
  std::unordered_set<std::string> drop(line_ids.begin(), line_ids.end());
  std::vector<Line> lines;
  for (const auto& line : network.lines()) {
    if (!drop.contains(line.id)) lines.push_back(line);
  }
  return Network(network.buses(), std::move(lines), network.base_mva());
}

}  // namespace itl
