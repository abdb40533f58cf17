#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace itl {

enum class BusType { Generator, Load, Transmission, Unconstrained };

enum class LineKind { Line, Transformer };

struct GeoPoint {
  double lat_deg = 0.0;
  double lon_deg = 0.0;

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

struct Bus {
  std::string id;
  std::string zone;
  BusType type = BusType::Unconstrained;
  std::optional<GeoPoint> location;

  friend bool operator==(const Bus&, const Bus&) = default;
};

/// A transmission branch. Flow is positive from `from_bus` to `to_bus`.
/// Reactance is in per-unit on the system base; rating in MW.
struct Line {
  std::string id;
  std::string from_bus;
  std::string to_bus;
  std::optional<double> reactance;
  std::optional<double> rating;
  double voltage_kv = 0.0;
  LineKind kind = LineKind::Line;
  bool is_dc = false;

  friend bool operator==(const Line&, const Line&) = default;
};

/// Immutable nodal network. Buses and lines keep their input order; lookups
/// by id go through hash indices built at construction.
class Network {
 public:
  Network() = default;
  Network(std::vector<Bus> buses, std::vector<Line> lines, double base_mva = 100.0);

  const std::vector<Bus>& buses() const { return buses_; }
  const std::vector<Line>& lines() const { return lines_; }
  double base_mva() const { return base_mva_; }

  std::optional<std::size_t> find_bus(std::string_view id) const;
  std::optional<std::size_t> find_line(std::string_view id) const;

  /// Throws MismatchError for unknown ids.
  const Bus& bus(std::string_view id) const;
  const Line& line(std::string_view id) const;

  /// For each bus (by index), the indices of lines touching it. Lines with a
  /// dangling endpoint are skipped.
  std::vector<std::vector<std::size_t>> incident_lines() const;

  /// Sorted, de-duplicated zone ids.
  std::vector<std::string> zones() const;

  friend bool operator==(const Network& a, const Network& b) {
    return a.buses_ == b.buses_ && a.lines_ == b.lines_ && a.base_mva_ == b.base_mva_;
  }

 private:
  std::vector<Bus> buses_;
  std::vector<Line> lines_;
  double base_mva_ = 100.0;
  std::unordered_map<std::string, std::size_t> bus_index_;
  std::unordered_map<std::string, std::size_t> line_index_;
};

enum class ViolationKind {
  DuplicateBusId,
  DuplicateLineId,
  DanglingEndpoint,
  SelfLoop,
  MissingReactance,
  NonpositiveReactance,
  MissingRating,
  NonpositiveRating,
  NonpositiveVoltage,
  DcLine,
  MissingZone,
};

struct Violation {
  ViolationKind kind;
  std::string element;  // bus or line id
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool empty() const { return violations.empty(); }
  std::size_t count(ViolationKind kind) const;
};

std::string_view to_string(ViolationKind kind);

/// Lists every invariant a solver-ready network must satisfy. Never throws.
ValidationReport validate_network(const Network& network);

/// Ordered zone pair with its oriented crossing lines. `zone_a` sorts first
/// byte-wise; orientation is +1 when the line starts in `zone_a`.
struct CrossingLine {
  std::string line_id;
  int orientation = 1;

  friend bool operator==(const CrossingLine&, const CrossingLine&) = default;
};

struct Interface {
  std::string zone_a;
  std::string zone_b;
  std::vector<CrossingLine> crossing_lines;  // sorted by line id

  std::string id() const { return zone_a + "||" + zone_b; }
  friend bool operator==(const Interface&, const Interface&) = default;
};

/// One interface per zone pair joined by at least one AC line, sorted by
/// (zone_a, zone_b). DC lines and lines with dangling endpoints are ignored.
std::vector<Interface> build_interfaces(const Network& network);

/// Sum of crossing-line ratings (missing ratings count as zero).
double rating_sum(const Network& network, const Interface& interface);

/// Maximal connected bus sets over AC lines. Each set is sorted by bus id and
/// the list is sorted by its first element.
std::vector<std::vector<std::string>> connected_components(const Network& network);

/// Buses in `bus_ids` plus every line with both endpoints among them.
Network induced_subnetwork(const Network& network, const std::vector<std::string>& bus_ids);

/// Copy of the network without the named lines.
Network without_lines(const Network& network, const std::vector<std::string>& line_ids);

}  // namespace itl
