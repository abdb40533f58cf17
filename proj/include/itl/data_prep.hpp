#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "itl/network.hpp"

namespace itl {

/// Lumped per-voltage line characteristics used for the loadability curve.
struct VoltageClass {
  double thermal_limit_mw = 0.0;
  double reactance_ohm_per_km = 0.0;
  double sil_mw = 0.0;
};

/// Parameters for filling missing ratings from line length and voltage.
///
/// The limit is the lesser of the thermal rating and the angular stability
/// limit of a lossless line, V^2 / (x * length) * sin(max_angle). The voltage
/// drop bound is assumed to be folded into the per-voltage table; it is kept
/// here so configurations can state it, but does not enter the formula.
struct LoadabilityParams {
  std::map<double, VoltageClass> classes;  // keyed by nominal kV
  double max_angle_deg = 45.0;
  double max_voltage_drop_frac = 0.05;
  double min_length_km = 1.0;

  /// Typical North American values; illustrative, not authoritative.
  static LoadabilityParams defaults();

  /// Throws ConfigError on out-of-range values.
  void validate() const;

  /// Entry for `voltage_kv`, or the nearest class (ties go to the lower
  /// voltage). Throws ConfigError when the table is empty.
  const VoltageClass& lookup(double voltage_kv) const;
};

struct PrepConfig {
  std::optional<std::vector<GeoPoint>> boundary_polygon;
  double boundary_buffer_km = 100.0;
  double neighborhood_radius_km = 800.0;
  std::size_t large_component_threshold = 5000;
  LoadabilityParams loadability = LoadabilityParams::defaults();

  void validate() const;
};

/// Fills missing bus locations from the nearest located buses by hop count;
/// equally near buses are averaged. Throws ImputationError when a bus cannot
/// reach any located bus.
Network infer_missing_locations(const Network& network);

/// Drops buses farther than the buffer from the boundary polygon, and their
/// lines. No-op without a polygon.
Network filter_by_geography(const Network& network, const PrepConfig& config);

/// Iteratively removes buses that connect to a single neighbor within their
/// own zone. The neighbor inherits the removed bus's injection capability.
Network reduce_radial_buses(const Network& network);

/// Removes DC lines and any bus the removal leaves without lines.
Network drop_dc_elements(const Network& network);

double loadability_limit(double length_km, double voltage_kv, const LoadabilityParams& params);

/// Endpoint-to-endpoint geodesic length; transformers have zero length.
/// Throws ImputationError if a line endpoint has no location.
double line_length_km(const Network& network, const Line& line);

/// Fills missing or nonpositive ratings from the loadability curve.
Network impute_ratings(const Network& network, const LoadabilityParams& params);

/// Fills missing or nonpositive reactances. Lines copy the same-voltage line
/// of nearest length; transformers take the same-voltage transformer median.
/// Falls back to the nearest voltage with a warning.
Network impute_reactances(const Network& network, std::vector<std::string>* warnings = nullptr);

/// For large components, keeps buses within the radius of any crossing-line
/// endpoint and then only the pieces that still hold crossing lines.
Network neighborhood_filter(const Network& network, const Interface& interface, const PrepConfig& config);

struct PrepResult {
  Network network;
  std::vector<std::string> log;
};

/// Runs every cleaning step in order and validates the result. Throws
/// ValidationError if the output is not solver-ready.
PrepResult prepare_network(const Network& raw, const PrepConfig& config);

}  // namespace itl
