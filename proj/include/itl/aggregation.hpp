#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "itl/contingency.hpp"

namespace itl {

/// zone id -> planning region id.
using RegionMapping = std::map<std::string, std::string>;

/// Every zone of the network mapped to itself.
RegionMapping identity_mapping(const Network& network);

/// Copy of the network with each bus zone replaced by its region. Throws
/// ConfigError for zones the mapping does not cover.
Network relabel_zones(const Network& network, const RegionMapping& mapping);

/// Region-level ITLs computed directly on the relabeled network.
std::vector<ItlResult> aggregate_direct(const Network& network, const RegionMapping& mapping,
                                        const StudyOptions& options);

/// Region-level n-0 and n-1 computed directly; one line leaves per region
/// interface and direction.
std::vector<ContingencyResult> aggregate_direct_contingencies(const Network& network, const RegionMapping& mapping,
                                                              const StudyOptions& options);

/// Sum of constituent zonal ITLs for one region pair and direction.
struct SummedItl {
  std::string region_a;
  std::string region_b;
  Direction direction = Direction::Forward;
  double itl_mw = 0.0;
  double rating_sum_mw = 0.0;
  std::vector<std::string> constituents;  // zonal interface ids with the zonal direction, e.g. "p1||p2:reverse"
  std::vector<std::string> missing;
  bool partial() const { return !missing.empty(); }
  std::string interface_id() const { return region_a + "||" + region_b; }
};

/// Orients each zonal result toward its region pair and sums. Works for n-0
/// and n-1 inputs alike. A constituent without a usable result in some
/// direction is listed as missing and the sum is partial.
std::vector<SummedItl> aggregate_summed(const std::vector<ItlResult>& zonal_results, const RegionMapping& mapping);

struct AggregationRow {
  std::string region_a;
  std::string region_b;
  Direction direction = Direction::Forward;
  double rating_sum_mw = 0.0;
  std::optional<double> direct_n0;
  std::optional<double> direct_n1;
  std::optional<double> summed_n0;
  std::optional<double> summed_n1;
  bool partial = false;

  /// Summed n-0 is never below direct n-0 (within tolerance) in exact arithmetic.
  std::optional<bool> summed_n0_at_least_direct(double tol = 1e-6) const;
  /// The usual pattern at n-1: summing constituents undercounts.
  std::optional<bool> summed_n1_below_direct(double tol = 1e-6) const;
};

/// Aligns direct and summed results by region pair and direction. Either n-1
/// input may be empty.
std::vector<AggregationRow> compare_direct_vs_summed(const std::vector<ItlResult>& direct_n0,
                                                     const std::vector<ItlResult>& direct_n1,
                                                     const std::vector<SummedItl>& summed_n0,
                                                     const std::vector<SummedItl>& summed_n1);

}  // namespace itl
