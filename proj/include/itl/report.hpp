#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "itl/contingency.hpp"

namespace itl {

enum class Level { N0, N1 };

std::string_view to_string(Level level);

/// One line of itl.csv.
struct ItlRow {
  std::string interface_id;
  std::string direction;  // forward | reverse
  Level level = Level::N0;
  double itl_mw = 0.0;
  double rating_sum_mw = 0.0;
  std::string removed_line;
  std::vector<std::string> binding_lines;
  std::string status;
};

/// n-0 rows and, when `include_n1`, n-1 rows in interface/direction order.
/// MW values are rounded to the printed precision so downstream statistics
/// can be reproduced from the file alone.
std::vector<ItlRow> itl_rows(const std::vector<ContingencyResult>& results, bool include_n1);
std::vector<ItlRow> itl_rows(const std::vector<ItlResult>& results);

void write_itl_csv(const std::vector<ItlRow>& rows, std::ostream& out);
std::vector<ItlRow> read_itl_csv(const std::filesystem::path& path);

/// A single statistic. Per-interface values carry the interface id; summary
/// values use "*". `direction` is forward, reverse, higher, lower or both.
struct StatRow {
  std::string metric;
  std::string level;
  std::string direction;
  std::string interface_id;
  double value = 0.0;
  bool is_mw = false;
};

struct SummaryStats {
  std::vector<StatRow> rows;

  /// First matching value; throws std::out_of_range if absent.
  double get(std::string_view metric, std::string_view level, std::string_view direction,
             std::string_view interface_id = "*") const;
};

inline constexpr double kRatioFloorMw = 1e-6;

/// Direction ratios (higher over lower ITL), ITL over crossing-line rating
/// sum, n-1 minus n-0 differences and ratios, with medians and threshold
/// fractions across interfaces. Rows with a failed status are ignored.
SummaryStats compute_summary(const std::vector<ItlRow>& rows);

/// stats.csv: metric,level,direction,interface,value (MW with 3 decimals,
/// ratios with 6).
void write_stats_csv(const SummaryStats& stats, std::ostream& out);

double median(std::vector<double> values);

}  // namespace itl
