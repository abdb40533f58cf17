#include "itl/report.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>

#include "itl/csv.hpp"
#include "itl/error.hpp"

namespace itl {

std::string_view to_string(Level level) { return level == Level::N0 ? "n-0" : "n-1"; }

namespace {

double round_mw(double v) {
  const double r = std::round(v * 1000.0) / 1000.0;
  return r == 0.0 ? 0.0 : r;
}

ItlRow make_row(const ItlResult& r, Level level, std::string removed) {
  ItlRow row;
  row.interface_id = r.interface_id;
  row.direction = std::string(to_string(r.direction));
  row.level = level;
  row.itl_mw = round_mw(r.itl_mw);
  row.rating_sum_mw = round_mw(r.rating_sum_mw);
  row.removed_line = std::move(removed);
  row.binding_lines = r.binding_lines;
  row.status = std::string(to_string(r.status));
  return row;
}

std::string join(const std::vector<std::string>& items, char sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  if (text.empty()) return out;
  std::size_t start = 0;
  while (true) {
    std::size_t end = text.find(sep, start);
    out.push_back(text.substr(start, end - start));
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return out;
}

}  // namespace

std::vector<ItlRow> itl_rows(const std::vector<ContingencyResult>& results, bool include_n1) {
  std::vector<ItlRow> rows;
  for (const auto& cr : results) {
    rows.push_back(make_row(cr.n0, Level::N0, ""));
    if (include_n1) rows.push_back(make_row(cr.n1, Level::N1, cr.removed_line));
  }
  return rows;
}

std::vector<ItlRow> itl_rows(const std::vector<ItlResult>& results) {
  std::vector<ItlRow> rows;
  for (const auto& r : results) rows.push_back(make_row(r, Level::N0, ""));
  return rows;
}

void write_itl_csv(const std::vector<ItlRow>& rows, std::ostream& out) {
  csv::write_row(out, {"interface", "direction", "level", "itl_mw", "rating_sum_mw", "removed_line", "binding_lines",
                       "status"});
  for (const auto& r : rows) {
    csv::write_row(out, {r.interface_id, r.direction, std::string(to_string(r.level)), csv::fixed(r.itl_mw, 3),
                         csv::fixed(r.rating_sum_mw, 3), r.removed_line, join(r.binding_lines, ';'), r.status});
  }
}

std::vector<ItlRow> read_itl_csv(const std::filesystem::path& path) {
  const csv::Table t = csv::read(path);
  const std::size_t c_if = t.column("interface"), c_dir = t.column("direction"), c_level = t.column("level"),
                    c_itl = t.column("itl_mw"), c_sum = t.column("rating_sum_mw"), c_rm = t.column("removed_line"),
                    c_bind = t.column("binding_lines"), c_status = t.column("status");
  std::vector<ItlRow> rows;
  for (const auto& row : t.rows) {
    ItlRow r;
    r.interface_id = row.fields[c_if];
    r.direction = row.fields[c_dir];
    if (row.fields[c_level] == "n-0") {
      r.level = Level::N0;
    } else if (row.fields[c_level] == "n-1") {
      r.level = Level::N1;
    } else {
      t.fail(row, "level", "expected n-0 or n-1");
    }
    r.itl_mw = t.number(row, c_itl);
    r.rating_sum_mw = t.number(row, c_sum);
    r.removed_line = row.fields[c_rm];
    r.binding_lines = split(row.fields[c_bind], ';');
    r.status = row.fields[c_status];
    rows.push_back(std::move(r));
  }
  return rows;
}

double median(std::vector<double> values) {
  if (values.empty()) return std::nan("");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double SummaryStats::get(std::string_view metric, std::string_view level, std::string_view direction,
                         std::string_view interface_id) const {
  for (const auto& r : rows) {
    if (r.metric == metric && r.level == level && r.direction == direction && r.interface_id == interface_id)
      return r.value;
  }
  throw std::out_of_range("no statistic " + std::string(metric) + " " + std::string(level) + " " +
                          std::string(direction) + " " + std::string(interface_id));
}

SummaryStats compute_summary(const std::vector<ItlRow>& rows) {
  struct Entry {
    std::optional<double> itl[2][2];  // [level][forward=0, reverse=1]
    double rating_sum[2] = {0.0, 0.0};
  };
  std::map<std::string, Entry> by_interface;
  for (const auto& r : rows) {
    if (r.status == "failed") continue;
    const int lv = r.level == Level::N0 ? 0 : 1;
    const int dir = r.direction == "forward" ? 0 : 1;
    Entry& e = by_interface[r.interface_id];
    e.itl[lv][dir] = r.itl_mw;
    e.rating_sum[lv] = r.rating_sum_mw;
  }

  SummaryStats stats;
  auto add = [&stats](std::string metric, Level lv, std::string dir, std::string iface, double value, bool mw) {
    stats.rows.push_back({std::move(metric), std::string(to_string(lv)), std::move(dir), std::move(iface), value, mw});
  };
  auto ratio_to = [](double num, double den) -> std::optional<double> {
    if (!(den > 0.0)) return std::nullopt;
    return num / den;
  };

  // Rating sums are always the intact n-0 crossing set.
  for (Level lv : {Level::N0, Level::N1}) {
    const int l = lv == Level::N0 ? 0 : 1;
    std::map<std::string, std::vector<double>> to_rating;  // by direction label
    std::vector<double> direction_ratios;
    std::map<std::string, std::pair<std::size_t, std::size_t>> zero_counts;  // zero, total
    bool any = false;
    for (const auto& [iface, e] : by_interface) {
      const double sum = e.rating_sum[0];
      const auto& fwd = e.itl[l][0];
      const auto& rev = e.itl[l][1];
      if (!fwd && !rev) continue;
      any = true;
      for (int d = 0; d < 2; ++d) {
        if (!e.itl[l][d]) continue;
        const std::string dir = d == 0 ? "forward" : "reverse";
        auto& zc = zero_counts[dir];
        ++zc.second;
        if (*e.itl[l][d] <= kRatioFloorMw) ++zc.first;
        if (auto ratio = ratio_to(*e.itl[l][d], sum)) {
          add("itl_to_rating_sum", lv, dir, iface, *ratio, false);
          to_rating[dir].push_back(*ratio);
        }
      }
      if (fwd && rev) {
        const double hi = std::max(*fwd, *rev);
        const double lo = std::min(*fwd, *rev);
        const double ratio = hi / std::max(lo, kRatioFloorMw);
        add("direction_ratio", lv, "both", iface, ratio, false);
        direction_ratios.push_back(ratio);
        if (auto r = ratio_to(hi, sum)) to_rating["higher"].push_back(*r);
        if (auto r = ratio_to(lo, sum)) to_rating["lower"].push_back(*r);
      }
    }
    if (!any) continue;
    for (const char* dir : {"forward", "reverse", "higher", "lower"}) {
      auto it = to_rating.find(dir);
      if (it != to_rating.end() && !it->second.empty())
        add("median_itl_to_rating_sum", lv, dir, "*", median(it->second), false);
    }
    if (!direction_ratios.empty()) {
      add("median_direction_ratio", lv, "both", "*", median(direction_ratios), false);
      const auto within = std::count_if(direction_ratios.begin(), direction_ratios.end(),
                                        [](double r) { return r <= 1.05; });
      add("fraction_direction_ratio_le_1.05", lv, "both", "*",
          static_cast<double>(within) / static_cast<double>(direction_ratios.size()), false);
    }
    for (const auto& [dir, zc] : zero_counts) {
      add("fraction_zero_itl", lv, dir, "*", static_cast<double>(zc.first) / static_cast<double>(zc.second), false);
    }
    std::size_t count = 0;
    for (const auto& [iface, e] : by_interface) count += (e.itl[l][0] || e.itl[l][1]) ? 1 : 0;
    add("interface_count", lv, "both", "*", static_cast<double>(count), false);
  }

  std::map<std::string, std::vector<double>> diffs;
  std::map<std::string, std::vector<double>> ratios;
  for (const auto& [iface, e] : by_interface) {
    for (int d = 0; d < 2; ++d) {
      if (!e.itl[0][d] || !e.itl[1][d]) continue;
      const std::string dir = d == 0 ? "forward" : "reverse";
      const double diff = *e.itl[1][d] - *e.itl[0][d];
      add("n1_minus_n0_mw", Level::N1, dir, iface, diff, true);
      diffs[dir].push_back(diff);
      if (auto r = ratio_to(*e.itl[1][d], *e.itl[0][d])) {
        add("n1_to_n0_ratio", Level::N1, dir, iface, *r, false);
        ratios[dir].push_back(*r);
      }
    }
  }
  for (const auto& [dir, v] : diffs) add("median_n1_minus_n0_mw", Level::N1, dir, "*", median(v), true);
  for (const auto& [dir, v] : ratios) add("median_n1_to_n0_ratio", Level::N1, dir, "*", median(v), false);
  return stats;
}

void write_stats_csv(const SummaryStats& stats, std::ostream& out) {
  csv::write_row(out, {"metric", "level", "direction", "interface", "value"});
  for (const auto& r : stats.rows) {
    csv::write_row(out, {r.metric, r.level, r.direction, r.interface_id, csv::fixed(r.value, r.is_mw ? 3 : 6)});
  }
}

}  // namespace itl
