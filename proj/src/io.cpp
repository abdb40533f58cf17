#include "itl/io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include "itl/csv.hpp"
#include "itl/error.hpp"

namespace itl::io {
namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string_view type_name(BusType type) {
  switch (type) {
    case BusType::Generator: return "gen";
    case BusType::Load: return "load";
    case BusType::Transmission: return "trans";
    case BusType::Unconstrained: return "";
  }
  return "";
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

}  // namespace

Network load_network(const std::filesystem::path& buses_path, const std::filesystem::path& lines_path,
                     double base_mva) {
  const csv::Table bt = csv::read(buses_path);
  const std::size_t b_id = bt.column("id"), b_zone = bt.column("zone"), b_type = bt.column("type"),
                    b_lat = bt.column("lat"), b_lon = bt.column("lon");
  std::vector<Bus> buses;
  buses.reserve(bt.rows.size());
  for (const auto& row : bt.rows) {
    Bus bus;
    bus.id = row.fields[b_id];
    if (bus.id.empty()) bt.fail(row, "id", "bus id required");
    bus.zone = row.fields[b_zone];
    if (bus.zone.empty()) bt.fail(row, "zone", "zone required");
    const std::string type = lower(row.fields[b_type]);
    if (type == "gen") {
      bus.type = BusType::Generator;
    } else if (type == "load") {
      bus.type = BusType::Load;
    } else if (type == "trans") {
      bus.type = BusType::Transmission;
    } else if (type.empty()) {
      bus.type = BusType::Unconstrained;
    } else {
      bt.fail(row, "type", "expected gen, load, trans or blank, got '" + row.fields[b_type] + "'");
    }
    auto lat = bt.optional_number(row, b_lat);
    auto lon = bt.optional_number(row, b_lon);
    if (lat.has_value() != lon.has_value()) bt.fail(row, lat ? "lon" : "lat", "lat and lon must both be given or both blank");
    if (lat) {
      if (*lat < -90.0 || *lat > 90.0) bt.fail(row, "lat", "latitude out of range");
      if (*lon < -180.0 || *lon > 180.0) bt.fail(row, "lon", "longitude out of range");
      bus.location = GeoPoint{*lat, *lon};
    }
    buses.push_back(std::move(bus));
  }

  const csv::Table lt = csv::read(lines_path);
  const std::size_t l_id = lt.column("id"), l_from = lt.column("from"), l_to = lt.column("to"),
                    l_x = lt.column("reactance_pu"), l_r = lt.column("rating_mw"), l_kv = lt.column("voltage_kv"),
                    l_kind = lt.column("kind"), l_dc = lt.column("is_dc");
  std::vector<Line> lines;
  lines.reserve(lt.rows.size());
  for (const auto& row : lt.rows) {
    Line line;
    line.id = row.fields[l_id];
    if (line.id.empty()) lt.fail(row, "id", "line id required");
    line.from_bus = row.fields[l_from];
    line.to_bus = row.fields[l_to];
    if (line.from_bus.empty()) lt.fail(row, "from", "bus id required");
    if (line.to_bus.empty()) lt.fail(row, "to", "bus id required");
    line.reactance = lt.optional_number(row, l_x);
    line.rating = lt.optional_number(row, l_r);
    line.voltage_kv = lt.number(row, l_kv);
    const std::string kind = lower(row.fields[l_kind]);
    if (kind.empty() || kind == "line") {
      line.kind = LineKind::Line;
    } else if (kind == "transformer") {
      line.kind = LineKind::Transformer;
    } else {
      lt.fail(row, "kind", "expected line or transformer, got '" + row.fields[l_kind] + "'");
    }
    const std::string dc = lower(row.fields[l_dc]);
    if (dc.empty() || dc == "false" || dc == "0") {
      line.is_dc = false;
    } else if (dc == "true" || dc == "1") {
      line.is_dc = true;
    } else {
      lt.fail(row, "is_dc", "expected true or false, got '" + row.fields[l_dc] + "'");
    }
    lines.push_back(std::move(line));
  }
  return Network(std::move(buses), std::move(lines), base_mva);
}

void write_network(const Network& network, const std::filesystem::path& buses, const std::filesystem::path& lines) {
  auto bout = open_for_write(buses);
  csv::write_row(bout, {"id", "zone", "type", "lat", "lon"});
  for (const auto& b : network.buses()) {
    csv::write_row(bout, {b.id, b.zone, std::string(type_name(b.type)),
                          b.location ? csv::exact(b.location->lat_deg) : "",
                          b.location ? csv::exact(b.location->lon_deg) : ""});
  }
  auto lout = open_for_write(lines);
  csv::write_row(lout, {"id", "from", "to", "reactance_pu", "rating_mw", "voltage_kv", "kind", "is_dc"});
  for (const auto& l : network.lines()) {
    csv::write_row(lout, {l.id, l.from_bus, l.to_bus, l.reactance ? csv::exact(*l.reactance) : "",
                          l.rating ? csv::exact(*l.rating) : "", csv::exact(l.voltage_kv),
                          l.kind == LineKind::Transformer ? "transformer" : "line", l.is_dc ? "true" : "false"});
  }
}

RegionMapping load_region_mapping(const std::filesystem::path& path) {
  const csv::Table t = csv::read(path);
  const std::size_t zone = t.column("zone"), region = t.column("region");
  RegionMapping mapping;
  for (const auto& row : t.rows) {
    if (row.fields[zone].empty()) t.fail(row, "zone", "zone required");
    if (row.fields[region].empty()) t.fail(row, "region", "region required");
    auto [it, inserted] = mapping.emplace(row.fields[zone], row.fields[region]);
    if (!inserted && it->second != row.fields[region]) t.fail(row, "zone", "zone mapped to two regions");
  }
  return mapping;
}

void write_ptdf_csv(const PtdfMatrix& ptdf, std::ostream& out, int decimals) {
  std::vector<std::string> header{"line"};
  header.insert(header.end(), ptdf.bus_order.begin(), ptdf.bus_order.end());
  csv::write_row(out, header);
  for (Eigen::Index l = 0; l < ptdf.rows(); ++l) {
    std::vector<std::string> row{ptdf.line_order[static_cast<std::size_t>(l)]};
    for (Eigen::Index b = 0; b < ptdf.cols(); ++b) row.push_back(csv::fixed(ptdf.values(l, b), decimals));
    csv::write_row(out, row);
  }
}

}  // namespace itl::io
