#pragma once

#include <filesystem>

#include "itl/aggregation.hpp"
#include "itl/network.hpp"
#include "itl/ptdf.hpp"

namespace itl::io {

/// buses.csv: id,zone,type,lat,lon   (type in {gen,load,trans,} ; blank = unconstrained)
/// lines.csv: id,from,to,reactance_pu,rating_mw,voltage_kv,kind,is_dc
/// Blank reactance or rating becomes a missing value for data preparation.
/// Throws ParseError naming file, row and column.
Network load_network(const std::filesystem::path& buses, const std::filesystem::path& lines, double base_mva = 100.0);

/// Writes both files so that load_network reproduces the network exactly.
void write_network(const Network& network, const std::filesystem::path& buses, const std::filesystem::path& lines);

/// regions.csv: zone,region
RegionMapping load_region_mapping(const std::filesystem::path& path);

/// PTDF as CSV: header `line,<bus ids...>`, one row per line.
void write_ptdf_csv(const PtdfMatrix& ptdf, std::ostream& out, int decimals = 6);

}  // namespace itl::io
