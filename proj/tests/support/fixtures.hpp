#pragma once

#include <filesystem>
#include <string>

#include "itl/network.hpp"

namespace fixtures {

/// The five-bus, three-zone example system. Bus types are left open.
inline itl::Network five_bus(itl::BusType type = itl::BusType::Unconstrained) {
  using itl::Bus;
  using itl::Line;
  std::vector<Bus> buses{{"A", "1", type, {}}, {"B", "1", type, {}}, {"C", "1", type, {}},
                         {"D", "2", type, {}}, {"E", "3", type, {}}};
  auto line = [](std::string id, std::string from, std::string to, double x, double r) {
    Line l;
    l.id = std::move(id);
    l.from_bus = std::move(from);
    l.to_bus = std::move(to);
    l.reactance = x;
    l.rating = r;
    l.voltage_kv = 230.0;
    return l;
  };
  std::vector<Line> lines{line("A|B", "A", "B", 0.0281, 400), line("B|C", "B", "C", 0.0108, 400),
                          line("C|D", "C", "D", 0.0297, 400), line("D|E", "D", "E", 0.0297, 240),
                          line("A|E", "A", "E", 0.0064, 400), line("A|D", "A", "D", 0.0304, 400)};
  return itl::Network(std::move(buses), std::move(lines));
}

inline std::filesystem::path data_dir() { return ITL_DATA_DIR; }

/// Fresh scratch directory under the build tree.
inline std::filesystem::path scratch(const std::string& name) {
  std::filesystem::path dir = std::filesystem::path(ITL_SCRATCH_DIR) / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace fixtures
