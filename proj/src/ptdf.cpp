#include "itl/ptdf.hpp"

#include <algorithm>

#include "itl/error.hpp"

namespace itl {

namespace {

std::string describe_components(const std::vector<std::vector<std::string>>& components) {
  std::string out;
  for (std::size_t i = 0; i < components.size(); ++i) {
    if (i) out += "; ";
    out += "{";
    const auto& c = components[i];
    for (std::size_t j = 0; j < c.size() && j < 5; ++j) out += (j ? "," : "") + c[j];
    if (c.size() > 5) out += ",... (" + std::to_string(c.size()) + " buses)";
    out += "}";
  }
  return out;
}

void require_connected(const Network& network) {
  auto components = connected_components(network);
  if (components.size() > 1)
    throw ConnectivityError("network has " + std::to_string(components.size()) +
                            " islands: " + describe_components(components));
}

}  // namespace

Incidence build_incidence(const Network& network) {
  require_connected(network);
  Incidence inc;
  for (const auto& bus : network.buses()) inc.bus_order.push_back(bus.id);

  std::vector<Eigen::Triplet<double>> triplets;
  Eigen::Index row = 0;
  for (const auto& line : network.lines()) {
    if (line.is_dc) continue;
    auto from = network.find_bus(line.from_bus);
    auto to = network.find_bus(line.to_bus);
    if (!from || !to) throw MismatchError("line '" + line.id + "' references an unknown bus");
    triplets.emplace_back(row, static_cast<Eigen::Index>(*from), 1.0);
    triplets.emplace_back(row, static_cast<Eigen::Index>(*to), -1.0);
    inc.line_order.push_back(line.id);
    ++row;
  }
  inc.matrix.resize(row, static_cast<Eigen::Index>(inc.bus_order.size()));
  inc.matrix.setFromTriplets(triplets.begin(), triplets.end());
  return inc;
}

std::string default_slack(const Network& network) {
  if (network.buses().empty()) return {};
  return std::min_element(network.buses().begin(), network.buses().end(),
                          [](const Bus& a, const Bus& b) { return a.id < b.id; })
      ->id;
}

PtdfMatrix compute_ptdf(const Network& network, std::string_view slack_bus) {
  for (const auto& line : network.lines()) {
    if (line.is_dc) continue;
    if (!line.reactance || !(*line.reactance > 0.0))
      throw ValidationError("line '" + line.id + "' needs a positive reactance for the PTDF");
  }
  Incidence inc = build_incidence(network);

  PtdfMatrix ptdf;
  ptdf.slack_bus = slack_bus.empty() ? default_slack(network) : std::string(slack_bus);
  auto slack = network.find_bus(ptdf.slack_bus);
  if (!slack) throw MismatchError("slack bus '" + ptdf.slack_bus + "' is not in the network");

  Eigen::VectorXd reactance(static_cast<Eigen::Index>(inc.line_order.size()));
  for (std::size_t i = 0; i < inc.line_order.size(); ++i)
    reactance(static_cast<Eigen::Index>(i)) = *network.line(inc.line_order[i]).reactance;

  ptdf.values = ptdf_from_incidence<double>(inc.matrix, reactance, static_cast<Eigen::Index>(*slack));
  if (!ptdf.values.allFinite())
    throw ConnectivityError("reduced susceptance matrix is singular; the network is not a single island");
  ptdf.line_order = std::move(inc.line_order);
  ptdf.bus_order = std::move(inc.bus_order);
  ptdf.index();
  return ptdf;
}

std::vector<PtdfIsland> remove_line_recompute(const Network& network, std::string_view line_id,
                                              std::string_view slack_bus, const Interface* interface) {
  Network remaining = without_lines(network, {std::string(line_id)});
  std::vector<PtdfIsland> islands;
  for (const auto& component : connected_components(remaining)) {
    PtdfIsland island;
    island.network = induced_subnetwork(remaining, component);
    const bool owns_slack = std::find(component.begin(), component.end(), slack_bus) != component.end();
    island.ptdf = compute_ptdf(island.network, owns_slack ? slack_bus : std::string_view{});
    if (interface) {
      for (const auto& c : interface->crossing_lines) {
        if (c.line_id != line_id && island.network.find_line(c.line_id)) {
          island.has_crossing_lines = true;
          break;
        }
      }
    }
    islands.push_back(std::move(island));
  }
  return islands;
}

}  // namespace itl
