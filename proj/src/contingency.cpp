#include "itl/contingency.hpp"

#include <cmath>
#include <exception>

namespace itl {

std::string select_contingency_line(const ItlResult& n0, const Interface& interface) {
  std::string best;
  double best_flow = -1.0;
  for (const auto& c : interface.crossing_lines) {
    auto it = n0.flows.find(c.line_id);
    if (it == n0.flows.end()) continue;
    const double magnitude = std::abs(it->second);
    // Crossing lines are sorted by id, so a tie keeps the earlier one.
    if (magnitude > best_flow + 1e-6) {
      best = c.line_id;
      best_flow = magnitude;
    }
  }
  return best;
}

namespace {

ItlResult zero_record(const ItlResult& n0, std::string notes) {
  ItlResult r;
  r.interface_id = n0.interface_id;
  r.zone_a = n0.zone_a;
  r.zone_b = n0.zone_b;
  r.direction = n0.direction;
  r.status = ResultStatus::NoCrossingLines;
  r.notes = std::move(notes);
  return r;
}

Interface without_crossing_line(const Interface& interface, const std::string& line_id) {
  Interface out{interface.zone_a, interface.zone_b, {}};
  for (const auto& c : interface.crossing_lines) {
    if (c.line_id != line_id) out.crossing_lines.push_back(c);
  }
  return out;
}

ItlResult solve_after_outage(const Network& network, const Interface& interface, const Interface& remaining,
                             const std::string& removed, Direction direction, const StudyOptions& options) {
  std::vector<ItlResult> parts;
  for (const Network& island : study_islands(network, interface, options)) {
    const bool owns_slack = !options.slack_bus.empty() && island.find_bus(options.slack_bus).has_value();
    const std::string_view slack = owns_slack ? std::string_view(options.slack_bus) : std::string_view{};
    if (island.find_line(removed)) {
      for (const PtdfIsland& piece : remove_line_recompute(island, removed, slack, &remaining)) {
        if (!piece.has_crossing_lines) continue;
        parts.push_back(compute_itl(piece.network, piece.ptdf, restrict_interface(remaining, piece.network),
                                    direction, options.solver, options.binding_rel_tol));
      }
    } else {
      const Interface local = restrict_interface(remaining, island);
      if (local.crossing_lines.empty()) continue;
      parts.push_back(compute_itl(island, compute_ptdf(island, slack), local, direction, options.solver,
                                  options.binding_rel_tol));
    }
  }
  if (parts.empty()) return {};
  return merge_island_results(std::move(parts));
}

}  // namespace

ContingencyResult compute_n1(const Network& network, const Interface& interface, Direction direction,
                             const StudyOptions& options, const ItlResult* n0) {
  ContingencyResult cr;
  cr.interface_id = interface.id();
  cr.direction = direction;
  cr.n0 = n0 ? *n0 : solve_interface(network, interface, direction, options);

  if (!cr.n0.usable()) {
    cr.n1 = zero_record(cr.n0, "n-0 solve failed");
    cr.n1.status = ResultStatus::Failed;
    return cr;
  }
  const Interface present = restrict_interface(interface, network);
  if (present.crossing_lines.empty()) {
    cr.n1 = zero_record(cr.n0, "no crossing lines");
    return cr;
  }
  if (present.crossing_lines.size() == 1) {
    cr.removed_line = present.crossing_lines.front().line_id;
    cr.n1 = zero_record(cr.n0, "only crossing line removed");
    return cr;
  }

  cr.removed_line = select_contingency_line(cr.n0, present);
  const Interface remaining = without_crossing_line(present, cr.removed_line);
  try {
    ItlResult n1 = solve_after_outage(network, present, remaining, cr.removed_line, direction, options);
    if (n1.interface_id.empty()) {
      cr.n1 = zero_record(cr.n0, "remaining crossing lines fall outside the study area");
    } else {
      cr.n1 = std::move(n1);
    }
  } catch (const std::exception& e) {
    cr.n1 = zero_record(cr.n0, e.what());
    cr.n1.status = ResultStatus::Failed;
  }
  cr.n1.interface_id = cr.n0.interface_id;
  cr.n1.rating_sum_mw = rating_sum(network, remaining);
  return cr;
}

std::vector<ContingencyResult> compute_all_contingencies(const Network& network, const StudyOptions& options) {
  const std::vector<Interface> interfaces = build_interfaces(network);
  const std::size_t per = options.directions.size();
  std::vector<ContingencyResult> results(interfaces.size() * per);
  parallel_for(results.size(), options.threads, [&](std::size_t k) {
    results[k] = compute_n1(network, interfaces[k / per], options.directions[k % per], options);
  });
  return results;
}

}  // namespace itl
