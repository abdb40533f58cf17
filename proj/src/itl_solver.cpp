#include "itl/itl_solver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <set>
#include <thread>
#include <unordered_set>

#include "itl/error.hpp"

namespace itl {

std::string_view to_string(Direction direction) {
  return direction == Direction::Forward ? "forward" : "reverse";
}

std::string_view to_string(ResultStatus status) {
  switch (status) {
    case ResultStatus::Ok: return "ok";
    case ResultStatus::NoCrossingLines: return "no-crossing-lines";
    case ResultStatus::Failed: return "failed";
  }
  return "unknown";
}

namespace {

std::string flow_var(std::string_view line) { return "F[" + std::string(line) + "]"; }
std::string injection_var(std::string_view bus) { return "G[" + std::string(bus) + "]"; }

double clean_zero(double v) { return v == 0.0 ? 0.0 : v; }

ItlResult blank_result(const Interface& interface, Direction direction, const Network& network) {
  ItlResult r;
  r.interface_id = interface.id();
  r.zone_a = interface.zone_a;
  r.zone_b = interface.zone_b;
  r.direction = direction;
  r.rating_sum_mw = rating_sum(network, interface);
  return r;
}

}  // namespace

lp::LpProblem build_itl_lp(const PtdfMatrix& ptdf, const Interface& interface, Direction direction,
                           const Network& network) {
  for (const auto& c : interface.crossing_lines) {
    if (ptdf.line_position(c.line_id) < 0)
      throw MismatchError("crossing line '" + c.line_id + "' of " + interface.id() + " is not in the PTDF");
  }

  lp::LpProblem problem;
  problem.set_sense(direction == Direction::Forward ? lp::Sense::Maximize : lp::Sense::Minimize);

  std::vector<int> flow_vars;
  flow_vars.reserve(ptdf.line_order.size());
  for (const auto& id : ptdf.line_order) {
    const Line& line = network.line(id);
    if (!line.rating || !(*line.rating > 0.0))
      throw ValidationError("line '" + id + "' needs a positive rating for the ITL problem");
    flow_vars.push_back(problem.add_variable(flow_var(id), -*line.rating, *line.rating));
  }

  std::vector<int> injection_vars;
  injection_vars.reserve(ptdf.bus_order.size());
  for (const auto& id : ptdf.bus_order) {
    double lower = -lp::kInf;
    double upper = lp::kInf;
    switch (network.bus(id).type) {
      case BusType::Generator: lower = 0.0; break;
      case BusType::Load: upper = 0.0; break;
      case BusType::Transmission: lower = upper = 0.0; break;
      case BusType::Unconstrained: break;
    }
    injection_vars.push_back(problem.add_variable(injection_var(id), lower, upper));
  }

  for (Eigen::Index l = 0; l < ptdf.rows(); ++l) {
    std::vector<lp::Term> row{{flow_vars[static_cast<std::size_t>(l)], 1.0}};
    for (Eigen::Index b = 0; b < ptdf.cols(); ++b) {
      const double p = ptdf.values(l, b);
      if (p != 0.0) row.push_back({injection_vars[static_cast<std::size_t>(b)], -p});
    }
    problem.add_equality("flow[" + ptdf.line_order[static_cast<std::size_t>(l)] + "]", std::move(row), 0.0);
  }

  // Without this row the slack would absorb any imbalance and escape its own
  // bus-type bound, making the ITL depend on the slack choice.
  std::vector<lp::Term> balance;
  for (int v : injection_vars) balance.push_back({v, 1.0});
  problem.add_equality("balance", std::move(balance), 0.0);

  for (const auto& c : interface.crossing_lines) {
    problem.set_objective(flow_vars[static_cast<std::size_t>(ptdf.line_position(c.line_id))],
                          static_cast<double>(c.orientation));
  }
  return problem;
}

ItlResult compute_itl(const Network& network, const PtdfMatrix& ptdf, const Interface& interface,
                      Direction direction, const lp::SolverOptions& solver, double binding_rel_tol) {
  ItlResult result = blank_result(interface, direction, network);
  const lp::LpProblem problem = build_itl_lp(ptdf, interface, direction, network);
  const lp::LpSolution sol = lp::solve(problem, solver);

  if (sol.status != lp::Status::Optimal) {
    result.status = ResultStatus::Failed;
    if (sol.status == lp::Status::SolverFailure) {
      result.notes = "solver failure: " + sol.message;
    } else {
      // Zero flow with zero injection is always feasible and the objective is
      // capped by the ratings, so anything else is an internal fault.
      result.notes = "internal error: LP reported " + std::string(lp::to_string(sol.status));
    }
    return result;
  }

  result.itl_mw = clean_zero(direction == Direction::Forward ? sol.objective_value : -sol.objective_value);
  for (std::size_t l = 0; l < ptdf.line_order.size(); ++l) {
    const std::string& id = ptdf.line_order[l];
    const int var = static_cast<int>(l);
    const double flow = clean_zero(sol.values[static_cast<std::size_t>(var)]);
    const double rating = *network.line(id).rating;
    result.flows[id] = flow;
    result.rating_duals[id] = clean_zero(std::abs(sol.bound_dual(var)));
    if (std::abs(flow) >= rating - binding_rel_tol * std::max(1.0, rating)) result.binding_lines.push_back(id);
  }
  const std::size_t offset = ptdf.line_order.size();
  for (std::size_t b = 0; b < ptdf.bus_order.size(); ++b)
    result.injections[ptdf.bus_order[b]] = clean_zero(sol.values[offset + b]);
  std::sort(result.binding_lines.begin(), result.binding_lines.end());
  return result;
}

Interface restrict_interface(const Interface& interface, const Network& network) {
  Interface out{interface.zone_a, interface.zone_b, {}};
  for (const auto& c : interface.crossing_lines) {
    if (network.find_line(c.line_id)) out.crossing_lines.push_back(c);
  }
  return out;
}

std::vector<Network> study_islands(const Network& network, const Interface& interface, const StudyOptions& options) {
  std::unordered_set<std::string> crossing_buses;
  for (const auto& c : interface.crossing_lines) {
    if (auto idx = network.find_line(c.line_id)) crossing_buses.insert(network.lines()[*idx].from_bus);
  }
  auto holds_crossing = [&](const std::vector<std::string>& component) {
    return std::any_of(component.begin(), component.end(),
                       [&](const std::string& id) { return crossing_buses.contains(id); });
  };

  std::vector<Network> islands;
  for (const auto& component : connected_components(network)) {
    if (!holds_crossing(component)) continue;
    Network island = induced_subnetwork(network, component);
    if (!options.use_neighborhood_filter || component.size() <= options.prep.large_component_threshold) {
      islands.push_back(std::move(island));
      continue;
    }
    Network near = neighborhood_filter(island, interface, options.prep);
    for (const auto& piece : connected_components(near)) {
      if (holds_crossing(piece)) islands.push_back(induced_subnetwork(near, piece));
    }
  }
  return islands;
}

ItlResult merge_island_results(std::vector<ItlResult> parts) {
  ItlResult merged = std::move(parts.front());
  std::vector<std::string> notes;
  if (!merged.notes.empty()) notes.push_back(merged.notes);
  for (std::size_t i = 1; i < parts.size(); ++i) {
    ItlResult& p = parts[i];
    merged.itl_mw += p.itl_mw;
    merged.flows.merge(p.flows);
    merged.injections.merge(p.injections);
    merged.rating_duals.merge(p.rating_duals);
    merged.binding_lines.insert(merged.binding_lines.end(), p.binding_lines.begin(), p.binding_lines.end());
    if (p.status == ResultStatus::Failed) merged.status = ResultStatus::Failed;
    if (!p.notes.empty()) notes.push_back(p.notes);
  }
  std::sort(merged.binding_lines.begin(), merged.binding_lines.end());
  if (parts.size() > 1) notes.push_back("summed over " + std::to_string(parts.size()) + " asynchronous islands");
  merged.notes.clear();
  for (std::size_t i = 0; i < notes.size(); ++i) merged.notes += (i ? "; " : "") + notes[i];
  return merged;
}

ItlResult solve_interface(const Network& network, const Interface& interface, Direction direction,
                          const StudyOptions& options) {
  ItlResult empty = blank_result(interface, direction, network);
  const Interface present = restrict_interface(interface, network);
  if (present.crossing_lines.empty()) {
    empty.status = ResultStatus::NoCrossingLines;
    empty.notes = "no crossing lines remain";
    return empty;
  }
  try {
    std::vector<ItlResult> parts;
    for (const Network& island : study_islands(network, present, options)) {
      const Interface local = restrict_interface(present, island);
      const bool owns_slack = !options.slack_bus.empty() && island.find_bus(options.slack_bus).has_value();
      const PtdfMatrix ptdf = compute_ptdf(island, owns_slack ? std::string_view(options.slack_bus) : std::string_view{});
      parts.push_back(compute_itl(island, ptdf, local, direction, options.solver, options.binding_rel_tol));
    }
    ItlResult merged = merge_island_results(std::move(parts));
    merged.rating_sum_mw = empty.rating_sum_mw;
    return merged;
  } catch (const std::exception& e) {
    empty.status = ResultStatus::Failed;
    empty.notes = e.what();
    return empty;
  }
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn) {
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = next++; i < count; i = next++) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::vector<ItlResult> compute_all_itls(const Network& network, const StudyOptions& options) {
  const std::vector<Interface> interfaces = build_interfaces(network);
  const std::size_t per = options.directions.size();
  std::vector<ItlResult> results(interfaces.size() * per);
  parallel_for(results.size(), options.threads, [&](std::size_t k) {
    results[k] = solve_interface(network, interfaces[k / per], options.directions[k % per], options);
  });
  return results;
}

std::vector<std::pair<std::string, double>> upgrade_supply_curve(const ItlResult& result) {
  std::vector<std::pair<std::string, double>> curve;
  if (result.status != ResultStatus::Ok) return curve;
  for (const auto& [line, dual] : result.rating_duals) {
    if (dual > 1e-9) curve.emplace_back(line, dual);
  }
  std::stable_sort(curve.begin(), curve.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return curve;
}

}  // namespace itl
