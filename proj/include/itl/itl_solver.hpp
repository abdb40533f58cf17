#pragma once

#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "itl/data_prep.hpp"
#include "itl/lp.hpp"
#include "itl/network.hpp"
#include "itl/ptdf.hpp"

namespace itl {

/// Forward is flow from zone_a to zone_b.
enum class Direction { Forward, Reverse };

std::string_view to_string(Direction direction);

enum class ResultStatus {
  Ok,
  NoCrossingLines,  // nothing left to carry flow; ITL is zero by definition
  Failed,
};

std::string_view to_string(ResultStatus status);

/// One interface-direction solve. Flows and injections are in MW; rating
/// duals are the marginal ITL gain per MW of extra rating on each line.
struct ItlResult {
  std::string interface_id;
  std::string zone_a;
  std::string zone_b;
  Direction direction = Direction::Forward;
  double itl_mw = 0.0;
  double rating_sum_mw = 0.0;
  std::map<std::string, double> flows;
  std::map<std::string, double> injections;
  std::vector<std::string> binding_lines;
  std::map<std::string, double> rating_duals;
  ResultStatus status = ResultStatus::Ok;
  std::string notes;

  bool usable() const { return status != ResultStatus::Failed; }
};

struct StudyOptions {
  PrepConfig prep;
  bool use_neighborhood_filter = true;
  lp::SolverOptions solver;
  std::vector<Direction> directions{Direction::Forward, Direction::Reverse};
  /// Preferred slack; islands that do not contain it use their first bus.
  std::string slack_bus;
  unsigned threads = 1;
  double binding_rel_tol = 1e-4;
};

/// Variables F(l) in [-r, r] and G(b) bounded by bus type; rows
/// F(l) - sum_b p(l,b) G(b) = 0 per line plus sum_b G(b) = 0. The objective
/// is the oriented sum of crossing-line flows, maximized for Forward and
/// minimized for Reverse. Throws MismatchError when a crossing line is not
/// covered by the PTDF.
lp::LpProblem build_itl_lp(const PtdfMatrix& ptdf, const Interface& interface, Direction direction,
                           const Network& network);

/// Solves one island. Never throws for solver trouble; the status says so.
ItlResult compute_itl(const Network& network, const PtdfMatrix& ptdf, const Interface& interface,
                      Direction direction, const lp::SolverOptions& solver = {}, double binding_rel_tol = 1e-4);

/// Islands that take part in an interface study: every component holding a
/// crossing line, cut down by the neighborhood filter when enabled.
std::vector<Network> study_islands(const Network& network, const Interface& interface, const StudyOptions& options);

/// Crossing lines of `interface` that exist in `network`.
Interface restrict_interface(const Interface& interface, const Network& network);

/// Solves an interface on every island it touches and sums the islands.
ItlResult solve_interface(const Network& network, const Interface& interface, Direction direction,
                          const StudyOptions& options);

/// Sum of island results for the same interface and direction.
ItlResult merge_island_results(std::vector<ItlResult> parts);

/// Every interface of the network in every requested direction, ordered by
/// interface then direction. Errors are recorded per result.
std::vector<ItlResult> compute_all_itls(const Network& network, const StudyOptions& options);

/// Lines with a positive rating dual, largest first (ties by line id).
std::vector<std::pair<std::string, double>> upgrade_supply_curve(const ItlResult& result);

/// Runs `fn(i)` for i in [0, count) on up to `threads` workers.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn);

}  // namespace itl
