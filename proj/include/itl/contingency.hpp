#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "itl/itl_solver.hpp"

namespace itl {

/// Intact-network result paired with the result after losing the crossing
/// line that carried the most flow in that direction.
struct ContingencyResult {
  std::string interface_id;
  Direction direction = Direction::Forward;
  ItlResult n0;
  std::string removed_line;  // empty when n0 failed
  ItlResult n1;
};

/// Crossing line with the largest |flow| in `n0` (ties within 1e-6 MW go to
/// the smaller id). Empty if no crossing line has a flow.
std::string select_contingency_line(const ItlResult& n0, const Interface& interface);

/// Computes n-0 (unless supplied) and n-1 for one interface and direction.
/// A single-line interface gets a zero n-1 record without solving.
ContingencyResult compute_n1(const Network& network, const Interface& interface, Direction direction,
                             const StudyOptions& options, const ItlResult* n0 = nullptr);

/// compute_n1 for every interface and requested direction.
std::vector<ContingencyResult> compute_all_contingencies(const Network& network, const StudyOptions& options);

}  // namespace itl
