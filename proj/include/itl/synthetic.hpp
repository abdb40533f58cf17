#pragma once

#include <cstdint>

#include "itl/network.hpp"

namespace itl {

/// Geographic meshed test system. Buses are scattered over a continental box,
/// zoned by nearest seed and wired to their nearest neighbors. A few values
/// are left missing, one DC link and some radial spurs are added so that every
/// preparation step has work to do.
struct SyntheticGridOptions {
  std::size_t buses = 500;
  std::size_t zones = 20;
  std::size_t neighbors = 3;
  double radial_fraction = 0.04;
  double missing_reactance_fraction = 0.03;
  double missing_rating_fraction = 0.08;
  double missing_location_fraction = 0.01;
  std::uint64_t seed = 20240611;
};

Network generate_synthetic_grid(const SyntheticGridOptions& options = {});

/// Small connected network for property sweeps. No locations; every line has
/// a reactance and a rating.
struct RandomNetworkOptions {
  std::size_t max_buses = 12;
  std::size_t max_lines = 20;
  std::size_t min_zones = 2;
  std::size_t max_zones = 4;
  bool all_unconstrained = false;
  std::uint64_t seed = 1;
};

Network generate_random_network(const RandomNetworkOptions& options);

}  // namespace itl
