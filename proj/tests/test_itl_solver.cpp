#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "fixtures.hpp"
#include "itl/itl_solver.hpp"
#include "itl/synthetic.hpp"
#include "oracle.hpp"

using namespace itl;

namespace {

const Interface& find_interface(const std::vector<Interface>& all, const std::string& id) {
  return *std::find_if(all.begin(), all.end(), [&](const Interface& i) { return i.id() == id; });
}

ItlResult solve_five_bus(const std::string& id, Direction dir, const Network& net = fixtures::five_bus()) {
  const auto interfaces = build_interfaces(net);
  return compute_itl(net, compute_ptdf(net), find_interface(interfaces, id), dir);
}

void check_result_invariants(const Network& net, const ItlResult& r) {
  REQUIRE(r.status == ResultStatus::Ok);
  CHECK(r.itl_mw >= -1e-9);
  double balance = 0.0;
  for (const auto& [line, flow] : r.flows) CHECK(std::abs(flow) <= *net.line(line).rating + 1e-6);
  for (const auto& [bus, g] : r.injections) {
    balance += g;
    switch (net.bus(bus).type) {
      case BusType::Generator: CHECK(g >= -1e-6); break;
      case BusType::Load: CHECK(g <= 1e-6); break;
      case BusType::Transmission: CHECK(std::abs(g) <= 1e-6); break;
      case BusType::Unconstrained: break;
    }
  }
  CHECK(std::abs(balance) <= 1e-6);
}

}  // namespace

TEST_CASE("five-bus LP shape") {
  const Network net = fixtures::five_bus();
  const lp::LpProblem p = build_itl_lp(compute_ptdf(net), build_interfaces(net).at(0), Direction::Forward, net);
  CHECK(p.variables().size() == 11);
  CHECK(p.constraints().size() == 7);
  CHECK(p.sense() == lp::Sense::Maximize);
  CHECK(p.objective()[static_cast<std::size_t>(p.variable_index("F[A|D]"))] == 1.0);
  CHECK(p.objective()[static_cast<std::size_t>(p.variable_index("F[C|D]"))] == 1.0);
  for (const auto& v : p.variables())
    if (v.name.starts_with("G[")) {
      CHECK(std::isinf(v.lower));
      CHECK(std::isinf(v.upper));
    }
  const lp::LpProblem rev = build_itl_lp(compute_ptdf(net), build_interfaces(net).at(0), Direction::Reverse, net);
  CHECK(rev.sense() == lp::Sense::Minimize);
}

TEST_CASE("interface outside the PTDF is a mismatch") {
  const Network net = fixtures::five_bus();
  Interface bogus{"1", "9", {{"nope", 1}}};
  CHECK_THROWS_AS(build_itl_lp(compute_ptdf(net), bogus, Direction::Forward, net), MismatchError);
}

TEST_CASE("five-bus 1||2 forward flows") {
  const ItlResult r = solve_five_bus("1||2", Direction::Forward);
  check_result_invariants(fixtures::five_bus(), r);
  CHECK(r.itl_mw == doctest::Approx(719.0).epsilon(0.5 / 719.0));
  CHECK(r.flows.at("C|D") == doctest::Approx(400.0).epsilon(1e-6));
  CHECK(r.flows.at("A|E") == doctest::Approx(400.0).epsilon(1e-6));
  CHECK(r.flows.at("D|E") == doctest::Approx(-240.0).epsilon(1e-6));
  CHECK(std::abs(r.flows.at("A|D") - 319.0) <= 0.5);
  CHECK(r.rating_sum_mw == 800.0);
  CHECK(r.binding_lines == std::vector<std::string>{"A|E", "C|D", "D|E"});
}

TEST_CASE("five-bus reverse equals forward without bus types") {
  for (const char* id : {"1||2", "1||3", "2||3"}) {
    const double f = solve_five_bus(id, Direction::Forward).itl_mw;
    const double r = solve_five_bus(id, Direction::Reverse).itl_mw;
    CHECK(std::abs(f - r) <= 1e-6 * std::max(1.0, f));
  }
}

// Each single crossing line's rating decides its interface limit.
TEST_CASE("single-line interfaces are capped by their own rating") {
  const Network net = fixtures::five_bus();
  const auto interfaces = build_interfaces(net);
  for (Direction d : {Direction::Forward, Direction::Reverse}) {
    const ItlResult r23 = solve_five_bus("2||3", d);
    const ItlResult r13 = solve_five_bus("1||3", d);
    CHECK(r23.itl_mw == doctest::Approx(240.0).epsilon(1e-9));
    CHECK(r13.itl_mw == doctest::Approx(400.0).epsilon(1e-9));
    CHECK(oracle::itl(net, find_interface(interfaces, "2||3"), d) == doctest::Approx(240.0).epsilon(1e-9));
    CHECK(oracle::itl(net, find_interface(interfaces, "1||3"), d) == doctest::Approx(400.0).epsilon(1e-9));
  }
}

TEST_CASE("slack choice does not change the limit") {
  const Network net = fixtures::five_bus();
  const auto interfaces = build_interfaces(net);
  for (const auto& iface : interfaces) {
    const double base = compute_itl(net, compute_ptdf(net, "A"), iface, Direction::Forward).itl_mw;
    for (const auto& bus : net.buses()) {
      const double other = compute_itl(net, compute_ptdf(net, bus.id), iface, Direction::Forward).itl_mw;
      CHECK(std::abs(other - base) <= 1e-6 * std::max(1.0, base));
    }
  }
}

TEST_CASE("upgrade supply curve") {
  const ItlResult r = solve_five_bus("1||2", Direction::Forward);
  const auto curve = upgrade_supply_curve(r);
  std::vector<std::string> lines;
  for (const auto& [line, dual] : curve) {
    lines.push_back(line);
    CHECK(dual > 0.0);
  }
  std::sort(lines.begin(), lines.end());
  CHECK(lines == std::vector<std::string>{"A|E", "C|D", "D|E"});
  CHECK(r.rating_duals.at("A|D") == doctest::Approx(0.0).epsilon(1e-9));
  for (std::size_t i = 1; i < curve.size(); ++i) CHECK(curve[i - 1].second >= curve[i].second);

  // Raising a binding rating by one MW raises the limit by its dual.
  for (const auto& [line, dual] : curve) {
    std::vector<Line> lines_up = fixtures::five_bus().lines();
    for (auto& l : lines_up)
      if (l.id == line) *l.rating += 1.0;
    const Network up(fixtures::five_bus().buses(), lines_up);
    const double gained = solve_five_bus("1||2", Direction::Forward, up).itl_mw - r.itl_mw;
    CHECK(gained == doctest::Approx(dual).epsilon(1e-3));
  }
}

TEST_CASE("triangle interface at full rating has unit duals") {
  Line ab;
  ab.id = "A|B";
  ab.from_bus = "A";
  ab.to_bus = "B";
  ab.reactance = 0.1;
  ab.rating = 100.0;
  Line bc = ab, ca = ab;
  bc.id = "B|C", bc.from_bus = "B", bc.to_bus = "C", bc.rating = 1000.0;
  ca.id = "C|A", ca.from_bus = "C", ca.to_bus = "A", ca.rating = 100.0;
  Network net({{"A", "z1", BusType::Unconstrained, {}}, {"B", "z2", BusType::Unconstrained, {}},
               {"C", "z2", BusType::Unconstrained, {}}},
              {ab, bc, ca});
  const Interface iface = build_interfaces(net).at(0);
  const ItlResult r = compute_itl(net, compute_ptdf(net), iface, Direction::Forward);
  CHECK(r.itl_mw == doctest::Approx(200.0));
  CHECK(r.rating_duals.at("A|B") == doctest::Approx(1.0));
  CHECK(r.rating_duals.at("C|A") == doctest::Approx(1.0));
}

TEST_CASE("transmission-only network has zero limit and no upgrades") {
  const Network net = fixtures::five_bus(BusType::Transmission);
  const ItlResult r = solve_five_bus("1||2", Direction::Forward, net);
  CHECK(r.status == ResultStatus::Ok);
  CHECK(r.itl_mw == doctest::Approx(0.0));
  CHECK(upgrade_supply_curve(r).empty());
  for (const auto& [line, flow] : r.flows) CHECK(flow == doctest::Approx(0.0));
}

TEST_CASE("bus types break direction symmetry") {
  std::vector<Bus> buses = fixtures::five_bus().buses();
  for (auto& b : buses) b.type = (b.zone == "1") ? BusType::Generator : BusType::Load;
  const Network net(buses, fixtures::five_bus().lines());
  const ItlResult fwd = solve_five_bus("1||2", Direction::Forward, net);
  const ItlResult rev = solve_five_bus("1||2", Direction::Reverse, net);
  check_result_invariants(net, fwd);
  check_result_invariants(net, rev);
  CHECK(fwd.itl_mw > 0.0);
  CHECK(rev.itl_mw == doctest::Approx(0.0));
}

TEST_CASE("all interfaces of the five-bus network") {
  StudyOptions options;
  const auto results = compute_all_itls(fixtures::five_bus(), options);
  REQUIRE(results.size() == 6);
  CHECK(results[0].interface_id == "1||2");
  CHECK(results[0].direction == Direction::Forward);
  CHECK(results[1].direction == Direction::Reverse);
  CHECK(results[5].interface_id == "2||3");

  options.threads = 4;
  const auto parallel = compute_all_itls(fixtures::five_bus(), options);
  for (std::size_t i = 0; i < results.size(); ++i) {
    CHECK(parallel[i].itl_mw == results[i].itl_mw);
    CHECK(parallel[i].flows == results[i].flows);
  }

  std::vector<Line> lines = fixtures::five_bus().lines();
  std::reverse(lines.begin(), lines.end());
  const auto permuted = compute_all_itls(Network(fixtures::five_bus().buses(), lines), StudyOptions{});
  for (std::size_t i = 0; i < results.size(); ++i)
    CHECK(permuted[i].itl_mw == doctest::Approx(results[i].itl_mw).epsilon(1e-9));
}

TEST_CASE("zones split across islands only pair where AC lines cross") {
  Line l1;
  l1.reactance = 0.1;
  l1.rating = 50.0;
  Line l2 = l1;
  l1.id = "ab", l1.from_bus = "a", l1.to_bus = "b";
  l2.id = "cd", l2.from_bus = "c", l2.to_bus = "d";
  Network net({{"a", "1", BusType::Unconstrained, {}}, {"b", "2", BusType::Unconstrained, {}},
               {"c", "3", BusType::Unconstrained, {}}, {"d", "4", BusType::Unconstrained, {}}},
              {l1, l2});
  const auto results = compute_all_itls(net, StudyOptions{});
  REQUIRE(results.size() == 4);
  CHECK(results[0].interface_id == "1||2");
  CHECK(results[2].interface_id == "3||4");
  for (const auto& r : results) CHECK(r.itl_mw == doctest::Approx(50.0));
}

TEST_CASE("interface spanning two islands is summed") {
  Line base;
  base.reactance = 0.1;
  base.rating = 50.0;
  Line l1 = base, l2 = base;
  l1.id = "ab", l1.from_bus = "a", l1.to_bus = "b";
  l2.id = "cd", l2.from_bus = "c", l2.to_bus = "d", l2.rating = 70.0;
  Network net({{"a", "1", BusType::Unconstrained, {}}, {"b", "2", BusType::Unconstrained, {}},
               {"c", "1", BusType::Unconstrained, {}}, {"d", "2", BusType::Unconstrained, {}}},
              {l1, l2});
  const auto results = compute_all_itls(net, StudyOptions{});
  REQUIRE(results.size() == 2);
  CHECK(results[0].itl_mw == doctest::Approx(120.0));
  CHECK_FALSE(results[0].notes.empty());
}

TEST_CASE("random networks agree with the oracle") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    RandomNetworkOptions options;
    options.seed = seed;
    options.max_buses = 10;
    const Network net = generate_random_network(options);
    const PtdfMatrix ptdf = compute_ptdf(net);
    for (const auto& iface : build_interfaces(net)) {
      for (Direction d : {Direction::Forward, Direction::Reverse}) {
        const ItlResult r = compute_itl(net, ptdf, iface, d);
        check_result_invariants(net, r);
        const double expected = oracle::itl(net, iface, d);
        CAPTURE(seed);
        CHECK(std::abs(r.itl_mw - expected) <= 1e-6 * std::max(1.0, expected));
        CHECK(r.itl_mw <= r.rating_sum_mw + 1e-6);
      }
    }
  }
}
