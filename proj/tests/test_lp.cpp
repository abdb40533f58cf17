#include "doctest.h"

#include <cmath>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "itl/itl_solver.hpp"
#include "itl/lp.hpp"

using namespace itl;
using namespace itl::lp;

namespace {

void check_certificate(const LpProblem& p, const LpSolution& s) {
  REQUIRE(s.status == Status::Optimal);
  const double scale = 1.0 + std::abs(s.objective_value);
  CHECK(std::abs(s.objective_value - s.dual_objective(p)) <= 1e-6 * scale);
  for (std::size_t j = 0; j < p.variables().size(); ++j) {
    CHECK(s.values[j] >= p.variables()[j].lower - 1e-6);
    CHECK(s.values[j] <= p.variables()[j].upper + 1e-6);
  }
  for (const auto& row : p.constraints()) {
    double lhs = 0.0;
    for (const auto& t : row.terms) lhs += t.coef * s.values[static_cast<std::size_t>(t.var)];
    CHECK(std::abs(lhs - row.rhs) <= 1e-6);
  }
}

// A random bounded LP: maximize c'x, A x = b with b chosen from a feasible point.
LpProblem random_lp(std::mt19937_64& rng, int n, int m) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  LpProblem p;
  std::vector<double> x0(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const double lo = -5.0 + u(rng);
    const double hi = 5.0 + u(rng);
    p.add_variable("x" + std::to_string(j), lo, hi);
    x0[static_cast<std::size_t>(j)] = 0.5 * (lo + hi) + u(rng);
    p.set_objective(j, u(rng));
  }
  for (int i = 0; i < m; ++i) {
    std::vector<Term> terms;
    double rhs = 0.0;
    for (int j = 0; j < n; ++j) {
      if (u(rng) > 0.3) continue;
      const double c = u(rng);
      terms.push_back({j, c});
      rhs += c * x0[static_cast<std::size_t>(j)];
    }
    p.add_equality("r" + std::to_string(i), terms, rhs);
  }
  return p;
}

}  // namespace

TEST_CASE("one-variable maximum sits on its bound") {
  LpProblem p;
  const int x = p.add_variable("x", 0.0, 3.0);
  p.set_objective(x, 1.0);
  const LpSolution s = solve(p);
  REQUIRE(s.status == Status::Optimal);
  CHECK(s.objective_value == doctest::Approx(3.0));
  CHECK(s.value(p, "x") == doctest::Approx(3.0));
  CHECK(s.bound_dual(x) == doctest::Approx(1.0));
  check_certificate(p, s);
}

TEST_CASE("unbounded and infeasible verdicts") {
  LpProblem unbounded;
  unbounded.set_objective(unbounded.add_variable("x", 0.0, kInf), 1.0);
  CHECK(solve(unbounded).status == Status::Unbounded);

  LpProblem infeasible;
  const int x = infeasible.add_variable("x", 0.0, 1.0);
  const int y = infeasible.add_variable("y", 0.0, 1.0);
  infeasible.add_equality("sum", {{x, 1.0}, {y, 1.0}}, 5.0);
  CHECK(solve(infeasible).status == Status::Infeasible);
}

TEST_CASE("malformed problems are rejected") {
  LpProblem p;
  CHECK_THROWS_AS(p.add_variable("x", 2.0, 1.0), std::invalid_argument);
  p.add_variable("x", 0.0, 1.0);
  CHECK_THROWS_AS(p.add_variable("x", 0.0, 1.0), std::invalid_argument);
  p.add_equality("bad", {{7, 1.0}}, 0.0);
  CHECK_THROWS_AS(solve(p), std::invalid_argument);
}

TEST_CASE("minimize with row duals") {
  // minimize x + 2y, x + y = 4, 0 <= x <= 3, y >= 0 -> x = 3, y = 1.
  LpProblem p;
  p.set_sense(Sense::Minimize);
  const int x = p.add_variable("x", 0.0, 3.0);
  const int y = p.add_variable("y", 0.0, kInf);
  p.set_objective(x, 1.0);
  p.set_objective(y, 2.0);
  p.add_equality("sum", {{x, 1.0}, {y, 1.0}}, 4.0);
  const LpSolution s = solve(p);
  REQUIRE(s.status == Status::Optimal);
  CHECK(s.objective_value == doctest::Approx(5.0));
  CHECK(s.row_duals[0] == doctest::Approx(2.0));
  CHECK(s.bound_dual(x) == doctest::Approx(-1.0));
  check_certificate(p, s);
}

TEST_CASE("strong duality on random problems") {
  std::mt19937_64 rng(11);
  int optimal = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const LpProblem p = random_lp(rng, 4 + trial % 12, 1 + trial % 7);
    const LpSolution s = solve(p);
    CHECK(s.status == Status::Optimal);
    if (s.status == Status::Optimal) {
      check_certificate(p, s);
      ++optimal;
    }
  }
  CHECK(optimal == 200);
}

TEST_CASE("objective scaling scales the optimum") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    LpProblem p = random_lp(rng, 8, 4);
    const LpSolution a = solve(p);
    REQUIRE(a.status == Status::Optimal);
    const double alpha = 0.5 + trial;
    for (std::size_t j = 0; j < p.variables().size(); ++j)
      p.set_objective(static_cast<int>(j), alpha * p.objective()[j]);
    const LpSolution b = solve(p);
    REQUIRE(b.status == Status::Optimal);
    CHECK(b.objective_value == doctest::Approx(alpha * a.objective_value).epsilon(1e-9));
    // The first optimum is still optimal under the scaled objective.
    double value = 0.0;
    for (std::size_t j = 0; j < p.variables().size(); ++j) value += p.objective()[j] * a.values[j];
    CHECK(value == doctest::Approx(b.objective_value).epsilon(1e-9));
  }
}

TEST_CASE("solves are deterministic") {
  std::mt19937_64 rng(9);
  const LpProblem p = random_lp(rng, 14, 6);
  const LpSolution a = solve(p);
  const LpSolution b = solve(p);
  CHECK(a.values == b.values);
  CHECK(a.row_duals == b.row_duals);
  CHECK(a.iterations == b.iterations);
}

TEST_CASE("five-bus interface problem reaches the known optimum") {
  const Network net = fixtures::five_bus();
  const PtdfMatrix ptdf = compute_ptdf(net);
  const LpProblem p = build_itl_lp(ptdf, build_interfaces(net).at(0), Direction::Forward, net);
  const LpSolution s = solve(p);
  REQUIRE(s.status == Status::Optimal);
  CHECK(s.objective_value == doctest::Approx(718.684).epsilon(1e-5));
  check_certificate(p, s);
}

TEST_CASE("MPS dump lists every section") {
  LpProblem p;
  p.set_sense(Sense::Minimize);
  const int x = p.add_variable("x", -kInf, kInf);
  const int y = p.add_variable("y", 0.0, 2.0);
  const int z = p.add_variable("z", 1.0, 1.0);
  p.set_objective(x, 1.0);
  p.add_equality("row", {{x, 1.0}, {y, -1.0}, {z, 1.0}}, 0.5);
  std::ostringstream out;
  write_mps(p, out);
  const std::string text = out.str();
  for (const char* section : {"NAME", "OBJSENSE", "ROWS", "COLUMNS", "RHS", "BOUNDS", "ENDATA"})
    CHECK(text.find(section) != std::string::npos);
  CHECK(text.find(" FR ") != std::string::npos);
  CHECK(text.find(" FX ") != std::string::npos);
  CHECK(text.find(" UP ") != std::string::npos);
}
