#include "itl/lp.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "itl/simplex.hpp"

namespace itl::lp {

std::string_view to_string(Status status) {
  switch (status) {
    case Status::Optimal: return "optimal";
    case Status::Infeasible: return "infeasible";
    case Status::Unbounded: return "unbounded";
    case Status::SolverFailure: return "solver-failure";
  }
  return "unknown";
}

int LpProblem::add_variable(std::string name, double lower, double upper) {
  if (std::isnan(lower) || std::isnan(upper) || lower > upper)
    throw std::invalid_argument("variable '" + name + "' has invalid bounds");
  if (variable_index_.contains(name)) throw std::invalid_argument("duplicate variable '" + name + "'");
  const int idx = static_cast<int>(variables_.size());
  variable_index_.emplace(name, idx);
  variables_.push_back({std::move(name), lower, upper});
  objective_.push_back(0.0);
  return idx;
}

int LpProblem::add_equality(std::string name, std::vector<Term> terms, double rhs) {
  if (constraint_index_.contains(name)) throw std::invalid_argument("duplicate constraint '" + name + "'");
  const int idx = static_cast<int>(constraints_.size());
  constraint_index_.emplace(name, idx);
  constraints_.push_back({std::move(name), std::move(terms), rhs});
  return idx;
}

void LpProblem::set_objective(int var, double coef) {
  if (var < 0 || var >= static_cast<int>(variables_.size()))
    throw std::invalid_argument("objective references unknown variable");
  objective_[static_cast<std::size_t>(var)] = coef;
}

int LpProblem::variable_index(std::string_view name) const {
  auto it = variable_index_.find(std::string(name));
  return it == variable_index_.end() ? -1 : it->second;
}

int LpProblem::constraint_index(std::string_view name) const {
  auto it = constraint_index_.find(std::string(name));
  return it == constraint_index_.end() ? -1 : it->second;
}

void LpProblem::validate() const {
  const int n = static_cast<int>(variables_.size());
  for (const auto& c : constraints_) {
    if (!std::isfinite(c.rhs)) throw std::invalid_argument("constraint '" + c.name + "' has a non-finite rhs");
    for (const auto& t : c.terms) {
      if (t.var < 0 || t.var >= n) throw std::invalid_argument("constraint '" + c.name + "' references unknown variable");
      if (!std::isfinite(t.coef)) throw std::invalid_argument("constraint '" + c.name + "' has a non-finite coefficient");
    }
  }
  for (double c : objective_) {
    if (!std::isfinite(c)) throw std::invalid_argument("objective has a non-finite coefficient");
  }
}

double LpSolution::value(const LpProblem& problem, std::string_view name) const {
  const int idx = problem.variable_index(name);
  if (idx < 0) throw std::invalid_argument("unknown variable '" + std::string(name) + "'");
  return values.at(static_cast<std::size_t>(idx));
}

double LpSolution::dual_objective(const LpProblem& problem) const {
  double total = 0.0;
  for (std::size_t i = 0; i < row_duals.size(); ++i) total += problem.constraints()[i].rhs * row_duals[i];
  const bool maximize = problem.sense() == Sense::Maximize;
  for (std::size_t j = 0; j < reduced_costs.size(); ++j) {
    const double d = reduced_costs[j];
    if (d == 0.0) continue;
    const auto& v = problem.variables()[j];
    // For a maximization, a positive marginal value belongs to the upper bound.
    const bool upper = maximize ? d > 0.0 : d < 0.0;
    total += d * (upper ? v.upper : v.lower);
  }
  return total;
}

LpSolution solve(const LpProblem& problem, const SolverOptions& options) {
  problem.validate();
  using Matrix = Eigen::MatrixXd;
  using Vector = Eigen::VectorXd;
  const auto m = static_cast<Eigen::Index>(problem.constraints().size());
  const auto n = static_cast<Eigen::Index>(problem.variables().size());
  const double sign = problem.sense() == Sense::Maximize ? -1.0 : 1.0;

  Matrix a = Matrix::Zero(m, n);
  Vector b(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& c = problem.constraints()[static_cast<std::size_t>(i)];
    for (const auto& t : c.terms) a(i, t.var) += t.coef;
    b(i) = c.rhs;
  }
  Vector cost(n), lower(n), upper(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto& v = problem.variables()[static_cast<std::size_t>(j)];
    cost(j) = sign * problem.objective()[static_cast<std::size_t>(j)];
    lower(j) = v.lower;
    upper(j) = v.upper;
  }

  SimplexOptions<double> simplex_options;
  simplex_options.feasibility_tol = options.feasibility_tol;
  simplex_options.optimality_tol = options.optimality_tol;
  simplex_options.pivot_tol = options.pivot_tol;
  simplex_options.refactor_interval = options.refactor_interval;
  simplex_options.max_iterations = options.max_iterations;

  BoundedSimplex<double> simplex(a, b, cost, lower, upper, simplex_options);
  const SimplexResult<double> r = simplex.run();

  LpSolution sol;
  sol.iterations = r.iterations;
  sol.values.assign(r.x.data(), r.x.data() + r.x.size());
  switch (r.status) {
    case SimplexStatus::Optimal: sol.status = Status::Optimal; break;
    case SimplexStatus::Infeasible: sol.status = Status::Infeasible; return sol;
    case SimplexStatus::Unbounded: sol.status = Status::Unbounded; return sol;
    case SimplexStatus::IterationLimit:
      sol.status = Status::SolverFailure;
      sol.message = "iteration limit reached";
      return sol;
    case SimplexStatus::Singular:
      sol.status = Status::SolverFailure;
      sol.message = "basis matrix became singular";
      return sol;
  }

  // Certify primal feasibility before reporting optimality.
  const Vector residual = a * r.x - b;
  double worst = residual.size() ? residual.cwiseAbs().maxCoeff() : 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    worst = std::max({worst, lower(j) - r.x(j), r.x(j) - upper(j)});
  }
  if (worst > options.certify_tol) {
    sol.status = Status::SolverFailure;
    sol.message = "primal residual " + std::to_string(worst) + " exceeds tolerance";
    return sol;
  }

  sol.objective_value = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) sol.objective_value += problem.objective()[static_cast<std::size_t>(j)] * r.x(j);
  sol.row_duals.resize(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) sol.row_duals[static_cast<std::size_t>(i)] = sign * r.row_duals(i);
  sol.reduced_costs.resize(static_cast<std::size_t>(n));
  for (Eigen::Index j = 0; j < n; ++j) sol.reduced_costs[static_cast<std::size_t>(j)] = sign * r.reduced_costs(j);
  return sol;
}

namespace {

std::string mps_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// Fixed MPS fields: 2-3, 5-12, 15-22, 25-36, 40-47, 50-61.
void mps_line(std::ostream& out, std::string_view code, std::string_view name1, std::string_view name2,
              const std::string& value) {
  char buf[96];
  std::snprintf(buf, sizeof buf, " %-2.2s %-8.8s  %-8.8s  %12s", std::string(code).c_str(),
                std::string(name1).c_str(), std::string(name2).c_str(), value.c_str());
  std::string line(buf);
  while (!line.empty() && line.back() == ' ') line.pop_back();
  out << line << '\n';
}

}  // namespace

void write_mps(const LpProblem& problem, std::ostream& out, std::string_view name) {
  // Fixed format limits names to 8 characters, so rows and columns are
  // written as R<index>/C<index> with the original names in comments.
  auto col = [](std::size_t j) { return "C" + std::to_string(j); };
  auto row = [](std::size_t i) { return "R" + std::to_string(i); };

  out << "NAME          " << name << '\n';
  for (std::size_t j = 0; j < problem.variables().size(); ++j) out << "* " << col(j) << " = " << problem.variables()[j].name << '\n';
  for (std::size_t i = 0; i < problem.constraints().size(); ++i) out << "* " << row(i) << " = " << problem.constraints()[i].name << '\n';
  out << "OBJSENSE\n    " << (problem.sense() == Sense::Maximize ? "MAX" : "MIN") << '\n';
  out << "ROWS\n N  OBJ\n";
  for (std::size_t i = 0; i < problem.constraints().size(); ++i) out << " E  " << row(i) << '\n';

  std::vector<std::vector<std::pair<std::size_t, double>>> by_column(problem.variables().size());
  for (std::size_t i = 0; i < problem.constraints().size(); ++i) {
    for (const auto& t : problem.constraints()[i].terms) by_column[static_cast<std::size_t>(t.var)].push_back({i, t.coef});
  }
  out << "COLUMNS\n";
  for (std::size_t j = 0; j < problem.variables().size(); ++j) {
    const double c = problem.objective()[j];
    if (c != 0.0) mps_line(out, "", col(j), "OBJ", mps_number(c));
    for (auto [i, v] : by_column[j]) {
      if (v != 0.0) mps_line(out, "", col(j), row(i), mps_number(v));
    }
  }
  out << "RHS\n";
  for (std::size_t i = 0; i < problem.constraints().size(); ++i) {
    if (problem.constraints()[i].rhs != 0.0) mps_line(out, "", "RHS", row(i), mps_number(problem.constraints()[i].rhs));
  }
  out << "BOUNDS\n";
  for (std::size_t j = 0; j < problem.variables().size(); ++j) {
    const auto& v = problem.variables()[j];
    const bool lo_inf = std::isinf(v.lower);
    const bool up_inf = std::isinf(v.upper);
    if (lo_inf && up_inf) {
      mps_line(out, "FR", "BND", col(j), "");
    } else if (v.lower == v.upper) {
      mps_line(out, "FX", "BND", col(j), mps_number(v.lower));
    } else {
      if (lo_inf) {
        mps_line(out, "MI", "BND", col(j), "");
      } else if (v.lower != 0.0) {
        mps_line(out, "LO", "BND", col(j), mps_number(v.lower));
      }
      if (!up_inf) mps_line(out, "UP", "BND", col(j), mps_number(v.upper));
    }
  }
  out << "ENDATA\n";
}

}  // namespace itl::lp
