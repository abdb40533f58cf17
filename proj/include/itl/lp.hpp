#pragma once

#include <iosfwd>
#include <limits>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace itl::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense { Maximize, Minimize };

enum class Status { Optimal, Infeasible, Unbounded, SolverFailure };

std::string_view to_string(Status status);

struct Term {
  int var = 0;
  double coef = 0.0;
};

struct Variable {
  std::string name;
  double lower = 0.0;
  double upper = kInf;
};

struct Constraint {
  std::string name;
  std::vector<Term> terms;
  double rhs = 0.0;
};

/// Linear program in equality form with variable bounds:
///   optimize c'x  subject to  A x = b,  lower <= x <= upper.
class LpProblem {
 public:
  /// Throws std::invalid_argument on duplicate names or lower > upper.
  int add_variable(std::string name, double lower, double upper);
  int add_equality(std::string name, std::vector<Term> terms, double rhs);

  void set_sense(Sense sense) { sense_ = sense; }
  /// Overwrites the objective coefficient of `var`.
  void set_objective(int var, double coef);

  Sense sense() const { return sense_; }
  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  const std::vector<double>& objective() const { return objective_; }

  /// -1 when absent.
  int variable_index(std::string_view name) const;
  int constraint_index(std::string_view name) const;

  /// Throws std::invalid_argument if a term references a missing variable or
  /// a bound or coefficient is not a number.
  void validate() const;

 private:
  Sense sense_ = Sense::Maximize;
  std::vector<Variable> variables_;
  std::vector<Constraint> constraints_;
  std::vector<double> objective_;
  std::unordered_map<std::string, int> variable_index_;
  std::unordered_map<std::string, int> constraint_index_;
};

/// Result of solve(). Duals are expressed in the problem's own sense: a row
/// dual is d(objective)/d(rhs) and a reduced cost is d(objective)/d(x_j) for a
/// nonbasic variable held at a bound, i.e. the marginal value of that bound.
struct LpSolution {
  Status status = Status::SolverFailure;
  double objective_value = 0.0;
  std::vector<double> values;
  std::vector<double> row_duals;
  std::vector<double> reduced_costs;
  int iterations = 0;
  std::string message;

  double value(const LpProblem& problem, std::string_view name) const;

  /// Dual of the active bound of variable `var` (zero if it is not at a bound).
  double bound_dual(int var) const { return reduced_costs.at(static_cast<std::size_t>(var)); }

  /// b'y + sum_j d_j * (bound selected by the sign of d_j).
  double dual_objective(const LpProblem& problem) const;
};

struct SolverOptions {
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-9;
  double pivot_tol = 1e-9;
  int refactor_interval = 100;
  int max_iterations = 0;  // 0: 50 * (rows + columns)
  /// Residual bound used to certify an optimal solution.
  double certify_tol = 1e-6;
};

/// Bounded-variable primal simplex. Deterministic: Dantzig pricing with
/// smallest-index ties, switching to Bland's rule after a run of degenerate
/// pivots. Throws std::invalid_argument for malformed problems.
LpSolution solve(const LpProblem& problem, const SolverOptions& options = {});

/// Fixed-format MPS with an OBJSENSE section.
void write_mps(const LpProblem& problem, std::ostream& out, std::string_view name = "ITL");

}  // namespace itl::lp
