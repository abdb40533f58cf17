#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

namespace itl::lp {

enum class SimplexStatus { Optimal, Infeasible, Unbounded, IterationLimit, Singular };

template <typename Scalar>
struct SimplexOptions {
  Scalar feasibility_tol = Scalar(1e-9);
  Scalar optimality_tol = Scalar(1e-9);
  Scalar pivot_tol = Scalar(1e-9);
  int refactor_interval = 100;
  int max_iterations = 0;
  int degenerate_run_before_bland = 50;
};

template <typename Scalar>
struct SimplexResult {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  SimplexStatus status = SimplexStatus::Singular;
  Vector x;             // structural values
  Vector row_duals;     // y with c = A'y + d
  Vector reduced_costs; // d, zero for basic variables
  int iterations = 0;
};

/// Dense bounded-variable revised simplex for
///   minimize c'x  subject to  A x = b,  lower <= x <= upper
/// with infinite bounds allowed. Phase one uses one artificial per row that a
/// singleton column cannot cover; the basis inverse is kept explicitly with
/// rank-one updates and refreshed from an LU factorization periodically.
template <typename Scalar>
class BoundedSimplex {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  BoundedSimplex(Matrix a, Vector b, Vector cost, Vector lower, Vector upper, SimplexOptions<Scalar> options = {})
      : a_(std::move(a)),
        b_(std::move(b)),
        cost_(std::move(cost)),
        options_(options),
        m_(a_.rows()),
        n_(a_.cols()) {
    const Eigen::Index total = n_ + m_;
    lower_.resize(total);
    upper_.resize(total);
    lower_.head(n_) = lower;
    upper_.head(n_) = upper;
    lower_.tail(m_).setZero();
    upper_.tail(m_).setConstant(kInfinity);
    art_sign_ = Vector::Ones(m_);
    x_ = Vector::Zero(total);
    state_.assign(static_cast<std::size_t>(total), State::AtLower);
    basis_.assign(static_cast<std::size_t>(m_), -1);
    if (options_.max_iterations <= 0) options_.max_iterations = static_cast<int>(50 * (m_ + n_) + 1000);
  }

  SimplexResult<Scalar> run() {
    initialize();
    if (!refactor()) return finish(SimplexStatus::Singular);

    Scalar infeasibility = x_.tail(m_).sum();
    if (infeasibility > options_.feasibility_tol) {
      Vector phase_one = Vector::Zero(n_ + m_);
      phase_one.tail(m_).setOnes();
      SimplexStatus s = iterate(phase_one);
      if (s != SimplexStatus::Optimal) return finish(s);
      if (x_.tail(m_).sum() > options_.feasibility_tol * std::max<Scalar>(1, b_.cwiseAbs().maxCoeff()))
        return finish(SimplexStatus::Infeasible);
    }
    // Artificials are pinned to zero; basic ones leave on the first pivot that touches their row.
    for (Eigen::Index j = n_; j < n_ + m_; ++j) {
      upper_(j) = 0;
      if (state(j) != State::Basic) {
        x_(j) = 0;
        state(j) = State::AtLower;
      }
    }
    if (!refactor()) return finish(SimplexStatus::Singular);
    Vector phase_two = Vector::Zero(n_ + m_);
    phase_two.head(n_) = cost_;
    SimplexStatus s = iterate(phase_two);
    if (s == SimplexStatus::Optimal && !refactor()) s = SimplexStatus::Singular;
    if (s == SimplexStatus::Optimal) compute_duals(phase_two);
    return finish(s);
  }

  /// Structural variables in the final basis.
  std::vector<Eigen::Index> basis() const { return basis_; }

 private:
  enum class State { Basic, AtLower, AtUpper, Free };
  static constexpr Scalar kInfinity = std::numeric_limits<Scalar>::infinity();

  State& state(Eigen::Index j) { return state_[static_cast<std::size_t>(j)]; }
  State state(Eigen::Index j) const { return state_[static_cast<std::size_t>(j)]; }

  bool is_fixed(Eigen::Index j) const { return upper_(j) - lower_(j) <= Scalar(0); }

  Vector column(Eigen::Index j) const {
    if (j < n_) return a_.col(j);
    Vector e = Vector::Zero(m_);
    e(j - n_) = art_sign_(j - n_);
    return e;
  }

  void initialize() {
    for (Eigen::Index j = 0; j < n_; ++j) {
      if (std::isfinite(lower_(j))) {
        x_(j) = lower_(j);
        state(j) = State::AtLower;
      } else if (std::isfinite(upper_(j))) {
        x_(j) = upper_(j);
        state(j) = State::AtUpper;
      } else {
        x_(j) = 0;
        state(j) = State::Free;
      }
    }
    Vector residual = b_ - a_ * x_.head(n_);

    // Crash: a column with a single nonzero can absorb its row's residual.
    for (Eigen::Index j = 0; j < n_; ++j) {
      if (is_fixed(j)) continue;
      Eigen::Index row = -1;
      int nnz = 0;
      for (Eigen::Index i = 0; i < m_ && nnz < 2; ++i) {
        if (a_(i, j) != Scalar(0)) {
          row = i;
          ++nnz;
        }
      }
      if (nnz != 1 || basis_[static_cast<std::size_t>(row)] >= 0) continue;
      const Scalar value = x_(j) + residual(row) / a_(row, j);
      if (value < lower_(j) - options_.feasibility_tol || value > upper_(j) + options_.feasibility_tol) continue;
      x_(j) = std::clamp(value, lower_(j), upper_(j));
      residual(row) = 0;
      basis_[static_cast<std::size_t>(row)] = j;
      state(j) = State::Basic;
    }
    for (Eigen::Index i = 0; i < m_; ++i) {
      const Eigen::Index art = n_ + i;
      if (basis_[static_cast<std::size_t>(i)] >= 0) {
        x_(art) = 0;
        state(art) = State::AtLower;
        continue;
      }
      art_sign_(i) = residual(i) >= 0 ? Scalar(1) : Scalar(-1);
      x_(art) = std::abs(residual(i));
      basis_[static_cast<std::size_t>(i)] = art;
      state(art) = State::Basic;
    }
  }

  bool refactor() {
    if (m_ == 0) {
      binv_.resize(0, 0);
      return true;
    }
    Matrix basis_matrix(m_, m_);
    for (Eigen::Index i = 0; i < m_; ++i) basis_matrix.col(i) = column(basis_[static_cast<std::size_t>(i)]);
    Eigen::PartialPivLU<Matrix> lu(basis_matrix);
    if (!(lu.rcond() > Scalar(1e-14))) return false;
    binv_ = lu.inverse();
    if (!binv_.allFinite()) return false;

    Vector rhs = b_;
    for (Eigen::Index j = 0; j < n_ + m_; ++j) {
      if (state(j) != State::Basic && x_(j) != Scalar(0)) rhs -= column(j) * x_(j);
    }
    const Vector xb = binv_ * rhs;
    for (Eigen::Index i = 0; i < m_; ++i) x_(basis_[static_cast<std::size_t>(i)]) = xb(i);
    return true;
  }

  Vector basic_costs(const Vector& cost) const {
    Vector cb(m_);
    for (Eigen::Index i = 0; i < m_; ++i) cb(i) = cost(basis_[static_cast<std::size_t>(i)]);
    return cb;
  }

  Vector all_reduced_costs(const Vector& cost, const Vector& y) const {
    Vector d(n_ + m_);
    d.head(n_) = cost.head(n_) - a_.transpose() * y;
    d.tail(m_) = cost.tail(m_) - art_sign_.cwiseProduct(y);
    return d;
  }

  SimplexStatus iterate(const Vector& cost) {
    int degenerate_run = 0;
    int since_refactor = 0;
    while (true) {
      if (iterations_ >= options_.max_iterations) return SimplexStatus::IterationLimit;
      if (since_refactor >= options_.refactor_interval) {
        if (!refactor()) return SimplexStatus::Singular;
        since_refactor = 0;
      }
      const bool bland = degenerate_run >= options_.degenerate_run_before_bland;
      const Vector y = binv_.transpose() * basic_costs(cost);
      const Vector d = all_reduced_costs(cost, y);

      Eigen::Index entering = -1;
      Scalar best = 0;
      for (Eigen::Index j = 0; j < n_ + m_; ++j) {
        const State s = state(j);
        if (s == State::Basic || is_fixed(j)) continue;
        const Scalar dj = d(j);
        const bool eligible = (s == State::AtLower && dj < -options_.optimality_tol) ||
                              (s == State::AtUpper && dj > options_.optimality_tol) ||
                              (s == State::Free && std::abs(dj) > options_.optimality_tol);
        if (!eligible) continue;
        if (bland) {
          entering = j;
          break;
        }
        if (std::abs(dj) > best) {
          best = std::abs(dj);
          entering = j;
        }
      }
      if (entering < 0) return SimplexStatus::Optimal;

      const Scalar direction = d(entering) < 0 ? Scalar(1) : Scalar(-1);
      const Vector alpha = binv_ * column(entering);

      Scalar step = upper_(entering) - lower_(entering);
      if (!std::isfinite(step)) step = kInfinity;
      Eigen::Index leave_row = -1;
      Scalar leave_pivot = 0;
      for (Eigen::Index i = 0; i < m_; ++i) {
        const Scalar ai = direction * alpha(i);
        if (std::abs(ai) <= options_.pivot_tol) continue;
        const Eigen::Index j = basis_[static_cast<std::size_t>(i)];
        Scalar t;
        if (ai > 0) {
          if (!std::isfinite(lower_(j))) continue;
          t = (x_(j) - lower_(j)) / ai;
        } else {
          if (!std::isfinite(upper_(j))) continue;
          t = (upper_(j) - x_(j)) / -ai;
        }
        t = std::max<Scalar>(t, 0);
        bool take = false;
        if (t < step - Scalar(1e-12)) {
          take = true;
        } else if (leave_row >= 0 && t <= step + Scalar(1e-12)) {
          take = bland ? j < basis_[static_cast<std::size_t>(leave_row)] : std::abs(ai) > std::abs(leave_pivot);
        }
        if (take) {
          step = t;
          leave_row = i;
          leave_pivot = ai;
        }
      }
      if (!std::isfinite(step)) return SimplexStatus::Unbounded;

      for (Eigen::Index i = 0; i < m_; ++i) x_(basis_[static_cast<std::size_t>(i)]) -= direction * step * alpha(i);
      x_(entering) += direction * step;
      ++iterations_;
      ++since_refactor;
      degenerate_run = step <= Scalar(1e-12) ? degenerate_run + 1 : 0;

      if (leave_row < 0) {
        state(entering) = direction > 0 ? State::AtUpper : State::AtLower;
        x_(entering) = direction > 0 ? upper_(entering) : lower_(entering);
        continue;
      }
      const Eigen::Index leaving = basis_[static_cast<std::size_t>(leave_row)];
      if (leave_pivot > 0) {
        x_(leaving) = lower_(leaving);
        state(leaving) = State::AtLower;
      } else {
        x_(leaving) = upper_(leaving);
        state(leaving) = State::AtUpper;
      }
      basis_[static_cast<std::size_t>(leave_row)] = entering;
      state(entering) = State::Basic;

      const Scalar pivot = alpha(leave_row);
      binv_.row(leave_row) /= pivot;
      const Vector pivot_row = binv_.row(leave_row).transpose();
      Vector others = alpha;
      others(leave_row) = 0;
      binv_.noalias() -= others * pivot_row.transpose();
    }
  }

  void compute_duals(const Vector& cost) {
    y_ = binv_.transpose() * basic_costs(cost);
    d_ = all_reduced_costs(cost, y_);
    for (Eigen::Index i = 0; i < m_; ++i) d_(basis_[static_cast<std::size_t>(i)]) = 0;
    // Clear sub-tolerance values whose sign points at an inactive bound so
    // they never pair with an infinite bound in the dual objective.
    for (Eigen::Index j = 0; j < n_ + m_; ++j) {
      if (is_fixed(j)) continue;
      const State s = state(j);
      if (s == State::Free || (s == State::AtLower && d_(j) < 0) || (s == State::AtUpper && d_(j) > 0)) d_(j) = 0;
    }
  }

  SimplexResult<Scalar> finish(SimplexStatus status) {
    SimplexResult<Scalar> r;
    r.status = status;
    r.x = x_.head(n_);
    r.iterations = iterations_;
    if (status == SimplexStatus::Optimal) {
      r.row_duals = y_;
      r.reduced_costs = d_.head(n_);
    }
    return r;
  }

  Matrix a_;
  Vector b_;
  Vector cost_;
  SimplexOptions<Scalar> options_;
  Eigen::Index m_;
  Eigen::Index n_;
  Vector lower_;
  Vector upper_;
  Vector art_sign_;
  Vector x_;
  std::vector<State> state_;
  std::vector<Eigen::Index> basis_;
  Matrix binv_;
  Vector y_;
  Vector d_;
  int iterations_ = 0;
};

}  // namespace itl::lp
