#pragma once

#include <limits>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "itl/error.hpp"
#include "itl/network.hpp"

namespace itl {

/// Signed branch-bus incidence: +1 at the from bus, -1 at the to bus.
template <typename Scalar>
struct BasicIncidence {
  Eigen::SparseMatrix<Scalar> matrix;  // lines x buses
  std::vector<std::string> line_order;
  std::vector<std::string> bus_order;
};

using Incidence = BasicIncidence<double>;

/// Incidence over AC lines in input order. Throws ConnectivityError unless
/// the network is a single island, and MismatchError on dangling endpoints.
Incidence build_incidence(const Network& network);

/// PTDF = diag(1/x) * A * Bred^-1, with a zero column at the slack bus.
/// Bred = A' diag(1/x) A without the slack row and column is factorized once
/// (sparse LDL') and solved against every line's right-hand side.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> ptdf_from_incidence(
    const Eigen::SparseMatrix<Scalar>& incidence, const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& reactance,
    Eigen::Index slack);

template <typename Scalar>
struct BasicPtdf {
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> values;  // lines x buses
  std::string slack_bus;
  std::vector<std::string> line_order;
  std::vector<std::string> bus_order;

  Eigen::Index rows() const { return values.rows(); }
  Eigen::Index cols() const { return values.cols(); }

  /// Position of a line or bus, or -1 when absent.
  Eigen::Index line_position(std::string_view id) const;
  Eigen::Index bus_position(std::string_view id) const;

  /// Throws MismatchError for ids outside the matrix.
  Scalar at(std::string_view line_id, std::string_view bus_id) const;

  void index();

 private:
  std::unordered_map<std::string, Eigen::Index> line_pos_;
  std::unordered_map<std::string, Eigen::Index> bus_pos_;
};

using PtdfMatrix = BasicPtdf<double>;

/// Alphanumerically first bus id.
std::string default_slack(const Network& network);

/// Throws ValidationError for missing or nonpositive reactances,
/// ConnectivityError for multiple islands, MismatchError for an unknown slack.
/// An empty slack selects default_slack().
PtdfMatrix compute_ptdf(const Network& network, std::string_view slack_bus = {});

struct PtdfIsland {
  Network network;
  PtdfMatrix ptdf;
  bool has_crossing_lines = false;
};

/// PTDFs of the network without `line_id`, one per resulting island. The
/// requested slack is kept for its own island; other islands use their first
/// bus. Islands without any of the interface's crossing lines are flagged.
std::vector<PtdfIsland> remove_line_recompute(const Network& network, std::string_view line_id,
                                              std::string_view slack_bus, const Interface* interface = nullptr);

// Implementation -------------------------------------------------------------

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> ptdf_from_incidence(
    const Eigen::SparseMatrix<Scalar>& incidence, const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& reactance,
    Eigen::Index slack) {
  using Dense = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Sparse = Eigen::SparseMatrix<Scalar>;
  const Eigen::Index n_lines = incidence.rows();
  const Eigen::Index n_buses = incidence.cols();
  Dense result = Dense::Zero(n_lines, n_buses);
  if (n_lines == 0 || n_buses <= 1) return result;

  // Keep every bus except the slack.
  std::vector<Eigen::Triplet<Scalar>> select;
  select.reserve(static_cast<std::size_t>(n_buses - 1));
  for (Eigen::Index b = 0, k = 0; b < n_buses; ++b) {
    if (b != slack) select.emplace_back(b, k++, Scalar(1));
  }
  Sparse keep(n_buses, n_buses - 1);
  keep.setFromTriplets(select.begin(), select.end());

  const Sparse reduced_incidence = incidence * keep;
  const Sparse weighted = reactance.cwiseInverse().asDiagonal() * reduced_incidence;
  const Sparse susceptance = Sparse(reduced_incidence.transpose()) * weighted;

  Eigen::SimplicialLDLT<Sparse> solver(susceptance);
  if (solver.info() != Eigen::Success) return Dense::Constant(n_lines, n_buses, std::numeric_limits<Scalar>::quiet_NaN());
  // Bred is symmetric, so PTDF' = Bred^-1 * (D A)'.
  const Dense rhs = Dense(weighted.transpose());
  const Dense solved = solver.solve(rhs);
  for (Eigen::Index b = 0, k = 0; b < n_buses; ++b) {
    if (b == slack) continue;
    result.col(b) = solved.row(k++).transpose();
  }
  return result;
}

template <typename Scalar>
void BasicPtdf<Scalar>::index() {
  line_pos_.clear();
  bus_pos_.clear();
  for (std::size_t i = 0; i < line_order.size(); ++i) line_pos_.emplace(line_order[i], static_cast<Eigen::Index>(i));
  for (std::size_t i = 0; i < bus_order.size(); ++i) bus_pos_.emplace(bus_order[i], static_cast<Eigen::Index>(i));
}

template <typename Scalar>
Scalar BasicPtdf<Scalar>::at(std::string_view line_id, std::string_view bus_id) const {
  const Eigen::Index l = line_position(line_id);
  const Eigen::Index b = bus_position(bus_id);
  if (l < 0) throw MismatchError("line '" + std::string(line_id) + "' is not in the PTDF");
  if (b < 0) throw MismatchError("bus '" + std::string(bus_id) + "' is not in the PTDF");
  return values(l, b);
}

template <typename Scalar>
Eigen::Index BasicPtdf<Scalar>::line_position(std::string_view id) const {
  auto it = line_pos_.find(std::string(id));
  return it == line_pos_.end() ? -1 : it->second;
}

template <typename Scalar>
Eigen::Index BasicPtdf<Scalar>::bus_position(std::string_view id) const {
  auto it = bus_pos_.find(std::string(id));
  return it == bus_pos_.end() ? -1 : it->second;
}

}  // namespace itl
