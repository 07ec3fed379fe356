#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "soscert/quotient.hpp"

namespace soscert {

struct RootPoint {
  std::vector<Complex> coords;
  bool real = true;
  // Index of the conjugate point for non-real roots, -1 otherwise.
  int partner = -1;
  int multiplicity = 1;

  std::vector<double> real_coords() const;
  // One point of each conjugate pair is the representative (the set Z).
  bool representative() const { return !real && partner > index; }
  int index = 0;
};

struct VarietyData {
  std::vector<RootPoint> points;
  // Columns are the coefficients of the idempotents on the basis of `radical`.
  Eigen::MatrixXcd idempotents;
  IdealBasis radical;
  bool is_radical = true;
  double tol = 0;

  std::vector<std::size_t> real_points() const;
  std::vector<std::size_t> pair_representatives() const;
};

// Distinct points of V_C with multiplicities. tol <= 0 selects the default
// 2^-40 (1 + max |coordinate|).
VarietyData solve_variety(const QuotientRing& q, double tol = 0, std::uint64_t seed = 1);

struct Membership {
  std::vector<std::size_t> in_s;
  std::vector<std::size_t> excluded;
  std::vector<std::size_t> complex_points;
  // Per point: index of the most violated g (0-based), -1 when none.
  std::vector<int> violated;
  // Real points with some |g_i| <= tol; they are provisionally kept in S.
  std::vector<std::size_t> boundary;
};

Membership membership(const VarietyData& var, const std::vector<Polynomial>& g, double tol);

// U = (V^T)^-1 with V_{k,j} = b_k(zeta_j). Requires a radical quotient whose
// basis matches the points; throws SingularVandermonde.
Eigen::MatrixXcd idempotents(const QuotientRing& q, const VarietyData& var);

// Product of Lagrange factors (x_i - xi_i)/(zeta_i - xi_i) over the other points.
ComplexPolynomial interpolation_poly(const VarietyData& var, std::size_t which);

Complex evaluate_at(const Polynomial& p, const RootPoint& pt);
Eigen::MatrixXd to_eigen(const QMatrix& m);

}  // namespace soscert
