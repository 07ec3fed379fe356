#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <vector>

#include "soscert/certificate.hpp"
#include "soscert/quotient.hpp"

namespace soscert {

// Degree-e Gram identity f = m Q_0 m^t + sum (m Q_i m^t) g_i + sum p_j h_j as
// an affine system. Unknowns: scaled svec of each Q_i (off-diagonal entries
// times sqrt 2, row by row over the upper triangle), then the coefficients of
// every p_j.
struct SdpProblem {
  std::size_t nvars = 0;
  unsigned degree = 0;
  std::vector<unsigned> orders;
  std::vector<std::vector<Monomial>> block_monomials;
  std::vector<std::vector<Monomial>> cofactor_monomials;
  // Monomials of degree <= degree, one per constraint row.
  std::vector<Monomial> rows;
  Eigen::MatrixXd a;
  Eigen::VectorXd b;

  std::size_t blocks() const { return block_monomials.size(); }
  std::size_t block_size(std::size_t i) const { return block_monomials[i].size(); }
  std::size_t block_offset(std::size_t i) const;
  std::size_t cofactor_offset(std::size_t j) const;
  std::size_t unknowns() const { return static_cast<std::size_t>(a.cols()); }
};

struct SolverResult {
  std::vector<Eigen::MatrixXd> blocks;
  std::vector<Eigen::VectorXd> cofactors;
  double lambda = 0;
  // || a x - b || of the returned blocks and cofactors.
  double residual = 0;
  int iterations = 0;
};

// Throws NotGraded, InvalidInput (order below deg B or wrong count).
SdpProblem formulate(const ProblemInstance& inst, const QuotientRing& q, const std::vector<unsigned>& order);

// Douglas-Rachford splitting between the affine set and the cones
// Q_0 >= lambda I, Q_i >= 0. Throws Infeasible on a stall, MaxIterations.
SolverResult solve_feasibility(const SdpProblem& prob, double lambda, int iterations, double tol);

// Largest feasible lambda found by doubling/halving and bisection.
// Throws Infeasible when no positive lambda is feasible.
SolverResult maximize_lambda(const SdpProblem& prob, int iterations, double tol,
                             std::vector<std::pair<double, bool>>* probes = nullptr);

std::vector<double> svec_scaled(const Eigen::MatrixXd& q);
Eigen::MatrixXd unsvec_scaled(const double* v, std::size_t size);

struct SdpCertifyStats {
  double lambda = 0;
  int kappa = 0;
  unsigned bits = 0;
  int passes = 0;
  double residual = 0;
};

// Rounds the solver output and factors the corrected Q_0 exactly.
// An empty order selects deg B for every block, a single value applies to all. Throws PrecisionExceeded.
Certificate sdp_certify(const ProblemInstance& inst, const std::vector<unsigned>& order,
                               SdpCertifyStats* stats = nullptr);

// Text dump for external solvers and the matching result reader.
void write_sdp_problem(std::ostream& os, const SdpProblem& prob);
SolverResult read_sdp_result(std::istream& is, const SdpProblem& prob);
void write_sdp_result(std::ostream& os, const SolverResult& res);

}  // namespace soscert
