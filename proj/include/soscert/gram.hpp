#pragma once

#include <Eigen/Dense>
#include <vector>

#include "soscert/linalg.hpp"
#include "soscert/quotient.hpp"
#include "soscert/variety.hpp"

namespace soscert {

struct WeightedSquare {
  Rational weight;
  Polynomial square;
};

struct RealGram {
  // Columns are the real square roots theta_k on the quotient basis.
  Eigen::MatrixXd theta;
  Eigen::MatrixXd q;
  double lambda_min = 0;
  // Column of theta that does not vanish on V_C, -1 when not requested.
  int distinguished = -1;
};

// theta_xi = sqrt(p(xi)) u_xi on real roots and the two-square identity on
// conjugate pairs. Falls back to build_gram_distinguished when V_R is empty.
// Throws NonPositiveAtRealRoot.
RealGram build_gram_real(const QuotientRing& q, const VarietyData& var, const Polynomial& p);

// Same identity with one square root nonvanishing on all of V_C (placed last).
RealGram build_gram_distinguished(const QuotientRing& q, const VarietyData& var, const Polynomial& p);

// Affine set {Y symmetric : basis Y basis^t = target} with the upper triangle
// of Y as unknowns, row by row.
class GramVariety {
 public:
  GramVariety() = default;
  // a has size(size+1)/2 columns. Rows are rank reduced; throws InfeasibleVariety.
  GramVariety(const QMatrix& a, const std::vector<Rational>& b, std::size_t size);

  // Constraints of basis Y basis^t == target modulo the ideal of q.
  static GramVariety modulo(const QuotientRing& q, const std::vector<Polynomial>& basis,
                            const Polynomial& target);

  std::size_t size() const { return size_; }
  const QMatrix& a() const { return a_; }
  const std::vector<Rational>& b() const { return b_; }
  bool contains(const QMatrix& y) const;

  static std::vector<Rational> svec(const QMatrix& y);
  static QMatrix unsvec(const std::vector<Rational>& v, std::size_t size);

 private:
  QMatrix a_;
  std::vector<Rational> b_;
  std::size_t size_ = 0;
};

// Orthogonal projection for the Frobenius product on full symmetric matrices.
QMatrix project_to_gram(const GramVariety& var, const QMatrix& q);

// Q = (1/denominator) P^t L diag(1/pivots) L^t P with P the symmetric permutation.
struct LDLFactorization {
  std::vector<std::vector<Integer>> l;
  // minors[k] = Delta_k, minors[0] = 1.
  std::vector<Integer> minors;
  // pivots[k] = Delta_{k+1} Delta_k.
  std::vector<Integer> pivots;
  Integer denominator = 1;
  // Row k of the factorization is row permutation[k] of Q.
  std::vector<std::size_t> permutation;

  QMatrix reconstruct() const;
  QMatrix l_matrix() const;
  // Weight Delta_{k+1}/(denominator Delta_k) and the coefficient vector of the
  // k-th square in the original indexing.
  std::vector<std::pair<Rational, std::vector<Rational>>> squares() const;
};

// Fraction-free LDL^t with symmetric pivoting on zero diagonal entries.
// Throws NotPositiveDefinite(k) at the first negative pivot, ZeroPivot(k) when
// no nonzero diagonal candidate remains (k is 1-based).
LDLFactorization ldlt(const QMatrix& q);

// Leading principal minors Delta_0..Delta_D of the integer matrix den*Q.
std::vector<Integer> leading_minors(const QMatrix& q);

struct ExactGram {
  QMatrix q;
  Integer nu0 = 1;
  LDLFactorization ldl;
  unsigned bits = 0;
  std::vector<WeightedSquare> squares;
};

unsigned default_max_bits();

QMatrix round_matrix(const Eigen::MatrixXd& m, unsigned bits);

// Round at `start_bits` fractional bits, project, factor; double the bits on
// failure. Throws PrecisionExceeded past max_bits.
ExactGram certify_gram(const GramVariety& var, const Eigen::MatrixXd& approx,
                       const std::vector<Polynomial>& basis, unsigned start_bits, unsigned max_bits);

ExactGram round_and_certify(const QuotientRing& q, const VarietyData& var, const Polynomial& p,
                            unsigned start_bits, unsigned max_bits = default_max_bits());

std::vector<Polynomial> basis_polynomials(const QuotientRing& q);

}  // namespace soscert
