#pragma once

#include <map>
#include <vector>

#include "soscert/linalg.hpp"
#include "soscert/polynomial.hpp"

namespace soscert {

struct IdealBasis {
  std::size_t nvars = 0;
  std::vector<Polynomial> generators;
  // Reduced, monic, sorted by increasing leading monomial.
  std::vector<Polynomial> groebner;
  // Every member of degree <= e has cofactors of degree <= e - deg(h_j).
  bool is_graded = false;
  // The generators are themselves a Groebner basis (division by them gives normal forms).
  bool generators_are_groebner = false;
};

// Full division of p by `divisors`. When `quotients` is given it receives one
// quotient per divisor with p = sum q_j d_j + remainder.
Polynomial reduce(const Polynomial& p, const std::vector<Polynomial>& divisors,
                  std::vector<Polynomial>* quotients = nullptr);

IdealBasis groebner(const std::vector<Polynomial>& generators);

// Checks the graded property on degrees lo..hi by comparing the rank of the
// Macaulay matrix of the generators with the dimension of I in that degree.
bool check_graded(const IdealBasis& ideal, unsigned lo, unsigned hi);

class QuotientRing {
 public:
  QuotientRing() = default;
  // Throws NotZeroDimensional.
  explicit QuotientRing(IdealBasis ideal);

  const IdealBasis& ideal() const { return ideal_; }
  std::size_t nvars() const { return ideal_.nvars; }
  const std::vector<Monomial>& basis() const { return basis_; }
  std::size_t dimension() const { return basis_.size(); }
  // Largest degree of a basis monomial (0 for the trivial quotient).
  unsigned basis_degree() const { return basis_degree_; }
  const QMatrix& mult_matrix(std::size_t i) const { return mult_[i]; }
  // Matrix of multiplication by f in the basis.
  QMatrix multiplication_matrix(const Polynomial& f) const;

  Polynomial normal_form(const Polynomial& p) const;
  bool contains(const Polynomial& p) const { return normal_form(p).is_zero(); }
  std::vector<Rational> coordinates(const Polynomial& p) const;
  Polynomial from_coordinates(const std::vector<Rational>& c) const;
  // -1 when m is not a basis monomial.
  int index_of(const Monomial& m) const;

  template <class S>
  std::vector<S> coordinates(const BasicPolynomial<S>& p) const {
    std::vector<S> out(dimension(), S(0));
    for (const auto& [m, c] : p.terms()) {
      const auto nf = coordinates(Polynomial(m, Rational(1)));
      for (std::size_t k = 0; k < nf.size(); ++k)
        if (sgn(nf[k]) != 0) out[k] += c * scalar_cast<S>(nf[k]);
    }
    return out;
  }
  template <class S>
  BasicPolynomial<S> from_coordinates(const std::vector<S>& c) const {
    BasicPolynomial<S> p(nvars());
    for (std::size_t k = 0; k < basis_.size(); ++k) p.add_term(basis_[k], c[k]);
    return p;
  }

 private:
  IdealBasis ideal_;
  std::vector<Monomial> basis_;
  std::map<Monomial, std::size_t, GrevlexGreater> index_;
  std::vector<QMatrix> mult_;
  unsigned basis_degree_ = 0;
};

QuotientRing monomial_basis(const IdealBasis& ideal);

// p = sum p_j h_j + remainder, remainder = normal form of p, nu clears every
// denominator of the p_j and of the remainder.
struct Cofactors {
  std::vector<Polynomial> p;
  Polynomial remainder;
  Integer nu = 1;
};

Cofactors cofactor_reduce(const QuotientRing& q, const Polynomial& p);

// a f + b = gamma and b f = 0 modulo I, a and b integral on the basis.
struct CoprimalityWitness {
  Polynomial a;
  Polynomial b;
  Integer gamma = 1;
};

// Throws ConditionFailed when (I:f) + (f) != (1).
CoprimalityWitness coprimality_witness(const QuotientRing& q, const Polynomial& f);

// Throws NotInvertible.
Polynomial inverse_mod(const QuotientRing& q, const Polynomial& theta);

// Quotients by J^2, J^4, ... up to the first power contained in the target ideal.
std::vector<QuotientRing> ideal_power_chain(const IdealBasis& radical, const QuotientRing& target);

// Radical of a zero-dimensional ideal: I plus the squarefree parts of the
// minimal polynomials of the variables.
IdealBasis radical(const QuotientRing& q);

// Minimal polynomial of x_i modulo I, ascending coefficients, monic.
UniPoly minimal_polynomial(const QuotientRing& q, std::size_t i);

}  // namespace soscert
