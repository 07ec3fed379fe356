#pragma once

#include <gmpxx.h>

#include <cmath>
#include <complex>
#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "soscert/errors.hpp"

namespace soscert {

using Rational = mpq_class;
using Integer = mpz_class;
using Complex = std::complex<double>;

class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(std::size_t nvars) : exp_(nvars, 0) {}
  explicit Monomial(std::vector<unsigned> exps);

  static Monomial variable(std::size_t nvars, std::size_t i, unsigned power = 1);

  std::size_t nvars() const { return exp_.size(); }
  unsigned degree() const { return deg_; }
  unsigned operator[](std::size_t i) const { return exp_[i]; }
  const std::vector<unsigned>& exponents() const { return exp_; }
  bool is_one() const { return deg_ == 0; }

  Monomial operator*(const Monomial& o) const;
  // Requires o.divides(*this).
  Monomial operator/(const Monomial& o) const;
  bool divides(const Monomial& o) const;
  Monomial lcm(const Monomial& o) const;
  bool coprime(const Monomial& o) const;

  friend bool operator==(const Monomial& a, const Monomial& b) { return a.exp_ == b.exp_; }
  friend bool operator!=(const Monomial& a, const Monomial& b) { return !(a == b); }

 private:
  std::vector<unsigned> exp_;
  unsigned deg_ = 0;
};

// Graded reverse lexicographic order with x1 > x2 > ... > xn.
bool grevlex_less(const Monomial& a, const Monomial& b);

struct GrevlexGreater {
  bool operator()(const Monomial& a, const Monomial& b) const { return grevlex_less(b, a); }
};

namespace detail {

inline bool is_zero(const Rational& c) { return sgn(c) == 0; }
inline bool is_zero(double c) { return c == 0.0; }
inline bool is_zero(const Complex& c) { return c == Complex(0.0, 0.0); }

inline double magnitude(const Rational& c) { return std::fabs(c.get_d()); }
inline double magnitude(double c) { return std::fabs(c); }
inline double magnitude(const Complex& c) { return std::abs(c); }

template <class S>
constexpr bool is_exact = std::is_same_v<S, Rational>;

}  // namespace detail

// Sparse polynomial; terms are kept in decreasing grevlex order.
template <class S>
class BasicPolynomial {
 public:
  using Scalar = S;
  using TermMap = std::map<Monomial, S, GrevlexGreater>;

  BasicPolynomial() = default;
  explicit BasicPolynomial(std::size_t nvars) : nvars_(nvars) {}
  BasicPolynomial(std::size_t nvars, const S& c) : nvars_(nvars) {
    if (!detail::is_zero(c)) terms_.emplace(Monomial(nvars), c);
  }
  BasicPolynomial(const Monomial& m, const S& c) : nvars_(m.nvars()) {
    if (!detail::is_zero(c)) terms_.emplace(m, c);
  }

  static BasicPolynomial variable(std::size_t nvars, std::size_t i) {
    return BasicPolynomial(Monomial::variable(nvars, i), S(1));
  }

  std::size_t nvars() const { return nvars_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one()); }
  // -1 for the zero polynomial.
  int degree() const {
    int d = -1;
    for (const auto& [m, c] : terms_) d = std::max(d, static_cast<int>(m.degree()));
    return d;
  }
  std::size_t size() const { return terms_.size(); }
  const TermMap& terms() const { return terms_; }

  const Monomial& leading_monomial() const { return terms_.begin()->first; }
  const S& leading_coefficient() const { return terms_.begin()->second; }

  S coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? S(0) : it->second;
  }
  S constant_term() const { return coefficient(Monomial(nvars_)); }

  void add_term(const Monomial& m, const S& c) {
    adopt(m.nvars());
    if (m.nvars() != nvars_) throw InvalidInput("monomial arity does not match the polynomial");
    if (detail::is_zero(c)) return;
    if constexpr (detail::is_exact<S>) {
      S cc(c);
      cc.canonicalize();
      insert(m, cc);
    } else {
      insert(m, c);
    }
  }

  // this += c * m * p
  void add_scaled(const BasicPolynomial& p, const S& c, const Monomial& m) {
    if (p.is_zero() || detail::is_zero(c)) return;
    adopt(p.nvars_);
    for (const auto& [pm, pc] : p.terms_) add_term(pm * m, pc * c);
  }

  BasicPolynomial& operator+=(const BasicPolynomial& o) {
    adopt(o.nvars_);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  BasicPolynomial& operator-=(const BasicPolynomial& o) {
    adopt(o.nvars_);
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  BasicPolynomial& operator*=(const S& s) {
    if (detail::is_zero(s)) {
      terms_.clear();
      return *this;
    }
    for (auto& [m, c] : terms_) c *= s;
    return *this;
  }
  BasicPolynomial& operator*=(const BasicPolynomial& o) { return *this = *this * o; }

  friend BasicPolynomial operator+(BasicPolynomial a, const BasicPolynomial& b) { return a += b; }
  friend BasicPolynomial operator-(BasicPolynomial a, const BasicPolynomial& b) { return a -= b; }
  friend BasicPolynomial operator-(BasicPolynomial a) {
    for (auto& [m, c] : a.terms_) c = -c;
    return a;
  }
  friend BasicPolynomial operator*(BasicPolynomial a, const S& s) { return a *= s; }
  friend BasicPolynomial operator*(const S& s, BasicPolynomial a) { return a *= s; }
  friend BasicPolynomial operator*(const BasicPolynomial& a, const BasicPolynomial& b) {
    BasicPolynomial r(std::max(a.nvars_, b.nvars_));
    if (a.nvars_ && b.nvars_ && a.nvars_ != b.nvars_) throw InvalidInput("variable count mismatch");
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) r.add_term(ma * mb, ca * cb);
    if constexpr (!detail::is_exact<S>) r.prune();
    return r;
  }
  friend bool operator==(const BasicPolynomial& a, const BasicPolynomial& b) {
    return a.terms_ == b.terms_;
  }
  friend bool operator!=(const BasicPolynomial& a, const BasicPolynomial& b) { return !(a == b); }

  BasicPolynomial pow(unsigned e) const {
    BasicPolynomial r(nvars_, S(1));
    for (unsigned i = 0; i < e; ++i) r = r * *this;
    return r;
  }

  // Drops coefficients below 2^-52 of the largest magnitude.
  void prune() {
    double mx = 0;
    for (const auto& [m, c] : terms_) mx = std::max(mx, detail::magnitude(c));
    const double floor = mx * std::ldexp(1.0, -52);
    for (auto it = terms_.begin(); it != terms_.end();) {
      if (detail::magnitude(it->second) < floor || detail::is_zero(it->second))
        it = terms_.erase(it);
      else
        ++it;
    }
  }

 private:
  void insert(const Monomial& m, const S& c) {
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (detail::is_zero(it->second)) terms_.erase(it);
    }
  }

  void adopt(std::size_t n) {
    if (n == nvars_) return;
    if (nvars_ == 0 && terms_.empty()) {
      nvars_ = n;
      return;
    }
    if (n == 0) return;
    throw InvalidInput("variable count mismatch");
  }

  std::size_t nvars_ = 0;
  TermMap terms_;
};

using Polynomial = BasicPolynomial<Rational>;
using RealPolynomial = BasicPolynomial<double>;
using ComplexPolynomial = BasicPolynomial<Complex>;

template <class T>
T scalar_cast(const Rational& c);
template <>
inline Rational scalar_cast<Rational>(const Rational& c) { return c; }
template <>
inline double scalar_cast<double>(const Rational& c) { return c.get_d(); }
template <>
inline Complex scalar_cast<Complex>(const Rational& c) { return Complex(c.get_d(), 0.0); }

template <class T>
T scalar_cast(double c) { return T(c); }
template <class T>
T scalar_cast(const Complex& c) { return T(c); }

template <class S, class T>
T evaluate(const BasicPolynomial<S>& p, const std::vector<T>& point) {
  if (p.nvars() != 0 && point.size() != p.nvars())
    throw InvalidInput("evaluation point has " + std::to_string(point.size()) +
                       " coordinates, polynomial has " + std::to_string(p.nvars()) + " variables");
  T total(0);
  for (const auto& [m, c] : p.terms()) {
    T v = scalar_cast<T>(c);
    for (std::size_t i = 0; i < point.size(); ++i)
      for (unsigned e = 0; e < m[i]; ++e) v *= point[i];
    total += v;
  }
  return total;
}

template <class T, class S>
BasicPolynomial<T> convert(const BasicPolynomial<S>& p) {
  BasicPolynomial<T> r(p.nvars());
  for (const auto& [m, c] : p.terms()) r.add_term(m, scalar_cast<T>(c));
  return r;
}

struct HeightInfo {
  std::size_t numerator_height = 0;
  std::size_t denominator_height = 0;
};

std::size_t bit_length(const Integer& z);
Integer lcm_denominator(const Polynomial& p);
HeightInfo height(const Polynomial& p);
HeightInfo height(const Rational& q);

// floor(x * 2^N) / 2^N, computed exactly from the binary value of x.
Rational round_binary(double x, unsigned frac_bits);
Polynomial round_binary(const RealPolynomial& p, unsigned frac_bits);

std::vector<std::string> default_variable_names(std::size_t n);
std::string to_string(const Rational& q);
std::string to_string(const Polynomial& p, const std::vector<std::string>& names = {});
std::string to_string(const RealPolynomial& p, const std::vector<std::string>& names = {});

// Exponent vectors of all monomials of degree <= d, sorted degree-first, grevlex-descending
// inside each degree.
std::ostream& operator<<(std::ostream& os, const Polynomial& p);
std::ostream& operator<<(std::ostream& os, const RealPolynomial& p);

std::vector<Monomial> monomials_up_to(std::size_t nvars, unsigned d);

}  // namespace soscert
