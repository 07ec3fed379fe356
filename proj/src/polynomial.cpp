#include "soscert/polynomial.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <ostream>
#include <sstream>

namespace soscert {

Monomial::Monomial(std::vector<unsigned> exps) : exp_(std::move(exps)) {
  deg_ = std::accumulate(exp_.begin(), exp_.end(), 0u);
}

Monomial Monomial::variable(std::size_t nvars, std::size_t i, unsigned power) {
  if (i >= nvars) throw InvalidInput("variable index out of range");
  std::vector<unsigned> e(nvars, 0);
  e[i] = power;
  return Monomial(std::move(e));
}

Monomial Monomial::operator*(const Monomial& o) const {
  if (o.exp_.size() != exp_.size()) {
    if (o.exp_.empty()) return *this;
    if (exp_.empty()) return o;
    throw InvalidInput("variable count mismatch");
  }
  Monomial r(*this);
  for (std::size_t i = 0; i < exp_.size(); ++i) r.exp_[i] += o.exp_[i];
  r.deg_ = deg_ + o.deg_;
  return r;
}

Monomial Monomial::operator/(const Monomial& o) const {
  Monomial r(*this);
  for (std::size_t i = 0; i < exp_.size(); ++i) r.exp_[i] -= o.exp_[i];
  r.deg_ = deg_ - o.deg_;
  return r;
}

bool Monomial::divides(const Monomial& o) const {
  for (std::size_t i = 0; i < exp_.size(); ++i)
    if (exp_[i] > o.exp_[i]) return false;
  return true;
}

Monomial Monomial::lcm(const Monomial& o) const {
  std::vector<unsigned> e(exp_.size());
  for (std::size_t i = 0; i < exp_.size(); ++i) e[i] = std::max(exp_[i], o.exp_[i]);
  return Monomial(std::move(e));
}

bool Monomial::coprime(const Monomial& o) const {
  for (std::size_t i = 0; i < exp_.size(); ++i)
    if (exp_[i] && o.exp_[i]) return false;
  return true;
}

bool grevlex_less(const Monomial& a, const Monomial& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  for (std::size_t i = a.nvars(); i-- > 0;) {
    if (a[i] != b[i]) return a[i] > b[i];
  }
  return false;
}

std::size_t bit_length(const Integer& z) {
  if (sgn(z) == 0) return 0;
  return mpz_sizeinbase(z.get_mpz_t(), 2);
}

Integer lcm_denominator(const Polynomial& p) {
  Integer nu = 1;
  for (const auto& [m, c] : p.terms()) mpz_lcm(nu.get_mpz_t(), nu.get_mpz_t(), c.get_den_mpz_t());
  return nu;
}

HeightInfo height(const Polynomial& p) {
  HeightInfo h;
  if (p.is_zero()) return h;
  const Integer nu = lcm_denominator(p);
  Integer mx = 0;
  for (const auto& [m, c] : p.terms()) {
    Integer num = abs(c.get_num()) * (nu / c.get_den());
    if (num > mx) mx = num;
  }
  h.numerator_height = bit_length(mx);
  h.denominator_height = nu > 1 ? bit_length(nu) : 0;
  return h;
}

HeightInfo height(const Rational& q) {
  HeightInfo h;
  h.numerator_height = bit_length(abs(q.get_num()));
  h.denominator_height = q.get_den() > 1 ? bit_length(q.get_den()) : 0;
  return h;
}

Rational round_binary(double x, unsigned frac_bits) {
  if (!std::isfinite(x)) throw InvalidInput("cannot round a non-finite value");
  Rational exact(x);
  Integer scaled;
  Integer num = exact.get_num();
  mpz_mul_2exp(num.get_mpz_t(), num.get_mpz_t(), frac_bits);
  mpz_fdiv_q(scaled.get_mpz_t(), num.get_mpz_t(), exact.get_den_mpz_t());
  Integer den = 1;
  mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), frac_bits);
  Rational r(scaled, den);
  r.canonicalize();
  return r;
}

Polynomial round_binary(const RealPolynomial& p, unsigned frac_bits) {
  Polynomial r(p.nvars());
  for (const auto& [m, c] : p.terms()) r.add_term(m, round_binary(c, frac_bits));
  return r;
}

std::vector<std::string> default_variable_names(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("x" + std::to_string(i + 1));
  return names;
}

std::string to_string(const Rational& q) { return q.get_str(); }

namespace {

std::string monomial_text(const Monomial& m, const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < m.nvars(); ++i) {
    if (m[i] == 0) continue;
    if (!out.empty()) out += "*";
    out += names[i];
    if (m[i] > 1) out += "^" + std::to_string(m[i]);
  }
  return out;
}

template <class S, class Fmt>
std::string render(const BasicPolynomial<S>& p, const std::vector<std::string>& given, Fmt fmt) {
  if (p.is_zero()) return "0";
  const auto names = given.empty() ? default_variable_names(p.nvars()) : given;
  std::string out;
  bool first = true;
  for (const auto& [m, c] : p.terms()) {
    const bool neg = c < 0;
    const std::string mag = fmt(neg ? S(-c) : S(c));
    const std::string mono = monomial_text(m, names);
    if (first)
      out += neg ? "-" : "";
    else
      out += neg ? " - " : " + ";
    first = false;
    if (mono.empty())
      out += mag;
    else if (mag == "1")
      out += mono;
    else
      out += mag + "*" + mono;
  }
  return out;
}

}  // namespace

std::string to_string(const Polynomial& p, const std::vector<std::string>& names) {
  return render(p, names, [](const Rational& c) { return c.get_str(); });
}

std::string to_string(const RealPolynomial& p, const std::vector<std::string>& names) {
  return render(p, names, [](double c) {
    std::ostringstream os;
    os.precision(17);
    os << c;
    return os.str();
  });
}

std::ostream& operator<<(std::ostream& os, const Polynomial& p) { return os << to_string(p); }
std::ostream& operator<<(std::ostream& os, const RealPolynomial& p) { return os << to_string(p); }

std::vector<Monomial> monomials_up_to(std::size_t nvars, unsigned d) {
  std::vector<Monomial> out;
  std::vector<unsigned> e(nvars, 0);
  // enumerate all exponent vectors with total degree <= d
  std::function<void(std::size_t, unsigned)> rec = [&](std::size_t i, unsigned left) {
    if (i == nvars) {
      out.emplace_back(e);
      return;
    }
    for (unsigned k = 0; k <= left; ++k) {
      e[i] = k;
      rec(i + 1, left - k);
    }
    e[i] = 0;
  };
  rec(0, d);
  std::sort(out.begin(), out.end(), [](const Monomial& a, const Monomial& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    return grevlex_less(b, a);
  });
  return out;
}

}  // namespace soscert
