#include "soscert/certificate.hpp"

namespace soscert {

std::string to_string(Mode m) { return m == Mode::Strict ? "strict" : "nonneg"; }
std::string to_string(Engine e) { return e == Engine::Constructive ? "constructive" : "sdp"; }

namespace {

// q = (content) * primitive with primitive integral.
std::pair<Rational, Polynomial> split_content(const Polynomial& q) {
  if (q.is_zero()) return {Rational(0), q};
  const Integer den = lcm_denominator(q);
  Integer g = 0;
  for (const auto& [m, c] : q.terms()) {
    const Integer v = c.get_num() * (den / c.get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
  }
  Rational content(g, den);
  content.canonicalize();
  return {content, q * Rational(1 / content)};
}

Integer lcm(const Integer& a, const Integer& b) {
  Integer r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

}  // namespace

IntegerForm integer_form(const Certificate& cert) {
  IntegerForm out;
  const std::size_t n = cert.variables.size();
  if (!cert.blocks.empty()) {
    for (const auto& s : cert.blocks[0]) {
      auto [content, prim] = split_content(s.square);
      // w c^2 prim^2 = (a prim)^2 / a  with a = w c^2
      const Rational a = s.weight * content * content;
      if (sgn(a) == 0) {
        out.nu0.push_back(1);
        out.q0.push_back(Polynomial(n));
        continue;
      }
      // a = num/den: (num prim)^2 / (num den)
      out.nu0.push_back(a.get_num() * a.get_den());
      out.q0.push_back(prim * Rational(a.get_num()));
    }
  }
  std::vector<std::vector<Rational>> scaled;
  for (std::size_t i = 1; i < cert.blocks.size(); ++i) {
    out.q.emplace_back();
    scaled.emplace_back();
    for (const auto& s : cert.blocks[i]) {
      auto [content, prim] = split_content(s.square);
      const Rational a = s.weight * content * content;
      out.nu1 = lcm(out.nu1, a.get_den());
      scaled.back().push_back(a);
      out.q.back().push_back(prim);
    }
  }
  for (const auto& row : scaled) {
    out.omega.emplace_back();
    for (const auto& a : row) out.omega.back().push_back(Integer(a.get_num() * (out.nu1 / a.get_den())));
  }
  for (const auto& p : cert.cofactors) out.nu2 = lcm(out.nu2, lcm_denominator(p));
  for (const auto& p : cert.cofactors) out.p.push_back(p * Rational(out.nu2));
  return out;
}

void fill_scalings(Certificate& cert) {
  const IntegerForm f = integer_form(cert);
  cert.nu0 = f.nu0;
  cert.nu1 = f.nu1;
  cert.nu2 = f.nu2;
}

}  // namespace soscert
