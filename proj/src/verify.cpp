#include "soscert/verify.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "soscert/errors.hpp"

namespace soscert {

namespace {

std::size_t bits(const Rational& r) {
  const HeightInfo h = height(r);
  return std::max(h.numerator_height, h.denominator_height);
}

std::size_t bits(const Polynomial& p) {
  const HeightInfo h = height(p);
  return std::max(h.numerator_height, h.denominator_height);
}

const char* yes_no(bool b) { return b ? "yes" : "no"; }

std::string opt_str(const std::optional<bool>& b) { return b ? yes_no(*b) : "n/a"; }

}  // namespace

bool VerificationReport::ok() const { return identity_ok && weights_ok; }

std::string VerificationReport::first_failure() const {
  if (!identity_ok) return "identity";
  if (!weights_ok) return "weights";
  return "";
}

std::vector<std::string> VerificationReport::warnings() const {
  std::vector<std::string> out;
  if (witnesses_ok && !*witnesses_ok) out.push_back("witnesses");
  if (degree_bound_ok && !*degree_bound_ok) out.push_back("degree_bound");
  if (scalings_ok && !*scalings_ok) out.push_back("scalings");
  return out;
}

VerificationReport verify_certificate(const ProblemInstance& inst, const Certificate& cert) {
  VerificationReport rep;
  const std::size_t n = inst.nvars();
  if (!cert.variables.empty() && cert.variables != inst.variables) {
    rep.note = "certificate variables differ from the problem";
    return rep;
  }
  if (cert.blocks.size() != inst.g.size() + 1 || cert.cofactors.size() != inst.h.size()) {
    rep.note = "certificate has " + std::to_string(cert.blocks.size()) + " blocks and " +
               std::to_string(cert.cofactors.size()) + " cofactors, expected " +
               std::to_string(inst.g.size() + 1) + " and " + std::to_string(inst.h.size());
    return rep;
  }

  rep.weights_ok = true;
  Polynomial residual = inst.f;
  for (std::size_t i = 0; i < cert.blocks.size(); ++i) {
    const Polynomial g = i == 0 ? Polynomial(n, Rational(1)) : inst.g[i - 1];
    for (const auto& s : cert.blocks[i]) {
      if (sgn(s.weight) < 0) rep.weights_ok = false;
      rep.max_weight_bits = std::max(rep.max_weight_bits, bits(s.weight));
      rep.max_square_bits = std::max(rep.max_square_bits, bits(s.square));
      residual -= s.square * s.square * g * s.weight;
    }
  }
  for (std::size_t j = 0; j < inst.h.size(); ++j) {
    residual -= cert.cofactors[j] * inst.h[j];
    rep.max_cofactor_bits = std::max(rep.max_cofactor_bits, bits(cert.cofactors[j]));
    if (!cert.cofactors[j].is_zero())
      rep.max_cofactor_degree = std::max(rep.max_cofactor_degree, cert.cofactors[j].degree() + inst.h[j].degree());
  }
  rep.identity_ok = residual.is_zero();
  rep.residual_terms = residual.size();
  if (!rep.identity_ok) rep.residual = to_string(residual, inst.variables);

  if (!cert.nu0.empty() || cert.nu1 != 1 || cert.nu2 != 1) {
    const IntegerForm f = integer_form(cert);
    rep.scalings_ok = f.nu0 == cert.nu0 && f.nu1 == cert.nu1 && f.nu2 == cert.nu2;
  }

  // Checks that need the quotient ring.
  try {
    const QuotientRing q(groebner(inst.h));
    if (q.ideal().is_graded) {
      unsigned bound = static_cast<unsigned>(std::max(inst.f.degree(), 0));
      for (std::size_t i = 0; i < cert.blocks.size(); ++i) {
        const int dg = i == 0 ? 0 : std::max(inst.g[i - 1].degree(), 0);
        bound = std::max<unsigned>(bound, static_cast<unsigned>(dg) + 2 * q.basis_degree());
      }
      rep.degree_bound = static_cast<int>(bound);
      rep.degree_bound_ok = rep.max_cofactor_degree <= static_cast<int>(bound);
    }
    if (cert.mode == Mode::Nonnegative) {
      bool ok = cert.witnesses.size() == cert.blocks.size();
      for (std::size_t i = 0; ok && i < cert.blocks.size(); ++i) {
        if (cert.witnesses[i].size() != cert.blocks[i].size()) {
          ok = false;
          break;
        }
        for (std::size_t k = 0; k < cert.blocks[i].size(); ++k) {
          const Polynomial& r = cert.witnesses[i][k];
          if (!q.contains(cert.blocks[i][k].square - inst.f * r)) ok = false;
        }
      }
      rep.witnesses_ok = ok;
    }
  } catch (const Error& e) {
    rep.note = e.what();
  }
  return rep;
}

void write_report(std::ostream& os, const VerificationReport& r) {
  os << "verification: " << (r.ok() ? "OK" : "FAILED (" + r.first_failure() + ")") << '\n';
  os << "  identity: " << yes_no(r.identity_ok) << '\n';
  if (!r.identity_ok && !r.residual.empty()) os << "  residual: " << r.residual << '\n';
  os << "  weights nonnegative: " << yes_no(r.weights_ok) << '\n';
  os << "  degree bound: " << opt_str(r.degree_bound_ok);
  if (r.degree_bound >= 0) os << " (max deg p_j h_j " << r.max_cofactor_degree << " <= " << r.degree_bound << ')';
  os << '\n';
  if (r.witnesses_ok) os << "  divisibility witnesses: " << opt_str(r.witnesses_ok) << '\n';
  if (r.scalings_ok) os << "  scalings: " << opt_str(r.scalings_ok) << '\n';
  os << "  max bits: weights " << r.max_weight_bits << ", squares " << r.max_square_bits << ", cofactors "
     << r.max_cofactor_bits << '\n';
  for (const auto& w : r.warnings()) os << "  warning: check '" << w << "' failed\n";
  if (!r.note.empty()) os << "  note: " << r.note << '\n';
}

void write_report_kv(std::ostream& os, const VerificationReport& r) {
  os << "ok=" << (r.ok() ? 1 : 0) << '\n';
  os << "first_failure=" << r.first_failure() << '\n';
  os << "identity_ok=" << r.identity_ok << '\n';
  os << "weights_ok=" << r.weights_ok << '\n';
  os << "degree_bound_ok=" << opt_str(r.degree_bound_ok) << '\n';
  os << "degree_bound=" << r.degree_bound << '\n';
  os << "max_cofactor_degree=" << r.max_cofactor_degree << '\n';
  os << "witnesses_ok=" << opt_str(r.witnesses_ok) << '\n';
  os << "scalings_ok=" << opt_str(r.scalings_ok) << '\n';
  os << "max_weight_bits=" << r.max_weight_bits << '\n';
  os << "max_square_bits=" << r.max_square_bits << '\n';
  os << "max_cofactor_bits=" << r.max_cofactor_bits << '\n';
  os << "residual_terms=" << r.residual_terms << '\n';
}

BoundReport degree_bounds(const ProblemInstance& inst, const QuotientRing& q) {
  BoundReport b;
  b.deg_b = q.basis_degree();
  b.graded = q.ideal().is_graded;
  unsigned bound = static_cast<unsigned>(std::max(inst.f.degree(), 0));
  bound = std::max(bound, 2 * b.deg_b);
  unsigned d = static_cast<unsigned>(std::max(inst.f.degree(), 0));
  for (const auto& g : inst.g) {
    const auto dg = static_cast<unsigned>(std::max(g.degree(), 0));
    bound = std::max(bound, dg + 2 * b.deg_b);
    d = std::max(d, dg);
  }
  for (const auto& h : inst.h) d = std::max(d, static_cast<unsigned>(std::max(h.degree(), 0)));
  b.degree_bound = bound;
  b.hierarchy_order = (bound + 1) / 2;
  b.d_hat = 2 * (d + b.deg_b) + 1;
  return b;
}

BoundReport height_bound_formula(unsigned n, unsigned d, unsigned delta, unsigned tau, unsigned d_f, double c) {
  BoundReport b;
  b.constant = c;
  b.deg_b = delta;
  b.degree_bound = std::max(d_f, d + 2 * delta);
  b.hierarchy_order = (b.degree_bound + 1) / 2;
  b.d_hat = 2 * (d + delta) + 1;
  const double N = n;
  const double D = d;
  const double C = c * N * std::log2(N + 1);
  auto Cd = [&](double dd) { return c * N * std::log2(dd * (N + 1)); };
  const double dt = D + tau;
  const double dn = std::pow(D, N);

  HeightBounds s;
  s.d_hat = std::max<double>(d_f, D + 2.0 * delta) + 1;
  s.q = Cd(D) * std::pow(D, N - 1) * (dn * delta + d_f) * dt;
  s.q0 = s.q;
  s.nu0 = Cd(D) * std::pow(D, 2 * N - 1) * (dn * delta + d_f) * dt;
  s.nu1 = C * std::pow(D, N - 1) * (delta + d_f) * dt;
  s.omega = C * std::pow(D, N - 1) * d_f * dt;
  s.nu2 = s.q + Cd(s.d_hat) * std::pow(s.d_hat, N) * tau;
  b.strict_heights = s;

  HeightBounds z;
  z.d_hat = 2.0 * (d_f + delta) + 1;
  z.nu0 = Cd(D) * std::pow(D, 3 * N - 1) * (delta + d_f) * dt;
  z.q0 = z.nu0;
  z.nu1 = Cd(D) * std::pow(D, 2 * N - 1) * (delta + d_f) * dt;
  z.omega = z.nu1;
  z.q = z.nu1;
  z.nu2 = z.nu1 + Cd(z.d_hat) * std::pow(z.d_hat, N) * tau;
  b.nonneg_heights = z;
  return b;
}

namespace {

void heights(std::ostream& os, const char* label, const HeightBounds& h, bool kv) {
  auto up = [](double x) { return static_cast<long long>(std::ceil(x)); };
  if (kv) {
    os << label << ".nu0=" << up(h.nu0) << '\n' << label << ".q0=" << up(h.q0) << '\n';
    os << label << ".nu1=" << up(h.nu1) << '\n' << label << ".omega=" << up(h.omega) << '\n';
    os << label << ".q=" << up(h.q) << '\n' << label << ".nu2=" << up(h.nu2) << '\n';
    os << label << ".d_hat=" << up(h.d_hat) << '\n';
    return;
  }
  os << "  " << label << ": h(nu0) <= " << up(h.nu0) << ", h(q0) <= " << up(h.q0) << ", h(nu1) <= " << up(h.nu1)
     << ", h(omega) <= " << up(h.omega) << ", h(q_i) <= " << up(h.q) << ", h(nu2), h(p_j) <= " << up(h.nu2)
     << " (d_hat " << up(h.d_hat) << ")\n";
}

}  // namespace

void write_bounds(std::ostream& os, const BoundReport& b) {
  os << "deg(B) = " << b.deg_b << (b.graded ? " (graded basis)" : "") << '\n';
  os << "deg(p_j h_j) <= " << b.degree_bound << "; hierarchy order r = " << b.hierarchy_order << '\n';
  os << "d_hat = " << b.d_hat << '\n';
  if (b.strict_heights || b.nonneg_heights) {
    os << "height upper-bound formulas with user constant c = " << b.constant << " (diagnostic only):\n";
    if (b.strict_heights) heights(os, "strict", *b.strict_heights, false);
    if (b.nonneg_heights) heights(os, "nonneg", *b.nonneg_heights, false);
  }
}

void write_bounds_kv(std::ostream& os, const BoundReport& b) {
  os << "deg_b=" << b.deg_b << '\n';
  os << "graded=" << b.graded << '\n';
  os << "degree_bound=" << b.degree_bound << '\n';
  os << "hierarchy_order=" << b.hierarchy_order << '\n';
  os << "d_hat=" << b.d_hat << '\n';
  if (b.strict_heights || b.nonneg_heights) os << "constant=" << b.constant << '\n';
  if (b.strict_heights) heights(os, "strict", *b.strict_heights, true);
  if (b.nonneg_heights) heights(os, "nonneg", *b.nonneg_heights, true);
}

}  // namespace soscert
