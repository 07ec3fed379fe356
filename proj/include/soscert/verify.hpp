#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "soscert/certificate.hpp"
#include "soscert/quotient.hpp"

namespace soscert {

struct VerificationReport {
  bool identity_ok = false;
  bool weights_ok = false;
  // Set when the basis is graded and the quotient could be built.
  std::optional<bool> degree_bound_ok;
  // Nonnegative mode: every square has a witness r in span(B) with q - f r in I.
  std::optional<bool> witnesses_ok;
  // Stored nu0/nu1/nu2 agree with the integer form of the certificate.
  std::optional<bool> scalings_ok;
  int degree_bound = -1;
  int max_cofactor_degree = -1;
  std::size_t max_weight_bits = 0;
  std::size_t max_square_bits = 0;
  std::size_t max_cofactor_bits = 0;
  std::size_t residual_terms = 0;
  std::string residual;
  std::string note;

  // identity and weights; the optional checks are reported as warnings.
  bool ok() const;
  // Name of the first failing check, empty when ok().
  std::string first_failure() const;
  std::vector<std::string> warnings() const;
};

// Never throws on mathematical failure; structural mismatches (block or
// cofactor counts, variable sets) are reported as identity failures.
VerificationReport verify_certificate(const ProblemInstance& inst, const Certificate& cert);

void write_report(std::ostream& os, const VerificationReport& r);
void write_report_kv(std::ostream& os, const VerificationReport& r);

struct HeightBounds {
  double nu0 = 0;
  double nu1 = 0;
  double omega = 0;
  double q0 = 0;
  double q = 0;
  double nu2 = 0;
  double d_hat = 0;
};

struct BoundReport {
  unsigned deg_b = 0;
  // max{deg f, deg g_i + 2 deg B} over g_0 = 1, g_1, ..., g_r.
  unsigned degree_bound = 0;
  unsigned hierarchy_order = 0;
  // 2 (d + deg B) + 1 with d the largest input degree.
  unsigned d_hat = 0;
  bool graded = false;
  std::optional<HeightBounds> strict_heights;
  std::optional<HeightBounds> nonneg_heights;
  double constant = 0;
};

BoundReport degree_bounds(const ProblemInstance& inst, const QuotientRing& q);

// Height expressions with C(n) = c n log2(n+1) and C(n;d) = c n log2(d(n+1)).
// deg B is taken equal to delta.
BoundReport height_bound_formula(unsigned n, unsigned d, unsigned delta, unsigned tau, unsigned d_f, double c);

void write_bounds(std::ostream& os, const BoundReport& b);
void write_bounds_kv(std::ostream& os, const BoundReport& b);

}  // namespace soscert
