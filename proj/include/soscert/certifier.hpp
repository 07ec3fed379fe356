#pragma once

#include <vector>

#include "soscert/certificate.hpp"
#include "soscert/quotient.hpp"
#include "soscert/variety.hpp"

namespace soscert {

// Quotient data shared by the certification paths.
struct Context {
  QuotientRing q;
  VarietyData var;
  // Radical quotient and its variety (with idempotents); equal to q/var when I is radical.
  QuotientRing qj;
  VarietyData varj;
  bool radical = true;
};

// Throws InvalidInput when h is empty or a radical declaration is wrong.
Context analyse(const ProblemInstance& inst);

struct Perturbation {
  // blocks[i] multiplies g_{i+1}.
  std::vector<std::vector<WeightedSquare>> blocks;
  Polynomial f_tilde;
};

// f~ = f - sum rho_xi u_xi^2 g_{i_xi} is positive at every real root.
// Throws NotStrictlyPositiveOnS, PrecisionExceeded.
Perturbation perturb(const ProblemInstance& inst, const Polynomial& f, const Context& ctx);

// Newton square roots theta_1..theta_m modulo the successive quotients of the chain.
std::vector<Polynomial> hensel_levels(const std::vector<QuotientRing>& chain, const Polynomial& theta,
                                      const Polynomial& theta0);
Polynomial hensel_sqrt(const std::vector<QuotientRing>& chain, const Polynomial& theta,
                       const Polynomial& theta0);

// Weighted squares with p == sum w q^2 modulo I, p positive on V_R(I).
std::vector<WeightedSquare> sos_modulo(const Polynomial& p, const Context& ctx, const Options& opt);

// Radical case through the rounded Gram matrix.
std::vector<WeightedSquare> sos_modulo_radical(const Polynomial& p, const QuotientRing& q,
                                               const VarietyData& var, const Options& opt);

// Square roots over the radical, one of them lifted to the powers of the radical.
std::vector<WeightedSquare> sos_modulo_nonradical(const Polynomial& p, const Context& ctx,
                                                  const Options& opt);

Certificate certify_strict(const ProblemInstance& inst);
Certificate certify_strict(const ProblemInstance& inst, const Context& ctx);
Certificate certify_strict_nonradical(const ProblemInstance& inst, const Context& ctx);
Certificate certify_nonneg(const ProblemInstance& inst);

// Dispatch on options.mode and options.engine.
Certificate certify(const ProblemInstance& inst);

// Cofactors of f - sum (sum w q^2) g_i; sets cert.cofactors and the scalings.
void attach_cofactors(const ProblemInstance& inst, const QuotientRing& q, Certificate& cert);

}  // namespace soscert
