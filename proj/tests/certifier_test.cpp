#include "soscert/certifier.hpp"

#include <gtest/gtest.h>

#include "soscert/errors.hpp"
#include "test_util.hpp"

using namespace soscert;
using namespace soscert::testing;

namespace {

ProblemInstance instance(const std::string& f, const std::vector<std::string>& g,
                         const std::vector<std::string>& h, const std::vector<std::string>& vars = {"x", "y"}) {
  ProblemInstance inst;
  inst.variables = vars;
  inst.f = P(f, vars);
  for (const auto& s : g) inst.g.push_back(P(s, vars));
  for (const auto& s : h) inst.h.push_back(P(s, vars));
  return inst;
}

Polynomial X(const std::string& s) { return P(s, {"x"}); }

// f - sum w q^2 g_i - sum p_j h_j expanded over Q.
Polynomial residual(const ProblemInstance& inst, const Certificate& c) {
  const std::size_t n = inst.nvars();
  Polynomial r = inst.f;
  for (std::size_t i = 0; i < c.blocks.size(); ++i) {
    const Polynomial g = i == 0 ? Polynomial(n, Rational(1)) : inst.g[i - 1];
    for (const auto& s : c.blocks[i]) {
      EXPECT_GE(sgn(s.weight), 0);
      r -= s.square * s.square * g * s.weight;
    }
  }
  EXPECT_EQ(c.cofactors.size(), inst.h.size());
  for (std::size_t j = 0; j < c.cofactors.size(); ++j) r -= c.cofactors[j] * inst.h[j];
  return r;
}

void expect_in_span(const QuotientRing& q, const Certificate& c) {
  for (const auto& b : c.blocks)
    for (const auto& s : b) EXPECT_EQ(q.normal_form(s.square), s.square);
}

}  // namespace

TEST(Perturb, ExcludedRootGetsWeightTwo) {
  auto inst = instance("x", {"x"}, {"x^2-1"}, {"x"});
  const Context ctx = analyse(inst);
  const Perturbation p = perturb(inst, inst.f, ctx);
  ASSERT_EQ(p.blocks.size(), 1u);
  ASSERT_EQ(p.blocks[0].size(), 1u);
  EXPECT_EQ(p.blocks[0][0].weight, Rational(2));
  // u_{-1} = (1 - x)/2 evaluates to 1 at -1 and 0 at 1.
  EXPECT_EQ(p.blocks[0][0].square, P("1/2 - 1/2*x", {"x"}));
  std::vector<Rational> at_m1{Rational(-1)};
  std::vector<Rational> at_p1{Rational(1)};
  EXPECT_EQ(evaluate<Rational>(p.f_tilde, at_m1), Rational(1));
  EXPECT_EQ(evaluate<Rational>(p.f_tilde, at_p1), Rational(1));
}

TEST(Perturb, NothingExcluded) {
  auto inst = instance("x+y+3", {"y"}, {"x^2-1", "y^2-x-2"});
  const Context ctx = analyse(inst);
  const Perturbation p = perturb(inst, inst.f, ctx);
  EXPECT_TRUE(p.blocks[0].empty());
  EXPECT_EQ(p.f_tilde, ctx.q.normal_form(inst.f));
}

TEST(Perturb, PositiveOnAllRealRootsNeedsNoBump) {
  // f > 0 everywhere on V_R, so excluded points need nothing.
  auto inst = instance("x+3", {"x"}, {"x^2-1"}, {"x"});
  const Perturbation p = perturb(inst, inst.f, analyse(inst));
  EXPECT_TRUE(p.blocks[0].empty());
}

TEST(Perturb, NotStrictlyPositive) {
  auto inst = instance("x-1", {"x"}, {"x^2-1"}, {"x"});
  EXPECT_THROW(perturb(inst, inst.f, analyse(inst)), NotStrictlyPositiveOnS);
}

TEST(Hensel, OneStep) {
  const QuotientRing j = make_ring({"x"}, {"x"});
  const auto chain = ideal_power_chain(j.ideal(), make_ring({"x^2"}, {"x"}));
  ASSERT_EQ(chain.size(), 1u);
  EXPECT_EQ(hensel_sqrt(chain, X("1+x"), X("1")), X("1+x/2"));
}

TEST(Hensel, TwoSteps) {
  const QuotientRing j = make_ring({"x"}, {"x"});
  const auto chain = ideal_power_chain(j.ideal(), make_ring({"x^3"}, {"x"}));
  ASSERT_EQ(chain.size(), 2u);
  const auto levels = hensel_levels(chain, X("1+x"), X("1"));
  ASSERT_EQ(levels.size(), 2u);
  EXPECT_EQ(levels[0], X("1+x/2"));
  EXPECT_EQ(levels[1], X("1 + x/2 - x^2/8 + x^3/16"));
  for (std::size_t k = 0; k < levels.size(); ++k)
    EXPECT_TRUE(chain[k].contains(levels[k] * levels[k] - X("1+x")));
}

TEST(Hensel, ExactSquareIsFixed) {
  const QuotientRing j = make_ring({"x", "y"});
  const auto chain = ideal_power_chain(j.ideal(), make_ring({"x^3", "y^3"}));
  const Polynomial t0 = P("1+x");
  for (const auto& t : hensel_levels(chain, t0 * t0, t0)) EXPECT_EQ(t, t0);
}

TEST(Hensel, VanishingStartThrows) {
  const QuotientRing j = make_ring({"x"}, {"x"});
  const auto chain = ideal_power_chain(j.ideal(), make_ring({"x^2"}, {"x"}));
  EXPECT_THROW(hensel_sqrt(chain, X("x"), X("0")), NotInvertible);
}

TEST(CertifyStrict, ConstantOne) {
  auto inst = instance("1", {}, {"x^2-1", "y^2-4"});
  const Certificate c = certify_strict(inst);
  ASSERT_EQ(c.blocks.size(), 1u);
  ASSERT_EQ(c.blocks[0].size(), 1u);
  EXPECT_EQ(c.blocks[0][0].weight, Rational(1));
  EXPECT_EQ(c.blocks[0][0].square, P("1"));
  for (const auto& p : c.cofactors) EXPECT_TRUE(p.is_zero());
  EXPECT_TRUE(residual(inst, c).is_zero());
}

TEST(CertifyStrict, XPlusThree) {
  auto inst = instance("x+3", {}, {"x^2-1"}, {"x"});
  const Certificate c = certify_strict(inst);
  ASSERT_EQ(c.blocks[0].size(), 2u);
  EXPECT_EQ(c.blocks[0][0].weight, frac(3, 2));
  EXPECT_EQ(c.blocks[0][1].weight, frac(4, 3));
  EXPECT_EQ(c.blocks[0][0].square, P("1 + x/3", {"x"}));
  EXPECT_EQ(c.blocks[0][1].square, P("x", {"x"}));
  EXPECT_TRUE(residual(inst, c).is_zero());
}

TEST(CertifyStrict, Example81) {
  auto inst = instance("x+y+3", {"y"}, {"x^2-1", "y^2-x-2"});
  const Certificate c = certify_strict(inst);
  EXPECT_TRUE(residual(inst, c).is_zero());
  expect_in_span(make_ring({"x^2-1", "y^2-x-2"}), c);
  for (std::size_t j = 0; j < c.cofactors.size(); ++j)
    if (!c.cofactors[j].is_zero()) EXPECT_LE(c.cofactors[j].degree() + inst.h[j].degree(), 5);
}

TEST(CertifyStrict, PerturbedExample) {
  auto inst = instance("x", {"x"}, {"x^2-1"}, {"x"});
  const Certificate c = certify_strict(inst);
  EXPECT_TRUE(residual(inst, c).is_zero());
  ASSERT_EQ(c.blocks.size(), 2u);
  EXPECT_FALSE(c.blocks[1].empty());
}

TEST(CertifyStrict, ComplexOnlyVariety) {
  auto inst = instance("x", {}, {"x^2+1"}, {"x"});
  const Certificate c = certify_strict(inst);
  EXPECT_TRUE(residual(inst, c).is_zero());
}

TEST(CertifyStrict, Deterministic) {
  auto inst = instance("x+y+3", {"y"}, {"x^2-1", "y^2-x-2"});
  const Certificate a = certify_strict(inst);
  const Certificate b = certify_strict(inst);
  ASSERT_EQ(a.blocks.size(), b.blocks.size());
  for (std::size_t i = 0; i < a.blocks.size(); ++i) {
    ASSERT_EQ(a.blocks[i].size(), b.blocks[i].size());
    for (std::size_t k = 0; k < a.blocks[i].size(); ++k) {
      EXPECT_EQ(a.blocks[i][k].weight, b.blocks[i][k].weight);
      EXPECT_EQ(a.blocks[i][k].square, b.blocks[i][k].square);
    }
  }
}

TEST(CertifyStrict, MissingEqualities) {
  auto inst = instance("1", {}, {});
  EXPECT_THROW(certify_strict(inst), InvalidInput);
}

TEST(CertifyStrict, WrongRadicalDeclaration) {
  auto inst = instance("1+x", {}, {"x^2"}, {"x"});
  inst.radical = true;
  EXPECT_THROW(analyse(inst), InvalidInput);
}

TEST(CertifyNonradical, DoubleRoot) {
  auto inst = instance("1+x", {}, {"x^2"}, {"x"});
  const Context ctx = analyse(inst);
  EXPECT_FALSE(ctx.radical);
  const Certificate c = certify_strict_nonradical(inst, ctx);
  ASSERT_EQ(c.blocks[0].size(), 1u);
  EXPECT_EQ(c.blocks[0][0].weight, Rational(1));
  EXPECT_EQ(c.blocks[0][0].square, P("1+x/2", {"x"}));
  ASSERT_EQ(c.cofactors.size(), 1u);
  EXPECT_EQ(c.cofactors[0], P("-1/4", {"x"}));
  EXPECT_TRUE(residual(inst, c).is_zero());
}

TEST(CertifyNonradical, TripleRoot) {
  auto inst = instance("2+x", {}, {"x^3"}, {"x"});
  const Context ctx = analyse(inst);
  const Certificate c = certify_strict_nonradical(inst, ctx);
  EXPECT_TRUE(residual(inst, c).is_zero());
  expect_in_span(ctx.q, c);
}

TEST(CertifyNonradical, RadicalDelegates) {
  auto inst = instance("x+3", {}, {"x^2-1"}, {"x"});
  const Context ctx = analyse(inst);
  const Certificate a = certify_strict_nonradical(inst, ctx);
  const Certificate b = certify_strict(inst, ctx);
  ASSERT_EQ(a.blocks[0].size(), b.blocks[0].size());
  for (std::size_t k = 0; k < a.blocks[0].size(); ++k) EXPECT_EQ(a.blocks[0][k].square, b.blocks[0][k].square);
}

TEST(CertifyNonradical, MixedPointsWithComplexPair) {
  auto inst = instance("x+y+9", {}, {"x^3-y^2", "x^2-2*x+y^2"});
  const Certificate c = certify_strict(inst);
  EXPECT_TRUE(residual(inst, c).is_zero());
}

TEST(CertifyNonradical, WithInequality) {
  auto inst = instance("x", {"x"}, {"x^2*(x-1)"}, {"x"});
  // V_R = {0, 1}; S = V_R but f(0) = 0, so strict mode must fail.
  EXPECT_THROW(certify_strict(inst), NotStrictlyPositiveOnS);
  auto inst2 = instance("x+1", {"-x"}, {"x*(x-1)^2"}, {"x"});
  const Certificate c = certify_strict(inst2);
  EXPECT_TRUE(residual(inst2, c).is_zero());
}

TEST(CertifyNonneg, Example82) {
  auto inst = instance("x", {}, {"x^3-y^2", "x^2-2*x+y^2"});
  inst.options.mode = Mode::Nonnegative;
  const Context ctx = analyse(inst);
  const CoprimalityWitness w = coprimality_witness(ctx.q, inst.f);
  EXPECT_EQ(w.gamma, Integer(2));
  EXPECT_EQ(w.a, P("1+x"));
  const Certificate c = certify_nonneg(inst);
  EXPECT_EQ(c.mode, Mode::Nonnegative);
  EXPECT_TRUE(residual(inst, c).is_zero());
  ASSERT_EQ(c.witnesses.size(), c.blocks.size());
  for (std::size_t i = 0; i < c.blocks.size(); ++i)
    for (std::size_t k = 0; k < c.blocks[i].size(); ++k) {
      const Polynomial& r = c.witnesses[i][k];
      EXPECT_EQ(ctx.q.normal_form(r), r);
      EXPECT_TRUE(ctx.q.contains(c.blocks[i][k].square - inst.f * r));
    }
}

TEST(CertifyNonneg, ConditionFails) {
  auto inst = instance("x", {}, {"x^2"}, {"x"});
  inst.options.mode = Mode::Nonnegative;
  EXPECT_THROW(certify(inst), ConditionFailed);
}

TEST(CertifyNonneg, StrictInputAlsoWorks) {
  auto inst = instance("x+y+3", {"y"}, {"x^2-1", "y^2-x-2"});
  inst.options.mode = Mode::Nonnegative;
  const Certificate c = certify(inst);
  EXPECT_TRUE(residual(inst, c).is_zero());
}

TEST(CertifyNonneg, VanishingOnBoundary) {
  // f = x^2 vanishes at 0 and is positive at the two other roots.
  auto inst = instance("x^2", {}, {"x^3-x"}, {"x"});
  inst.options.mode = Mode::Nonnegative;
  const Certificate c = certify(inst);
  EXPECT_TRUE(residual(inst, c).is_zero());
}

TEST(CertifyNonneg, NegativeSomewhereFails) {
  auto inst = instance("x", {}, {"x^3-x"}, {"x"});
  inst.options.mode = Mode::Nonnegative;
  EXPECT_THROW(certify(inst), ConditionFailed);
}

TEST(IntegerForm, ScalingsReproduceTheIdentity) {
  auto inst = instance("x", {"x"}, {"x^2-1"}, {"x"});
  const Certificate c = certify_strict(inst);
  const IntegerForm f = integer_form(c);
  Polynomial r = inst.f;
  for (std::size_t k = 0; k < f.q0.size(); ++k) r -= f.q0[k] * f.q0[k] * Rational(1, f.nu0[k]);
  for (std::size_t i = 0; i < f.q.size(); ++i)
    for (std::size_t k = 0; k < f.q[i].size(); ++k)
      r -= f.q[i][k] * f.q[i][k] * inst.g[i] * Rational(f.omega[i][k]) * Rational(1, f.nu1);
  for (std::size_t j = 0; j < f.p.size(); ++j) r -= f.p[j] * inst.h[j] * Rational(1, f.nu2);
  EXPECT_TRUE(r.is_zero()) << to_string(r);
  for (const auto& q : f.q0) EXPECT_EQ(lcm_denominator(q), Integer(1));
  for (const auto& p : f.p) EXPECT_EQ(lcm_denominator(p), Integer(1));
  EXPECT_EQ(c.nu1, f.nu1);
}
