#include "soscert/verify.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "soscert/io.hpp"
#include "test_util.hpp"

using namespace soscert;
using namespace soscert::testing;

namespace {

ProblemInstance load(const std::string& name) { return parse_problem(read_file(std::string(SOSCERT_TEST_DATA) + "/" + name)); }
Certificate load_cert(const std::string& name) {
  return parse_certificate(read_file(std::string(SOSCERT_TEST_DATA) + "/" + name));
}

ProblemInstance cube(unsigned n, bool linear_g) {
  ProblemInstance inst;
  std::string f;
  for (unsigned i = 0; i < n; ++i) inst.variables.push_back("x" + std::to_string(i + 1));
  for (unsigned i = 0; i < n; ++i) {
    const std::string v = inst.variables[i];
    inst.h.push_back(P(v + "^2 - " + v, inst.variables));
    f += (i ? "*" : "") + v;
  }
  inst.f = P(f + " + 1", inst.variables);
  if (linear_g) inst.g.push_back(P("1 - " + inst.variables[0], inst.variables));
  return inst;
}

}  // namespace

TEST(Verify, ReferenceCertificateFirstExample) {
  const VerificationReport r = verify_certificate(load("two_points.problem"), load_cert("two_points_reference.cert"));
  EXPECT_TRUE(r.identity_ok);
  EXPECT_TRUE(r.weights_ok);
  EXPECT_EQ(r.residual_terms, 0u);
  ASSERT_TRUE(r.degree_bound_ok.has_value());
  EXPECT_TRUE(*r.degree_bound_ok);
  EXPECT_EQ(r.degree_bound, 5);
  EXPECT_TRUE(r.ok());
}

TEST(Verify, ReferenceCertificatesSecondExample) {
  EXPECT_TRUE(verify_certificate(load("cusp_a.problem"), load_cert("cusp_a_reference.cert")).ok());
  const VerificationReport r = verify_certificate(load("cusp_x.problem"), load_cert("cusp_x_reference.cert"));
  EXPECT_TRUE(r.ok());
  ASSERT_TRUE(r.witnesses_ok.has_value());
  EXPECT_TRUE(*r.witnesses_ok);
}

TEST(Verify, NegatedWeight) {
  Certificate c = load_cert("two_points_reference.cert");
  c.blocks[0][1].weight = -c.blocks[0][1].weight;
  const VerificationReport r = verify_certificate(load("two_points.problem"), c);
  EXPECT_FALSE(r.weights_ok);
  EXPECT_FALSE(r.ok());
}

TEST(Verify, WeightFailureNamedWhenIdentityHolds) {
  // -w (s)^2 + w (s)^2 cancels, the identity survives.
  Certificate c = load_cert("two_points_reference.cert");
  c.blocks[0].push_back({Rational(-1), P("x")});
  c.blocks[0].push_back({Rational(1), P("x")});
  const VerificationReport r = verify_certificate(load("two_points.problem"), c);
  EXPECT_TRUE(r.identity_ok);
  EXPECT_FALSE(r.weights_ok);
  EXPECT_EQ(r.first_failure(), "weights");
}

TEST(Verify, PerturbedCofactor) {
  Certificate c = load_cert("two_points_reference.cert");
  c.cofactors[0] += P("y");
  const VerificationReport r = verify_certificate(load("two_points.problem"), c);
  EXPECT_FALSE(r.identity_ok);
  EXPECT_EQ(r.first_failure(), "identity");
  EXPECT_GT(r.residual_terms, 0u);
}

TEST(Verify, RandomSingleCoefficientMutations) {
  const ProblemInstance inst = load("two_points.problem");
  const Certificate base = load_cert("two_points_reference.cert");
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> delta(1, 50);
  for (int trial = 0; trial < 60; ++trial) {
    Certificate c = base;
    const Rational d(delta(rng), delta(rng));
    Polynomial* target = nullptr;
    Rational* weight = nullptr;
    switch (trial % 3) {
      case 0: {
        auto& b = c.blocks[rng() % c.blocks.size()];
        weight = &b[rng() % b.size()].weight;
        break;
      }
      case 1: {
        auto& b = c.blocks[rng() % c.blocks.size()];
        target = &b[rng() % b.size()].square;
        break;
      }
      default:
        target = &c.cofactors[rng() % c.cofactors.size()];
    }
    if (weight) {
      *weight += d;
    } else {
      auto it = target->terms().begin();
      std::advance(it, rng() % target->size());
      target->add_term(it->first, d);
    }
    EXPECT_FALSE(verify_certificate(inst, c).identity_ok) << "trial " << trial;
  }
}

TEST(Verify, StructuralMismatchReported) {
  Certificate c = load_cert("two_points_reference.cert");
  c.cofactors.pop_back();
  VerificationReport r = verify_certificate(load("two_points.problem"), c);
  EXPECT_FALSE(r.identity_ok);
  EXPECT_FALSE(r.note.empty());
  c = load_cert("two_points_reference.cert");
  c.variables = {"u", "v"};
  r = verify_certificate(load("two_points.problem"), c);
  EXPECT_FALSE(r.identity_ok);
}

TEST(Verify, KeyValueReport) {
  std::ostringstream os;
  write_report_kv(os, verify_certificate(load("two_points.problem"), load_cert("two_points_reference.cert")));
  EXPECT_NE(os.str().find("identity_ok=1"), std::string::npos);
  EXPECT_NE(os.str().find("ok=1"), std::string::npos);
}

TEST(DegreeBounds, FirstExample) {
  const ProblemInstance inst = load("two_points.problem");
  const BoundReport b = degree_bounds(inst, QuotientRing(groebner(inst.h)));
  EXPECT_TRUE(b.graded);
  EXPECT_EQ(b.deg_b, 2u);
  EXPECT_EQ(b.degree_bound, 5u);
  EXPECT_EQ(b.hierarchy_order, 3u);
}

TEST(DegreeBounds, BinaryCube) {
  for (unsigned n = 1; n <= 4; ++n) {
    const ProblemInstance with_g = cube(n, true);
    const BoundReport b = degree_bounds(with_g, QuotientRing(groebner(with_g.h)));
    EXPECT_EQ(b.deg_b, n);
    EXPECT_EQ(b.hierarchy_order, n + 1);
    const ProblemInstance no_g = cube(n, false);
    EXPECT_EQ(degree_bounds(no_g, QuotientRing(groebner(no_g.h))).hierarchy_order, n);
  }
}

TEST(DegreeBounds, PointIdealLinearF) {
  ProblemInstance inst;
  inst.variables = {"x", "y"};
  inst.f = P("x + 2*y");
  inst.h = {P("x - 1"), P("y + 2")};
  const BoundReport b = degree_bounds(inst, QuotientRing(groebner(inst.h)));
  EXPECT_EQ(b.deg_b, 0u);
  EXPECT_EQ(b.degree_bound, 1u);
}

TEST(DegreeBounds, ConstantFUsesInequalities) {
  ProblemInstance inst;
  inst.variables = {"x"};
  inst.f = P("5", {"x"});
  inst.g = {P("x^3", {"x"})};
  inst.h = {P("x^2 - 1", {"x"})};
  EXPECT_EQ(degree_bounds(inst, QuotientRing(groebner(inst.h))).degree_bound, 5u);
}

TEST(DegreeBounds, MonotoneInDegrees) {
  ProblemInstance inst;
  inst.variables = {"x"};
  inst.h = {P("x^3 - x", {"x"})};
  const QuotientRing q(groebner(inst.h));
  unsigned prev = 0;
  for (int d = 0; d <= 8; ++d) {
    inst.f = P("x^" + std::to_string(d) + " + 1", {"x"});
    const unsigned b = degree_bounds(inst, q).degree_bound;
    EXPECT_GE(b, prev);
    prev = b;
  }
  inst.g = {P("x", {"x"})};
  EXPECT_GE(degree_bounds(inst, q).degree_bound, prev);
}

TEST(HeightFormula, DHat) {
  const BoundReport b = height_bound_formula(2, 2, 2, 2, 2, 1.0);
  EXPECT_EQ(b.d_hat, 9u);
  ASSERT_TRUE(b.strict_heights && b.nonneg_heights);
  EXPECT_TRUE(std::isfinite(b.strict_heights->nu0));
  EXPECT_GT(b.strict_heights->nu0, 0);
}

TEST(HeightFormula, MonotoneGrid) {
  auto fields = [](const HeightBounds& h) { return std::vector<double>{h.nu0, h.nu1, h.omega, h.q0, h.q, h.nu2}; };
  for (double c : {0.5, 1.0, 3.0})
    for (unsigned d : {1u, 2u, 4u})
      for (unsigned tau : {1u, 8u, 64u}) {
        const BoundReport b = height_bound_formula(2, d, d + 1, tau, d, c);
        const BoundReport bc = height_bound_formula(2, d, d + 1, tau, d, 2 * c);
        const BoundReport bd = height_bound_formula(2, d + 1, d + 1, tau, d, c);
        const BoundReport bt = height_bound_formula(2, d, d + 1, tau + 1, d, c);
        for (auto pick : {&BoundReport::strict_heights, &BoundReport::nonneg_heights}) {
          const auto base = fields(*(b.*pick));
          const auto dc = fields(*(bc.*pick));
          const auto dd = fields(*(bd.*pick));
          const auto dt = fields(*(bt.*pick));
          for (std::size_t k = 0; k < base.size(); ++k) {
            EXPECT_GE(dc[k], 2 * base[k] - 1e-9);
            EXPECT_GE(dd[k], base[k]);
            EXPECT_GE(dt[k], base[k]);
          }
        }
      }
}
