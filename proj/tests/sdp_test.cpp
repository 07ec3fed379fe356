#include "soscert/sdp.hpp"

#include <gtest/gtest.h>

#include <sstream>

#include "soscert/certifier.hpp"
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

ProblemInstance example81() { return instance("x+y+3", {"y"}, {"x^2-1", "y^2-x-2"}); }

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
  for (std::size_t j = 0; j < c.cofactors.size(); ++j) r -= c.cofactors[j] * inst.h[j];
  return r;
}

// Affine residual recomputed from the monomial expansion, independent of prob.a.
double expansion_residual(const ProblemInstance& inst, const SdpProblem& prob, const SolverResult& res) {
  const std::size_t n = inst.nvars();
  RealPolynomial r = convert<double>(inst.f);
  for (std::size_t i = 0; i < prob.blocks(); ++i) {
    const auto& m = prob.block_monomials[i];
    RealPolynomial gram(n);
    for (std::size_t k = 0; k < m.size(); ++k)
      for (std::size_t l = 0; l < m.size(); ++l)
        gram.add_term(m[k] * m[l], res.blocks[i](static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)));
    const RealPolynomial g = i == 0 ? RealPolynomial(n, 1.0) : convert<double>(inst.g[i - 1]);
    r -= gram * g;
  }
  for (std::size_t j = 0; j < prob.cofactor_monomials.size(); ++j) {
    RealPolynomial p(n);
    for (std::size_t k = 0; k < prob.cofactor_monomials[j].size(); ++k)
      p.add_term(prob.cofactor_monomials[j][k], res.cofactors[j](static_cast<Eigen::Index>(k)));
    r -= p * convert<double>(inst.h[j]);
  }
  double s = 0;
  for (const auto& [m, c] : r.terms()) s += c * c;
  return std::sqrt(s);
}

}  // namespace

TEST(Formulate, Example81Sizes) {
  const auto inst = example81();
  const QuotientRing q(groebner(inst.h));
  const SdpProblem prob = formulate(inst, q, {2, 2});
  ASSERT_EQ(prob.blocks(), 2u);
  EXPECT_EQ(prob.block_size(0), 6u);
  EXPECT_EQ(prob.block_size(1), 6u);
  EXPECT_EQ(prob.degree, 5u);
  ASSERT_EQ(prob.cofactor_monomials.size(), 2u);
  // Degree caps 5 - 2 = 3: ten monomials each.
  EXPECT_EQ(prob.cofactor_monomials[0].size(), 10u);
  EXPECT_EQ(prob.cofactor_monomials[1].size(), 10u);
  EXPECT_EQ(prob.rows.size(), 21u);
}

TEST(Formulate, DefaultOrdersAreBasisDegree) {
  const auto inst = instance("x+3", {}, {"x^2-1"}, {"x"});
  const QuotientRing q(groebner(inst.h));
  const SdpProblem prob = formulate(inst, q, {});
  ASSERT_EQ(prob.blocks(), 1u);
  EXPECT_EQ(prob.orders[0], 1u);
  EXPECT_EQ(prob.block_size(0), 2u);
}

TEST(Formulate, OrderTooSmall) {
  const auto inst = example81();
  const QuotientRing q(groebner(inst.h));
  EXPECT_THROW(formulate(inst, q, {1, 2}), InvalidInput);
  EXPECT_THROW(formulate(inst, q, {2, 2, 2}), InvalidInput);
  EXPECT_EQ(formulate(inst, q, {3}).orders, (std::vector<unsigned>{3, 3}));
}

TEST(Formulate, NotGraded) {
  // x*y - 1 and y^2 - 1: the Groebner basis adds x - y with no degree-1 member of the span.
  const auto inst = instance("1", {}, {"x*y-1", "y^2-1"});
  const QuotientRing q(groebner(inst.h));
  ASSERT_FALSE(q.ideal().is_graded);
  EXPECT_THROW(formulate(inst, q, {}), NotGraded);
}

TEST(Formulate, ScaledSvecRoundTrip) {
  Eigen::MatrixXd m(3, 3);
  m << 1, 2, 3, 2, 5, 6, 3, 6, 9;
  const auto v = svec_scaled(m);
  EXPECT_NEAR(std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0)), m.norm(), 1e-12);
  EXPECT_TRUE(unsvec_scaled(v.data(), 3).isApprox(m));
}

TEST(Solver, Example81Feasible) {
  const auto inst = example81();
  const QuotientRing q(groebner(inst.h));
  const SdpProblem prob = formulate(inst, q, {2, 2});
  const SolverResult res = solve_feasibility(prob, 0.05, 20000, 1e-9);
  EXPECT_LT(res.residual, 1e-8);
  EXPECT_LT(expansion_residual(inst, prob, res), 1e-8);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(res.blocks[0]);
  EXPECT_GE(es.eigenvalues().minCoeff(), 0.05 - 1e-9);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es1(res.blocks[1]);
  EXPECT_GE(es1.eigenvalues().minCoeff(), -1e-9);
}

TEST(Solver, NegativeConstantInfeasible) {
  const auto inst = instance("-1", {}, {"x^2-1"}, {"x"});
  const QuotientRing q(groebner(inst.h));
  const SdpProblem prob = formulate(inst, q, {});
  EXPECT_THROW(solve_feasibility(prob, 0.0, 20000, 1e-9), Infeasible);
  EXPECT_THROW(maximize_lambda(prob, 20000, 1e-9), Infeasible);
}

TEST(Solver, LambdaBeyondMaximum) {
  // 1 = Q_00 + 2 Q_01 x + Q_11 x^2 mod x^2 - 1, so lambda <= 1.
  const auto inst = instance("1", {}, {"x^2-1"}, {"x"});
  const QuotientRing q(groebner(inst.h));
  const SdpProblem prob = formulate(inst, q, {});
  EXPECT_THROW(solve_feasibility(prob, 3.0, 20000, 1e-9), Infeasible);
}

TEST(Solver, BisectionIsDownClosed) {
  const auto inst = example81();
  const QuotientRing q(groebner(inst.h));
  const SdpProblem prob = formulate(inst, q, {2, 2});
  std::vector<std::pair<double, bool>> probes;
  const SolverResult res = maximize_lambda(prob, 20000, 1e-9, &probes);
  EXPECT_GT(res.lambda, 0);
  double max_ok = 0;
  double min_fail = std::numeric_limits<double>::infinity();
  for (const auto& [lam, ok] : probes) {
    if (ok) max_ok = std::max(max_ok, lam);
    else min_fail = std::min(min_fail, lam);
  }
  EXPECT_LT(max_ok, min_fail);
  EXPECT_DOUBLE_EQ(res.lambda, max_ok);
}

TEST(Solver, ConstantOneSingleEntry) {
  const auto inst = instance("1", {}, {"x-1"}, {"x"});
  const QuotientRing q(groebner(inst.h));
  const SdpProblem prob = formulate(inst, q, {0});
  ASSERT_EQ(prob.blocks(), 1u);
  EXPECT_EQ(prob.block_size(0), 1u);
  const SolverResult res = maximize_lambda(prob, 20000, 1e-9);
  EXPECT_DOUBLE_EQ(res.lambda, 1.0);
  EXPECT_NEAR(res.blocks[0](0, 0), 1.0, 1e-9);
}

TEST(SdpCertify, ConstantOne) {
  const auto inst = instance("1", {}, {"x-1"}, {"x"});
  SdpCertifyStats st;
  const Certificate c = sdp_certify(inst, {0}, &st);
  EXPECT_EQ(st.passes, 0);
  ASSERT_EQ(c.blocks[0].size(), 1u);
  EXPECT_EQ(c.blocks[0][0].weight, Rational(1));
  EXPECT_TRUE(residual(inst, c).is_zero());
}

TEST(SdpCertify, Example81) {
  const auto inst = example81();
  SdpCertifyStats st;
  const Certificate c = sdp_certify(inst, {2, 2}, &st);
  EXPECT_TRUE(residual(inst, c).is_zero());
  EXPECT_GT(st.lambda, 0);
  EXPECT_GE(st.passes, 1);
  const QuotientRing q(groebner(inst.h));
  for (const auto& b : c.blocks)
    for (const auto& s : b) {
      EXPECT_LE(s.square.degree(), 2);
      EXPECT_EQ(q.normal_form(s.square), s.square);
    }
  for (const auto& p : c.cofactors) EXPECT_LE(p.degree(), 3);
}

TEST(SdpCertify, Example82OnA) {
  const auto inst = instance("1+x", {}, {"x^3-y^2", "x^2-2*x+y^2"});
  const Certificate c = sdp_certify(inst, {});
  ASSERT_EQ(c.blocks.size(), 1u);
  EXPECT_TRUE(residual(inst, c).is_zero());
}

TEST(SdpCertify, ThroughDispatch) {
  auto inst = example81();
  inst.options.engine = Engine::Sdp;
  EXPECT_TRUE(residual(inst, certify(inst)).is_zero());
  inst.options.mode = Mode::Nonnegative;
  const Certificate c = certify(inst);
  EXPECT_EQ(c.mode, Mode::Nonnegative);
  EXPECT_TRUE(residual(inst, c).is_zero());
}

TEST(SdpCertify, NonnegExample82) {
  auto inst = instance("x", {}, {"x^3-y^2", "x^2-2*x+y^2"});
  inst.options.mode = Mode::Nonnegative;
  inst.options.engine = Engine::Sdp;
  EXPECT_TRUE(residual(inst, certify(inst)).is_zero());
}

TEST(SdpText, ResultRoundTrip) {
  const auto inst = example81();
  const QuotientRing q(groebner(inst.h));
  const SdpProblem prob = formulate(inst, q, {2, 2});
  const SolverResult res = solve_feasibility(prob, 0.05, 20000, 1e-9);
  std::stringstream ss;
  write_sdp_result(ss, res);
  const SolverResult back = read_sdp_result(ss, prob);
  ASSERT_EQ(back.blocks.size(), 2u);
  EXPECT_TRUE(back.blocks[0].isApprox(res.blocks[0], 1e-14));
  EXPECT_NEAR(back.residual, res.residual, 1e-9);
  std::stringstream dump;
  write_sdp_problem(dump, prob);
  EXPECT_NE(dump.str().find("blocks 2 6 6"), std::string::npos);
  EXPECT_NE(dump.str().find("constraints 21"), std::string::npos);
}

TEST(SdpText, BadResult) {
  const auto inst = example81();
  const QuotientRing q(groebner(inst.h));
  const SdpProblem prob = formulate(inst, q, {2, 2});
  std::stringstream ss("lambda 1\nblock 0\n1 2\n");
  EXPECT_THROW(read_sdp_result(ss, prob), ParseError);
}
