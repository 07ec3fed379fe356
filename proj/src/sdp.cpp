#include "soscert/sdp.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "soscert/certifier.hpp"
#include "soscert/errors.hpp"
#include "soscert/gram.hpp"

namespace soscert {

namespace {

std::size_t tri(std::size_t m) { return m * (m + 1) / 2; }

Polynomial one(std::size_t n) { return Polynomial(n, Rational(1)); }

std::optional<Rational> positive_constant(const Polynomial& nf) {
  if (!nf.is_constant() || nf.is_zero() || sgn(nf.constant_term()) <= 0) return std::nullopt;
  return nf.constant_term();
}

// Projection onto {M >= shift I}.
Eigen::MatrixXd clip(const Eigen::MatrixXd& m, double shift) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  Eigen::VectorXd d = es.eigenvalues();
  for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = std::max(d(i), shift);
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

std::size_t SdpProblem::block_offset(std::size_t i) const {
  std::size_t off = 0;
  for (std::size_t k = 0; k < i; ++k) off += tri(block_size(k));
  return off;
}

std::size_t SdpProblem::cofactor_offset(std::size_t j) const {
  std::size_t off = block_offset(blocks());
  for (std::size_t k = 0; k < j; ++k) off += cofactor_monomials[k].size();
  return off;
}

std::vector<double> svec_scaled(const Eigen::MatrixXd& q) {
  std::vector<double> out;
  const double r2 = std::sqrt(2.0);
  for (Eigen::Index i = 0; i < q.rows(); ++i)
    for (Eigen::Index j = i; j < q.cols(); ++j) out.push_back(i == j ? q(i, i) : r2 * 0.5 * (q(i, j) + q(j, i)));
  return out;
}

Eigen::MatrixXd unsvec_scaled(const double* v, std::size_t size) {
  Eigen::MatrixXd q(size, size);
  const double r2 = std::sqrt(2.0);
  for (std::size_t i = 0; i < size; ++i)
    for (std::size_t j = i; j < size; ++j) {
      const double x = *v++;
      q(i, j) = q(j, i) = i == j ? x : x / r2;
    }
  return q;
}

SdpProblem formulate(const ProblemInstance& inst, const QuotientRing& q, const std::vector<unsigned>& order) {
  if (!q.ideal().is_graded) throw NotGraded();
  const std::size_t n = inst.nvars();
  const std::size_t r = inst.g.size();
  const unsigned delta = q.basis_degree();
  SdpProblem prob;
  prob.nvars = n;
  prob.orders = order.empty() ? std::vector<unsigned>(r + 1, delta) : order;
  if (prob.orders.size() == 1) prob.orders.assign(r + 1, prob.orders[0]);
  if (prob.orders.size() != r + 1)
    throw InvalidInput("expected " + std::to_string(r + 1) + " relaxation orders");
  for (unsigned l : prob.orders)
    if (l < delta) throw InvalidInput("relaxation order below the degree of the quotient basis");

  std::vector<Polynomial> g{one(n)};
  for (const auto& gi : inst.g) g.push_back(gi);
  int e = std::max(inst.f.degree(), 0);
  for (std::size_t i = 0; i <= r; ++i) e = std::max<int>(e, std::max(g[i].degree(), 0) + 2 * prob.orders[i]);
  prob.degree = static_cast<unsigned>(e);

  for (std::size_t i = 0; i <= r; ++i) prob.block_monomials.push_back(monomials_up_to(n, prob.orders[i]));
  for (const auto& h : inst.h) {
    const int cap = e - h.degree();
    prob.cofactor_monomials.push_back(cap >= 0 ? monomials_up_to(n, static_cast<unsigned>(cap))
                                               : std::vector<Monomial>{});
  }
  prob.rows = monomials_up_to(n, prob.degree);
  std::map<Monomial, std::size_t, GrevlexGreater> row;
  for (std::size_t k = 0; k < prob.rows.size(); ++k) row[prob.rows[k]] = k;

  std::size_t cols = prob.block_offset(prob.blocks());
  for (const auto& c : prob.cofactor_monomials) cols += c.size();
  prob.a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(prob.rows.size()), static_cast<Eigen::Index>(cols));
  prob.b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(prob.rows.size()));
  const double r2 = std::sqrt(2.0);
  for (std::size_t i = 0; i <= r; ++i) {
    const auto& mons = prob.block_monomials[i];
    std::size_t col = prob.block_offset(i);
    for (std::size_t k = 0; k < mons.size(); ++k)
      for (std::size_t l = k; l < mons.size(); ++l, ++col) {
        const Monomial m = mons[k] * mons[l];
        for (const auto& [gm, gc] : g[i].terms())
          prob.a(static_cast<Eigen::Index>(row.at(m * gm)), static_cast<Eigen::Index>(col)) +=
              gc.get_d() * (k == l ? 1.0 : r2);
      }
  }
  for (std::size_t j = 0; j < inst.h.size(); ++j) {
    std::size_t col = prob.cofactor_offset(j);
    for (const auto& m : prob.cofactor_monomials[j]) {
      for (const auto& [hm, hc] : inst.h[j].terms())
        prob.a(static_cast<Eigen::Index>(row.at(m * hm)), static_cast<Eigen::Index>(col)) += hc.get_d();
      ++col;
    }
  }
  for (const auto& [m, c] : inst.f.terms()) prob.b(static_cast<Eigen::Index>(row.at(m))) = c.get_d();
  return prob;
}

SolverResult solve_feasibility(const SdpProblem& prob, double lambda, int iterations, double tol) {
  const Eigen::MatrixXd pinv = prob.a.completeOrthogonalDecomposition().pseudoInverse();
  auto affine = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd { return v - pinv * (prob.a * v - prob.b); };
  auto cone = [&](const Eigen::VectorXd& v) {
    Eigen::VectorXd out = v;
    for (std::size_t i = 0; i < prob.blocks(); ++i) {
      const std::size_t m = prob.block_size(i);
      const std::size_t off = prob.block_offset(i);
      const Eigen::MatrixXd c = clip(unsvec_scaled(v.data() + off, m), i == 0 ? lambda : 0.0);
      const auto s = svec_scaled(c);
      for (std::size_t k = 0; k < s.size(); ++k) out(static_cast<Eigen::Index>(off + k)) = s[k];
    }
    return out;
  };
  auto result = [&](const Eigen::VectorXd& y, int it) {
    SolverResult res;
    res.lambda = lambda;
    res.iterations = it;
    res.residual = (prob.a * y - prob.b).norm();
    for (std::size_t i = 0; i < prob.blocks(); ++i)
      res.blocks.push_back(unsvec_scaled(y.data() + prob.block_offset(i), prob.block_size(i)));
    for (std::size_t j = 0; j < prob.cofactor_monomials.size(); ++j)
      res.cofactors.push_back(y.segment(static_cast<Eigen::Index>(prob.cofactor_offset(j)),
                                        static_cast<Eigen::Index>(prob.cofactor_monomials[j].size())));
    return res;
  };

  Eigen::VectorXd z = affine(Eigen::VectorXd::Zero(prob.a.cols()));
  double checkpoint = std::numeric_limits<double>::infinity();
  double res = checkpoint;
  for (int it = 1; it <= iterations; ++it) {
    const Eigen::VectorXd y = cone(z);
    const Eigen::VectorXd x = affine(2 * y - z);
    z += x - y;
    res = (x - y).norm();
    if (res < tol) return result(y, it);
    if (it % 500 == 0) {
      if (res > 0.99 * checkpoint) throw Infeasible("solver stalled at lambda " + std::to_string(lambda), res);
      checkpoint = res;
    }
  }
  throw MaxIterations("solver did not converge at lambda " + std::to_string(lambda), res);
}

SolverResult maximize_lambda(const SdpProblem& prob, int iterations, double tol,
                             std::vector<std::pair<double, bool>>* probes) {
  std::optional<SolverResult> best;
  auto probe = [&](double lam) {
    bool ok = false;
    try {
      SolverResult r = solve_feasibility(prob, lam, iterations, tol);
      best = std::move(r);
      ok = true;
    } catch (const Infeasible&) {
    } catch (const MaxIterations&) {
    }
    if (probes) probes->emplace_back(lam, ok);
    return ok;
  };
  double lo = 0;
  double hi = 0;
  if (probe(1.0)) {
    lo = 1.0;
    hi = 2.0;
    while (hi <= 1048576.0 && probe(hi)) {
      lo = hi;
      hi *= 2;
    }
  } else {
    hi = 1.0;
    lo = 0.5;
    while (!probe(lo)) {
      hi = lo;
      lo *= 0.5;
      if (lo < 1e-9) throw Infeasible("no positive lambda is feasible", 0);
    }
  }
  const SolverResult at_lo = *best;
  SolverResult keep = at_lo;
  for (int k = 0; k < 8; ++k) {
    const double mid = 0.5 * (lo + hi);
    best.reset();
    if (probe(mid)) {
      lo = mid;
      keep = *best;
    } else {
      hi = mid;
    }
  }
  return keep;
}

Certificate sdp_certify(const ProblemInstance& inst, const std::vector<unsigned>& order,
                               SdpCertifyStats* stats) {
  const std::size_t n = inst.nvars();
  if (inst.h.empty()) throw InvalidInput("at least one equality constraint is required");
  const QuotientRing q(groebner(inst.h));
  Certificate cert;
  cert.mode = Mode::Strict;
  cert.variables = inst.variables;
  cert.blocks.assign(inst.g.size() + 1, {});
  SdpCertifyStats st;

  const SdpProblem prob = formulate(inst, q, order);
  if (auto c = positive_constant(q.normal_form(inst.f))) {
    cert.blocks[0].push_back({*c, one(n)});
    attach_cofactors(inst, q, cert);
    if (stats) *stats = st;
    return cert;
  }

  const SolverResult sol = maximize_lambda(prob, inst.options.sdp_iterations, inst.options.sdp_tol);
  st.lambda = sol.lambda;
  st.residual = sol.residual;
  const int kappa0 = std::max(static_cast<int>(std::ceil(-std::log10(sol.lambda))), 0);

  std::vector<Polynomial> g{one(n)};
  for (const auto& gi : inst.g) g.push_back(gi);
  auto mono_polys = [&](std::size_t i) {
    std::vector<Polynomial> out;
    for (const auto& m : prob.block_monomials[i]) out.emplace_back(m, Rational(1));
    return out;
  };

  for (int kappa = kappa0;; ++kappa) {
    const auto bits = static_cast<unsigned>(std::ceil(kappa * std::log2(10.0)));
    if (bits > inst.options.max_bits)
      throw PrecisionExceeded("rounding needs more than " + std::to_string(inst.options.max_bits) + " bits");
    ++st.passes;
    st.kappa = kappa;
    st.bits = bits;

    std::vector<std::vector<WeightedSquare>> blocks(g.size());
    Polynomial fhat = inst.f;
    for (std::size_t i = 1; i < g.size(); ++i) {
      const Eigen::LDLT<Eigen::MatrixXd> ldl(sol.blocks[i]);
      const Eigen::MatrixXd l = ldl.transpositionsP().transpose() * Eigen::MatrixXd(ldl.matrixL());
      const Eigen::VectorXd d = ldl.vectorD();
      const auto& mons = prob.block_monomials[i];
      for (Eigen::Index k = 0; k < d.size(); ++k) {
        const Rational w = round_binary(std::max(d(k), 0.0), bits);
        if (sgn(w) <= 0) continue;
        Polynomial s(n);
        for (std::size_t j = 0; j < mons.size(); ++j)
          s.add_term(mons[j], round_binary(l(static_cast<Eigen::Index>(j), k), bits));
        s = q.normal_form(s);
        if (s.is_zero()) continue;
        fhat -= s * s * g[i] * w;
        blocks[i].push_back({w, std::move(s)});
      }
    }
    fhat = q.normal_form(fhat);

    const auto basis = mono_polys(0);
    LDLFactorization f;
    try {
      const GramVariety gv = GramVariety::modulo(q, basis, fhat);
      f = ldlt(project_to_gram(gv, round_matrix(sol.blocks[0], bits)));
    } catch (const NotPositiveDefinite&) {
      continue;
    } catch (const ZeroPivot&) {
      continue;
    }
    for (auto& [w, v] : f.squares()) {
      Polynomial s(n);
      for (std::size_t i = 0; i < v.size(); ++i)
        if (sgn(v[i]) != 0) s += basis[i] * v[i];
      s = q.normal_form(s);
      if (!s.is_zero()) blocks[0].push_back({w, std::move(s)});
    }
    cert.blocks = std::move(blocks);
    attach_cofactors(inst, q, cert);
    if (stats) *stats = st;
    return cert;
  }
}

void write_sdp_problem(std::ostream& os, const SdpProblem& prob) {
  os << "* sdp problem: maximize lambda with block 0 - lambda I >= 0\n";
  os << "blocks " << prob.blocks();
  for (std::size_t i = 0; i < prob.blocks(); ++i) os << ' ' << prob.block_size(i);
  os << "\nfree " << prob.cofactor_offset(prob.cofactor_monomials.size()) - prob.block_offset(prob.blocks())
     << "\nconstraints " << prob.rows.size() << '\n';
  os.precision(17);
  for (Eigen::Index r = 0; r < prob.a.rows(); ++r) {
    for (std::size_t i = 0; i < prob.blocks(); ++i) {
      const std::size_t m = prob.block_size(i);
      std::size_t col = prob.block_offset(i);
      for (std::size_t k = 0; k < m; ++k)
        for (std::size_t l = k; l < m; ++l, ++col) {
          const double v = prob.a(r, static_cast<Eigen::Index>(col));
          // Entry coefficient on the unscaled matrix element.
          if (v != 0) os << "c " << r + 1 << ' ' << i << ' ' << k + 1 << ' ' << l + 1 << ' '
                         << (k == l ? v : v * std::sqrt(2.0)) << '\n';
        }
    }
    const std::size_t free0 = prob.block_offset(prob.blocks());
    for (std::size_t col = free0; col < prob.unknowns(); ++col) {
      const double v = prob.a(r, static_cast<Eigen::Index>(col));
      if (v != 0) os << "f " << r + 1 << ' ' << col - free0 + 1 << ' ' << v << '\n';
    }
    if (prob.b(r) != 0) os << "rhs " << r + 1 << ' ' << prob.b(r) << '\n';
  }
}

void write_sdp_result(std::ostream& os, const SolverResult& res) {
  os.precision(17);
  os << "lambda " << res.lambda << '\n';
  for (std::size_t i = 0; i < res.blocks.size(); ++i) {
    os << "block " << i << '\n';
    for (Eigen::Index r = 0; r < res.blocks[i].rows(); ++r) {
      for (Eigen::Index c = 0; c < res.blocks[i].cols(); ++c) os << (c ? " " : "") << res.blocks[i](r, c);
      os << '\n';
    }
  }
  os << "free";
  for (const auto& c : res.cofactors)
    for (Eigen::Index k = 0; k < c.size(); ++k) os << ' ' << c(k);
  os << '\n';
}

SolverResult read_sdp_result(std::istream& is, const SdpProblem& prob) {
  SolverResult res;
  std::string word;
  std::vector<double> free;
  while (is >> word) {
    if (word == "lambda") {
      is >> res.lambda;
    } else if (word == "block") {
      std::size_t i = 0;
      is >> i;
      if (i != res.blocks.size() || i >= prob.blocks()) throw ParseError("unexpected block " + std::to_string(i));
      const auto m = static_cast<Eigen::Index>(prob.block_size(i));
      Eigen::MatrixXd b(m, m);
      for (Eigen::Index r = 0; r < m; ++r)
        for (Eigen::Index c = 0; c < m; ++c)
          if (!(is >> b(r, c))) throw ParseError("truncated block " + std::to_string(i));
      res.blocks.push_back(0.5 * (b + b.transpose()));
    } else if (word == "free") {
      std::string line;
      std::getline(is, line);
      std::istringstream ls(line);
      double v = 0;
      while (ls >> v) free.push_back(v);
    } else {
      throw ParseError("unknown keyword '" + word + "' in solver result");
    }
  }
  if (res.blocks.size() != prob.blocks()) throw ParseError("solver result has the wrong number of blocks");
  const std::size_t nfree = prob.unknowns() - prob.block_offset(prob.blocks());
  if (free.size() != nfree) throw ParseError("solver result has the wrong number of free values");
  Eigen::VectorXd x(static_cast<Eigen::Index>(prob.unknowns()));
  for (std::size_t i = 0; i < prob.blocks(); ++i) {
    const auto s = svec_scaled(res.blocks[i]);
    for (std::size_t k = 0; k < s.size(); ++k) x(static_cast<Eigen::Index>(prob.block_offset(i) + k)) = s[k];
  }
  std::size_t k = 0;
  for (std::size_t j = 0; j < prob.cofactor_monomials.size(); ++j) {
    Eigen::VectorXd c(static_cast<Eigen::Index>(prob.cofactor_monomials[j].size()));
    for (Eigen::Index t = 0; t < c.size(); ++t, ++k) {
      c(t) = free[k];
      x(static_cast<Eigen::Index>(prob.block_offset(prob.blocks()) + k)) = free[k];
    }
    res.cofactors.push_back(c);
  }
  res.residual = (prob.a * x - prob.b).norm();
  return res;
}

}  // namespace soscert
