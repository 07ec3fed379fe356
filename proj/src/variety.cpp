#include "soscert/variety.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace soscert {

std::vector<double> RootPoint::real_coords() const {
  std::vector<double> out(coords.size());
  for (std::size_t i = 0; i < coords.size(); ++i) out[i] = coords[i].real();
  return out;
}

std::vector<std::size_t> VarietyData::real_points() const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < points.size(); ++j)
    if (points[j].real) out.push_back(j);
  return out;
}

std::vector<std::size_t> VarietyData::pair_representatives() const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < points.size(); ++j)
    if (points[j].representative()) out.push_back(j);
  return out;
}

Eigen::MatrixXd to_eigen(const QMatrix& m) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).get_d();
  return out;
}

Complex evaluate_at(const Polynomial& p, const RootPoint& pt) {
  return evaluate(convert<Complex>(p), pt.coords);
}

namespace {

Complex eval_monomial(const Monomial& m, const std::vector<Complex>& z) {
  Complex v(1.0, 0.0);
  for (std::size_t i = 0; i < m.nvars(); ++i)
    for (unsigned e = 0; e < m[i]; ++e) v *= z[i];
  return v;
}

double distance(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

struct Eigenpoints {
  std::vector<std::vector<Complex>> coords;
  std::vector<Complex> values;  // eigenvalues of the combination
  Eigen::VectorXd c;
};

// Simultaneous eigenvectors of the transposed multiplication matrices of a
// radical quotient. Returns nullopt when the combination has clustered eigenvalues.
std::optional<Eigenpoints> eigenpoints(const std::vector<Eigen::MatrixXd>& mats,
                                       const Eigen::VectorXd& c, double sep) {
  const auto d = mats[0].rows();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
  for (std::size_t i = 0; i < mats.size(); ++i) m += c[i] * mats[i];
  Eigen::EigenSolver<Eigen::MatrixXd> es(m.transpose());
  if (es.info() != Eigen::Success) return std::nullopt;
  Eigenpoints out;
  out.c = c;
  const Eigen::VectorXcd vals = es.eigenvalues();
  const Eigen::MatrixXcd vecs = es.eigenvectors();
  for (Eigen::Index a = 0; a < d; ++a)
    for (Eigen::Index b = a + 1; b < d; ++b)
      if (std::abs(vals[a] - vals[b]) < sep) return std::nullopt;
  for (Eigen::Index k = 0; k < d; ++k) {
    Eigen::VectorXcd v = vecs.col(k);
    if (std::abs(v[0]) < 1e-300) return std::nullopt;
    v /= v[0];
    std::vector<Complex> z(mats.size());
    const Complex nrm = v.squaredNorm();
    for (std::size_t i = 0; i < mats.size(); ++i) {
      const Eigen::VectorXcd w = mats[i].transpose().cast<Complex>() * v;
      z[i] = v.dot(w) / nrm;
    }
    out.coords.push_back(std::move(z));
    out.values.push_back(vals[k]);
  }
  return out;
}

}  // namespace

VarietyData solve_variety(const QuotientRing& q, double tol, std::uint64_t seed) {
  VarietyData out;
  const std::size_t n = q.nvars();
  out.radical = radical(q);
  out.is_radical = out.radical.groebner == q.ideal().groebner;
  const QuotientRing qj = out.is_radical ? q : QuotientRing(out.radical);
  const std::size_t d = qj.dimension();
  if (d == 0) {
    out.tol = tol > 0 ? tol : std::ldexp(1.0, -40);
    return out;
  }

  std::vector<Eigen::MatrixXd> mats;
  for (std::size_t i = 0; i < n; ++i) mats.push_back(to_eigen(qj.mult_matrix(i)));

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::optional<Eigenpoints> ep;
  for (int attempt = 0; attempt < 8 && !ep; ++attempt) {
    Eigen::VectorXd c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = 0.5 + 0.5 * std::abs(dist(rng));
    for (std::size_t i = 0; i < n; ++i)
      if (dist(rng) < 0) c[i] = -c[i];
    double scale = 0;
    for (const auto& m : mats) scale = std::max(scale, m.cwiseAbs().maxCoeff());
    const double sep = tol > 0 ? 10 * tol : 10 * std::ldexp(1.0, -40) * (1 + scale);
    ep = eigenpoints(mats, c, sep);
  }
  if (!ep) throw ClusterAmbiguity("roots could not be separated by random combinations");

  double big = 0;
  for (const auto& z : ep->coords)
    for (const auto& c : z) big = std::max(big, std::abs(c));
  out.tol = tol > 0 ? tol : std::ldexp(1.0, -40) * (1 + big);
  const double imag_tol = std::max(1e3 * out.tol, 1e-9 * (1 + big));

  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = a + 1; b < d; ++b)
      if (distance(ep->coords[a], ep->coords[b]) < 10 * out.tol)
        throw ClusterAmbiguity("two roots are closer than the clustering tolerance");

  std::vector<RootPoint> pts(d);
  for (std::size_t k = 0; k < d; ++k) {
    pts[k].coords = ep->coords[k];
    double im = 0;
    for (const auto& c : pts[k].coords) im = std::max(im, std::abs(c.imag()));
    pts[k].real = im <= imag_tol;
    if (pts[k].real)
      for (auto& c : pts[k].coords) c = Complex(c.real(), 0.0);
  }

  // greedy nearest-conjugate pairing
  std::vector<int> partner(d, -1);
  for (std::size_t a = 0; a < d; ++a) {
    if (pts[a].real || partner[a] >= 0) continue;
    std::vector<Complex> conj_a(n);
    for (std::size_t i = 0; i < n; ++i) conj_a[i] = std::conj(pts[a].coords[i]);
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t b = 0; b < d; ++b) {
      if (b == a || pts[b].real || partner[b] >= 0) continue;
      const double dd = distance(conj_a, pts[b].coords);
      if (dd < best_d) best_d = dd, best = static_cast<int>(b);
    }
    if (best < 0 || best_d > imag_tol) throw ClusterAmbiguity("conjugate pairing failed");
    partner[a] = best;
    partner[best] = static_cast<int>(a);
  }

  // order: real points lexicographically, then pairs with the positive-imaginary
  // representative first
  auto upper = [&](std::size_t a) {
    for (const auto& c : pts[a].coords)
      if (std::abs(c.imag()) > imag_tol) return c.imag() > 0;
    return true;
  };
  auto lex = [&](std::size_t a, std::size_t b) {
    for (std::size_t i = 0; i < n; ++i) {
      const double x = pts[a].coords[i].real(), y = pts[b].coords[i].real();
      if (std::abs(x - y) > imag_tol) return x < y;
    }
    for (std::size_t i = 0; i < n; ++i) {
      const double x = pts[a].coords[i].imag(), y = pts[b].coords[i].imag();
      if (std::abs(x - y) > imag_tol) return x > y;
    }
    return false;
  };
  std::vector<std::size_t> reals, reps;
  for (std::size_t a = 0; a < d; ++a) {
    if (pts[a].real) reals.push_back(a);
    else if (upper(a)) reps.push_back(a);
  }
  std::sort(reals.begin(), reals.end(), lex);
  std::sort(reps.begin(), reps.end(), lex);
  std::vector<std::size_t> order = reals;
  std::vector<std::size_t> value_order = reals;
  for (auto a : reps) {
    order.push_back(a);
    order.push_back(partner[a]);
  }
  for (std::size_t k = 0; k < order.size(); ++k) {
    RootPoint p = pts[order[k]];
    p.index = static_cast<int>(k);
    if (!p.real) {
      const bool rep = (k - reals.size()) % 2 == 0;
      p.partner = static_cast<int>(rep ? k + 1 : k - 1);
      if (!rep) {
        const auto& r = out.points[k - 1].coords;
        for (std::size_t i = 0; i < n; ++i) p.coords[i] = std::conj(r[i]);
      }
    }
    out.points.push_back(std::move(p));
  }

  if (!out.is_radical) {
    // multiplicities from the eigenvalues of the same combination modulo I
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(q.dimension(), q.dimension());
    for (std::size_t i = 0; i < n; ++i) m += ep->c[i] * to_eigen(q.mult_matrix(i));
    const Eigen::VectorXcd vals = m.eigenvalues();
    std::vector<Complex> targets;
    for (const auto& p : out.points) {
      Complex v(0, 0);
      for (std::size_t i = 0; i < n; ++i) v += ep->c[i] * p.coords[i];
      targets.push_back(v);
    }
    for (auto& p : out.points) p.multiplicity = 0;
    for (Eigen::Index k = 0; k < vals.size(); ++k) {
      std::size_t best = 0;
      for (std::size_t j = 1; j < targets.size(); ++j)
        if (std::abs(vals[k] - targets[j]) < std::abs(vals[k] - targets[best])) best = j;
      ++out.points[best].multiplicity;
    }
    for (auto& p : out.points)
      if (p.multiplicity == 0) throw ClusterAmbiguity("multiplicity assignment failed");
    for (auto& p : out.points)
      if (!p.real && p.multiplicity != out.points[p.partner].multiplicity)
        throw ClusterAmbiguity("conjugate roots received different multiplicities");
  } else {
    out.idempotents = idempotents(qj, out);
  }
  return out;
}

Membership membership(const VarietyData& var, const std::vector<Polynomial>& g, double tol) {
  Membership m;
  m.violated.assign(var.points.size(), -1);
  std::vector<ComplexPolynomial> gc;
  for (const auto& p : g) gc.push_back(convert<Complex>(p));
  for (std::size_t j = 0; j < var.points.size(); ++j) {
    const auto& pt = var.points[j];
    if (!pt.real) {
      m.complex_points.push_back(j);
      continue;
    }
    double worst = 0;
    bool near = false;
    for (std::size_t i = 0; i < gc.size(); ++i) {
      const double v = evaluate(gc[i], pt.coords).real();
      if (std::abs(v) <= tol) near = true;
      if (v < -tol && v < worst) {
        worst = v;
        m.violated[j] = static_cast<int>(i);
      }
    }
    if (m.violated[j] >= 0) {
      m.excluded.push_back(j);
    } else {
      m.in_s.push_back(j);
      if (near) m.boundary.push_back(j);
    }
  }
  return m;
}

Eigen::MatrixXcd idempotents(const QuotientRing& q, const VarietyData& var) {
  const std::size_t d = q.dimension();
  if (var.points.size() != d) throw SingularVandermonde();
  for (const auto& p : var.points)
    if (p.multiplicity != 1) throw SingularVandermonde();
  if (d == 0) return Eigen::MatrixXcd(0, 0);
  Eigen::MatrixXcd v(d, d);
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t j = 0; j < d; ++j) v(k, j) = eval_monomial(q.basis()[k], var.points[j].coords);
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(v.transpose());
  if (!lu.isInvertible() || lu.rcond() < 1e-14) throw SingularVandermonde();
  Eigen::MatrixXcd u = lu.inverse();
  for (std::size_t j = 0; j < d; ++j) {
    const auto& p = var.points[j];
    if (p.real) u.col(j) = u.col(j).real().cast<Complex>();
    else if (p.representative()) u.col(p.partner) = u.col(j).conjugate();
  }
  return u;
}

ComplexPolynomial interpolation_poly(const VarietyData& var, std::size_t which) {
  const auto& z = var.points.at(which).coords;
  const std::size_t n = z.size();
  ComplexPolynomial phi(n, Complex(1.0, 0.0));
  for (std::size_t j = 0; j < var.points.size(); ++j) {
    if (j == which) continue;
    const auto& xi = var.points[j].coords;
    std::size_t best = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (std::abs(z[i] - xi[i]) > std::abs(z[best] - xi[best])) best = i;
    const Complex den = z[best] - xi[best];
    ComplexPolynomial factor(n);
    factor.add_term(Monomial::variable(n, best), Complex(1.0, 0.0) / den);
    factor.add_term(Monomial(n), -xi[best] / den);
    phi *= factor;
  }
  return phi;
}

}  // namespace soscert
