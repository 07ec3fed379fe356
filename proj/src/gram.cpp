#include "soscert/gram.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <cstdlib>
#include <string>

namespace soscert {

namespace {

double dyadic(double x, int bits) { return std::ldexp(std::floor(std::ldexp(x, bits)), -bits); }

double coefficient_scale(const Polynomial& p) {
  double s = 1;
  for (const auto& [m, c] : p.terms()) s += std::fabs(c.get_d());
  return s;
}

void check_shapes(const QuotientRing& q, const VarietyData& var) {
  const auto d = static_cast<Eigen::Index>(q.dimension());
  if (var.idempotents.rows() != d || var.idempotents.cols() != d || var.points.size() != q.dimension())
    throw SingularVandermonde();
}

std::vector<Complex> values_at_points(const VarietyData& var, const Polynomial& p) {
  std::vector<Complex> out;
  for (const auto& pt : var.points) out.push_back(evaluate_at(p, pt));
  return out;
}

// Two columns of the identity
//   (a+ib)(u+iv)^2 + (a-ib)(u-iv)^2 + 2 lam |u+iv|^2
//     = 2(lam+a)(u - b/(lam+a) v)^2 + 2(lam^2-|a+ib|^2)/(lam+a) v^2.
std::pair<Eigen::VectorXd, Eigen::VectorXd> pair_columns(Complex w, double lam,
                                                         const Eigen::VectorXcd& u) {
  const double a = w.real(), b = w.imag();
  const Eigen::VectorXd re = u.real(), im = u.imag();
  const double s = lam + a;
  Eigen::VectorXd c1 = std::sqrt(2 * s) * (re - (b / s) * im);
  Eigen::VectorXd c2 = std::sqrt(2 * (lam * lam - std::norm(w)) / s) * im;
  return {c1, c2};
}

RealGram finish(Eigen::MatrixXd theta, int distinguished) {
  RealGram g;
  g.q = theta * theta.transpose();
  g.theta = std::move(theta);
  g.distinguished = distinguished;
  if (g.q.rows() > 0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g.q, Eigen::EigenvaluesOnly);
    g.lambda_min = es.eigenvalues().minCoeff();
  }
  return g;
}

// Real values at the real roots; values within the noise level are clamped to 0.
std::vector<double> real_values(const VarietyData& var, const std::vector<Complex>& pv,
                                const Polynomial& p) {
  const double thr = 1e3 * var.tol * coefficient_scale(p);
  std::vector<double> out(pv.size(), 0.0);
  for (std::size_t j = 0; j < pv.size(); ++j) {
    if (!var.points[j].real) continue;
    const double v = pv[j].real();
    if (v < -thr)
      throw NonPositiveAtRealRoot("polynomial is negative at a real root (value " + std::to_string(v) + ")");
    out[j] = std::max(v, 0.0);
    if (v <= thr) out[j] = 0.0;
  }
  return out;
}

}  // namespace

RealGram build_gram_real(const QuotientRing& q, const VarietyData& var, const Polynomial& p) {
  check_shapes(q, var);
  const std::size_t d = q.dimension();
  if (d == 0) return finish(Eigen::MatrixXd(0, 0), -1);
  if (var.real_points().empty()) return build_gram_distinguished(q, var, p);
  const auto pv = values_at_points(var, p);
  const auto rv = real_values(var, pv, p);
  const auto& u = var.idempotents;
  Eigen::MatrixXd theta(d, d);
  Eigen::Index col = 0;
  for (std::size_t j = 0; j < d; ++j) {
    const auto& pt = var.points[j];
    if (pt.real) {
      theta.col(col++) = std::sqrt(rv[j]) * u.col(j).real();
    } else if (pt.representative()) {
      const double lam = dyadic(std::abs(pv[j]) + 1.5, 8);
      auto [c1, c2] = pair_columns(pv[j], lam, u.col(j));
      theta.col(col++) = c1;
      theta.col(col++) = c2;
    }
  }
  return finish(std::move(theta), -1);
}

RealGram build_gram_distinguished(const QuotientRing& q, const VarietyData& var, const Polynomial& p) {
  check_shapes(q, var);
  const std::size_t d = q.dimension();
  if (d == 0) return finish(Eigen::MatrixXd(0, 0), -1);
  const auto pv = values_at_points(var, p);
  const auto& u = var.idempotents;
  const auto reals = var.real_points();
  Eigen::MatrixXd theta(d, d);
  Eigen::Index col = 0;

  if (!reals.empty()) {
    const auto rv = real_values(var, pv, p);
    std::size_t x0 = reals[0];
    for (auto j : reals)
      if (rv[j] < rv[x0]) x0 = j;
    const double f0 = rv[x0];
    double rest = std::numeric_limits<double>::infinity();
    for (auto j : reals)
      if (j != x0) rest = std::min(rest, rv[j]);
    double eps = 0.5;
    while (reals.size() > 1 && eps * eps * f0 > rest / 2 && eps > 1e-150) eps /= 2;
    Eigen::VectorXcd v = u.col(x0);
    for (auto j : reals)
      if (j != x0) {
        theta.col(col++) = std::sqrt(std::max(rv[j] - eps * eps * f0, 0.0)) * u.col(j).real();
        v += eps * u.col(j);
      }
    for (std::size_t j = 0; j < d; ++j) {
      if (var.points[j].real) continue;
      v += u.col(j);
      if (!var.points[j].representative()) continue;
      const Complex w = pv[j] - f0;
      auto [c1, c2] = pair_columns(w, dyadic(std::abs(w) + 1.5, 8), u.col(j));
      theta.col(col++) = c1;
      theta.col(col++) = c2;
    }
    theta.col(col) = std::sqrt(f0) * v.real();
    return finish(std::move(theta), static_cast<int>(col));
  }

  // No real roots: v = u_z0 + eps u_conj(z0) + sum of the other idempotents.
  const auto reps = var.pair_representatives();
  const std::size_t z0 = reps[0];
  const std::size_t z0c = var.points[z0].partner;
  const Complex f0 = pv[z0], f0c = pv[z0c];
  const double lam0 = dyadic(2 * std::abs(f0) + 1, 8);
  double eps = 0.5;
  auto alpha = [&](double e) {
    return (f0 - e * e * f0c) / (1 - e * e * e * e) - e * lam0;
  };
  while ((1 + eps * eps) * lam0 - 2 * std::abs(alpha(eps)) < 0.5 && eps > 1e-150) eps /= 2;
  const Complex al = alpha(eps);
  const double lamp = (1 + eps * eps) * lam0 / 2;
  Eigen::VectorXcd v = u.col(z0) + eps * u.col(z0c);
  const double shift = 2 * f0.real() / (1 + eps * eps) + (1 - eps) * (1 - eps) * lam0;
  for (std::size_t j = 0; j < d; ++j) {
    if (j == z0 || j == z0c) continue;
    v += u.col(j);
    if (!var.points[j].representative()) continue;
    const Complex rho = pv[j] - shift;
    auto [c1, c2] = pair_columns(rho, dyadic(std::abs(rho) + 1.5, 8), u.col(j));
    theta.col(col++) = c1;
    theta.col(col++) = c2;
  }
  auto [c1, c2] = pair_columns(al, lamp, v);
  theta.col(col++) = c2;
  theta.col(col) = c1;
  return finish(std::move(theta), static_cast<int>(col));
}

GramVariety::GramVariety(const QMatrix& a, const std::vector<Rational>& b, std::size_t size)
    : size_(size) {
  const std::size_t nu = size * (size + 1) / 2;
  if (a.cols() != nu || b.size() != a.rows()) throw InvalidInput("Gram constraint shape mismatch");
  QMatrix aug(a.rows(), nu + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < nu; ++j) aug(i, j) = a(i, j);
    aug(i, nu) = b[i];
  }
  const Echelon e = rref(std::move(aug));
  if (!e.pivots.empty() && e.pivots.back() == nu) throw InfeasibleVariety();
  const std::size_t r = e.pivots.size();
  a_ = QMatrix(r, nu);
  b_.assign(r, Rational(0));
  for (std::size_t i = 0; i < r; ++i) {
    Integer den = 1, num = 0;
    for (std::size_t j = 0; j <= nu; ++j) {
      const Rational& c = e.reduced(i, j);
      mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
    }
    for (std::size_t j = 0; j <= nu; ++j) {
      const Integer c = e.reduced(i, j).get_num() * (den / e.reduced(i, j).get_den());
      mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), c.get_mpz_t());
    }
    const Rational scale = Rational(den) / Rational(num);
    for (std::size_t j = 0; j < nu; ++j) a_(i, j) = e.reduced(i, j) * scale;
    b_[i] = e.reduced(i, nu) * scale;
  }
}

GramVariety GramVariety::modulo(const QuotientRing& q, const std::vector<Polynomial>& basis,
                                const Polynomial& target) {
  const std::size_t m = basis.size();
  const std::size_t d = q.dimension();
  QMatrix a(d, m * (m + 1) / 2);
  std::size_t col = 0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j, ++col) {
      const auto c = q.coordinates(basis[i] * basis[j]);
      for (std::size_t r = 0; r < d; ++r) a(r, col) = i == j ? c[r] : c[r] * 2;
    }
  return GramVariety(a, q.coordinates(target), m);
}

std::vector<Rational> GramVariety::svec(const QMatrix& y) {
  std::vector<Rational> v;
  for (std::size_t i = 0; i < y.rows(); ++i)
    for (std::size_t j = i; j < y.cols(); ++j) v.push_back(y(i, j));
  return v;
}

QMatrix GramVariety::unsvec(const std::vector<Rational>& v, std::size_t size) {
  QMatrix y(size, size);
  std::size_t k = 0;
  for (std::size_t i = 0; i < size; ++i)
    for (std::size_t j = i; j < size; ++j, ++k) y(i, j) = y(j, i) = v[k];
  return y;
}

bool GramVariety::contains(const QMatrix& y) const {
  if (!y.is_symmetric() || y.rows() != size_) return false;
  return a_ * svec(y) == b_;
}

QMatrix project_to_gram(const GramVariety& var, const QMatrix& q) {
  const std::size_t m = var.size();
  if (q.rows() != m || q.cols() != m) throw InvalidInput("Gram matrix size mismatch");
  QMatrix sym(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) sym(i, j) = (q(i, j) + q(j, i)) / 2;
  std::vector<Rational> c = GramVariety::svec(sym);
  const QMatrix& a = var.a();
  const std::size_t r = a.rows();
  if (r == 0) return sym;
  std::vector<Rational> winv;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j) winv.push_back(i == j ? Rational(1) : Rational(1, 2));
  QMatrix g(r, r);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t k = i; k < r; ++k) {
      Rational s = 0;
      for (std::size_t t = 0; t < c.size(); ++t)
        if (sgn(a(i, t)) != 0 && sgn(a(k, t)) != 0) s += a(i, t) * a(k, t) * winv[t];
      g(i, k) = g(k, i) = s;
    }
  std::vector<Rational> rhs = a * c;
  for (std::size_t i = 0; i < r; ++i) rhs[i] -= var.b()[i];
  const auto z = solve(g, rhs);
  if (!z) throw InfeasibleVariety();
  for (std::size_t t = 0; t < c.size(); ++t) {
    Rational s = 0;
    for (std::size_t i = 0; i < r; ++i)
      if (sgn(a(i, t)) != 0) s += a(i, t) * (*z)[i];
    c[t] -= winv[t] * s;
  }
  return GramVariety::unsvec(c, m);
}

namespace {

Integer matrix_denominator(const QMatrix& q) {
  Integer den = 1;
  for (std::size_t i = 0; i < q.rows(); ++i)
    for (std::size_t j = 0; j < q.cols(); ++j)
      mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), q(i, j).get_den_mpz_t());
  return den;
}

std::vector<std::vector<Integer>> integer_matrix(const QMatrix& q, const Integer& den) {
  std::vector<std::vector<Integer>> a(q.rows(), std::vector<Integer>(q.cols()));
  for (std::size_t i = 0; i < q.rows(); ++i)
    for (std::size_t j = 0; j < q.cols(); ++j)
      a[i][j] = q(i, j).get_num() * (den / q(i, j).get_den());
  return a;
}

void divexact(Integer& x, const Integer& d) {
  mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), d.get_mpz_t());
}

}  // namespace

LDLFactorization ldlt(const QMatrix& q) {
  if (!q.is_symmetric()) throw InvalidInput("ldlt needs a symmetric matrix");
  const std::size_t n = q.rows();
  LDLFactorization f;
  f.denominator = matrix_denominator(q);
  auto a = integer_matrix(q, f.denominator);
  f.l.assign(n, std::vector<Integer>(n));
  f.minors.assign(n + 1, Integer(0));
  f.minors[0] = 1;
  f.pivots.assign(n, Integer(0));
  f.permutation.resize(n);
  for (std::size_t i = 0; i < n; ++i) f.permutation[i] = i;
  for (std::size_t k = 0; k < n; ++k) {
    if (sgn(a[k][k]) == 0) {
      std::size_t j = k + 1;
      while (j < n && sgn(a[j][j]) == 0) ++j;
      if (j == n) throw ZeroPivot(static_cast<int>(k + 1));
      std::swap(a[k], a[j]);
      for (auto& row : a) std::swap(row[k], row[j]);
      for (std::size_t c = 0; c < k; ++c) std::swap(f.l[k][c], f.l[j][c]);
      std::swap(f.permutation[k], f.permutation[j]);
    }
    if (sgn(a[k][k]) < 0) throw NotPositiveDefinite(static_cast<int>(k + 1));
    for (std::size_t i = k; i < n; ++i) f.l[i][k] = a[i][k];
    f.minors[k + 1] = a[k][k];
    f.pivots[k] = f.minors[k + 1] * f.minors[k];
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        Integer v = a[k][k] * a[i][j] - a[i][k] * a[k][j];
        divexact(v, f.minors[k]);
        a[i][j] = v;
        a[j][i] = std::move(v);
      }
  }
  return f;
}

QMatrix LDLFactorization::l_matrix() const {
  const std::size_t n = l.size();
  QMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = l[i][j];
  return m;
}

QMatrix LDLFactorization::reconstruct() const {
  const std::size_t n = l.size();
  QMatrix out(n, n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      Rational s = 0;
      for (std::size_t k = 0; k < n; ++k)
        if (sgn(l[a][k]) != 0 && sgn(l[b][k]) != 0) s += Rational(l[a][k] * l[b][k], pivots[k]);
      s.canonicalize();
      out(permutation[a], permutation[b]) = s / Rational(denominator);
    }
  return out;
}

std::vector<std::pair<Rational, std::vector<Rational>>> LDLFactorization::squares() const {
  const std::size_t n = l.size();
  std::vector<std::pair<Rational, std::vector<Rational>>> out;
  for (std::size_t k = 0; k < n; ++k) {
    Rational w(minors[k + 1], denominator * minors[k]);
    w.canonicalize();
    std::vector<Rational> v(n);
    for (std::size_t i = k; i < n; ++i) {
      Rational c(l[i][k], minors[k + 1]);
      c.canonicalize();
      v[permutation[i]] = c;
    }
    out.emplace_back(std::move(w), std::move(v));
  }
  return out;
}

std::vector<Integer> leading_minors(const QMatrix& q) {
  const std::size_t n = q.rows();
  const Integer den = matrix_denominator(q);
  const auto full = integer_matrix(q, den);
  std::vector<Integer> out{Integer(1)};
  for (std::size_t k = 1; k <= n; ++k) {
    std::vector<std::vector<Integer>> a(k, std::vector<Integer>(k));
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) a[i][j] = full[i][j];
    // Bareiss elimination with row pivoting
    Integer prev = 1;
    int sign = 1;
    bool zero = false;
    for (std::size_t c = 0; c < k && !zero; ++c) {
      std::size_t p = c;
      while (p < k && sgn(a[p][c]) == 0) ++p;
      if (p == k) {
        zero = true;
        break;
      }
      if (p != c) {
        std::swap(a[p], a[c]);
        sign = -sign;
      }
      for (std::size_t i = c + 1; i < k; ++i)
        for (std::size_t j = c + 1; j < k; ++j) {
          Integer v = a[c][c] * a[i][j] - a[i][c] * a[c][j];
          divexact(v, prev);
          a[i][j] = std::move(v);
        }
      prev = a[c][c];
    }
    out.push_back(zero ? Integer(0) : Integer(sign * prev));
  }
  return out;
}

unsigned default_max_bits() {
  if (const char* s = std::getenv("SOS_CERT_MAX_BITS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(s, &end, 10);
    if (end != s && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return 4096;
}

QMatrix round_matrix(const Eigen::MatrixXd& m, unsigned bits) {
  const auto n = static_cast<std::size_t>(m.rows());
  QMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      out(i, j) = out(j, i) = round_binary(0.5 * (m(i, j) + m(j, i)), bits);
  return out;
}

std::vector<Polynomial> basis_polynomials(const QuotientRing& q) {
  std::vector<Polynomial> out;
  for (const auto& m : q.basis()) out.emplace_back(m, Rational(1));
  return out;
}

ExactGram certify_gram(const GramVariety& var, const Eigen::MatrixXd& approx,
                       const std::vector<Polynomial>& basis, unsigned start_bits, unsigned max_bits) {
  for (unsigned bits = std::max(start_bits, 1u); bits <= max_bits; bits *= 2) {
    const QMatrix projected = project_to_gram(var, round_matrix(approx, bits));
    LDLFactorization f;
    try {
      f = ldlt(projected);
    } catch (const NotPositiveDefinite&) {
      continue;
    } catch (const ZeroPivot&) {
      continue;
    }
    ExactGram out;
    out.q = projected;
    out.nu0 = matrix_denominator(projected);
    out.bits = bits;
    for (auto& [w, v] : f.squares()) {
      Polynomial s(basis.empty() ? 0 : basis[0].nvars());
      for (std::size_t i = 0; i < v.size(); ++i)
        if (sgn(v[i]) != 0) s += basis[i] * v[i];
      out.squares.push_back({w, std::move(s)});
    }
    out.ldl = std::move(f);
    return out;
  }
  throw PrecisionExceeded("no positive definite Gram matrix up to " + std::to_string(max_bits) +
                          " bits");
}

ExactGram round_and_certify(const QuotientRing& q, const VarietyData& var, const Polynomial& p,
                            unsigned start_bits, unsigned max_bits) {
  const RealGram g = build_gram_real(q, var, p);
  const auto basis = basis_polynomials(q);
  return certify_gram(GramVariety::modulo(q, basis, p), g.q, basis, start_bits, max_bits);
}

}  // namespace soscert
