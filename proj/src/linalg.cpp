#include "soscert/linalg.hpp"

#include <utility>

namespace soscert {

QMatrix QMatrix::identity(std::size_t n) {
  QMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

std::vector<Rational> QMatrix::row(std::size_t i) const {
  return std::vector<Rational>(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_);
}

std::vector<Rational> QMatrix::column(std::size_t j) const {
  std::vector<Rational> c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

QMatrix QMatrix::transpose() const {
  QMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

bool QMatrix::is_symmetric() const {
  if (rows_ != cols_) return false;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i + 1; j < cols_; ++j)
      if ((*this)(i, j) != (*this)(j, i)) return false;
  return true;
}

QMatrix operator*(const QMatrix& a, const QMatrix& b) {
  if (a.cols_ != b.rows_) throw InvalidInput("matrix shape mismatch");
  QMatrix c(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Rational& aik = a(i, k);
      if (sgn(aik) == 0) continue;
      for (std::size_t j = 0; j < b.cols_; ++j)
        if (sgn(b(k, j)) != 0) c(i, j) += aik * b(k, j);
    }
  return c;
}

QMatrix operator+(const QMatrix& a, const QMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw InvalidInput("matrix shape mismatch");
  QMatrix c(a);
  for (std::size_t k = 0; k < c.data_.size(); ++k) c.data_[k] += b.data_[k];
  return c;
}

QMatrix operator-(const QMatrix& a, const QMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw InvalidInput("matrix shape mismatch");
  QMatrix c(a);
  for (std::size_t k = 0; k < c.data_.size(); ++k) c.data_[k] -= b.data_[k];
  return c;
}

std::vector<Rational> operator*(const QMatrix& a, const std::vector<Rational>& v) {
  if (a.cols_ != v.size()) throw InvalidInput("matrix shape mismatch");
  std::vector<Rational> r(a.rows_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t j = 0; j < a.cols_; ++j)
      if (sgn(a(i, j)) != 0 && sgn(v[j]) != 0) r[i] += a(i, j) * v[j];
  return r;
}

Echelon rref(QMatrix a) {
  Echelon e;
  const std::size_t m = a.rows(), n = a.cols();
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < m; ++c) {
    std::size_t p = r;
    while (p < m && sgn(a(p, c)) == 0) ++p;
    if (p == m) continue;
    if (p != r)
      for (std::size_t j = 0; j < n; ++j) std::swap(a(p, j), a(r, j));
    const Rational inv = 1 / a(r, c);
    for (std::size_t j = c; j < n; ++j) a(r, j) *= inv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == r || sgn(a(i, c)) == 0) continue;
      const Rational factor = a(i, c);
      for (std::size_t j = c; j < n; ++j)
        if (sgn(a(r, j)) != 0) a(i, j) -= factor * a(r, j);
    }
    e.pivots.push_back(c);
    ++r;
  }
  e.reduced = std::move(a);
  return e;
}

std::size_t rank(const QMatrix& a) { return rref(a).pivots.size(); }

std::optional<std::vector<Rational>> solve(const QMatrix& a, const std::vector<Rational>& b) {
  if (b.size() != a.rows()) throw InvalidInput("right-hand side size mismatch");
  QMatrix aug(a.rows(), a.cols() + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
    aug(i, a.cols()) = b[i];
  }
  const Echelon e = rref(std::move(aug));
  std::vector<Rational> x(a.cols());
  for (std::size_t r = 0; r < e.pivots.size(); ++r) {
    if (e.pivots[r] == a.cols()) return std::nullopt;
    x[e.pivots[r]] = e.reduced(r, a.cols());
  }
  return x;
}

std::vector<std::vector<Rational>> nullspace(const QMatrix& a) {
  const Echelon e = rref(a);
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<std::vector<Rational>> basis;
  for (std::size_t f = 0; f < a.cols(); ++f) {
    if (is_pivot[f]) continue;
    std::vector<Rational> v(a.cols());
    v[f] = 1;
    for (std::size_t r = 0; r < e.pivots.size(); ++r) v[e.pivots[r]] = -e.reduced(r, f);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<QMatrix> inverse(const QMatrix& a) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw InvalidInput("inverse of a non-square matrix");
  QMatrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n + i) = 1;
  }
  const Echelon e = rref(std::move(aug));
  if (e.pivots.size() < n || (n > 0 && e.pivots[n - 1] != n - 1)) return std::nullopt;
  QMatrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = e.reduced(i, n + j);
  return inv;
}

std::vector<double> to_double(const std::vector<Rational>& v) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i].get_d();
  return out;
}

void trim(UniPoly& p) {
  while (!p.empty() && sgn(p.back()) == 0) p.pop_back();
}

UniPoly derivative(const UniPoly& p) {
  UniPoly d;
  for (std::size_t k = 1; k < p.size(); ++k) d.push_back(p[k] * static_cast<long>(k));
  trim(d);
  return d;
}

namespace {

// Returns quotient; a becomes the remainder.
UniPoly divide(UniPoly& a, const UniPoly& b) {
  if (b.empty()) throw InvalidInput("division by the zero polynomial");
  trim(a);
  UniPoly q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0);
  while (a.size() >= b.size() && !a.empty()) {
    const std::size_t shift = a.size() - b.size();
    const Rational c = a.back() / b.back();
    q[shift] = c;
    for (std::size_t k = 0; k < b.size(); ++k) a[shift + k] -= c * b[k];
    trim(a);
  }
  trim(q);
  return q;
}

}  // namespace

UniPoly poly_rem(UniPoly a, const UniPoly& b) {
  divide(a, b);
  return a;
}

UniPoly poly_div(UniPoly a, const UniPoly& b) { return divide(a, b); }

UniPoly poly_gcd(UniPoly a, UniPoly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    UniPoly r = poly_rem(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    const Rational lc = a.back();
    for (auto& c : a) c /= lc;
  }
  return a;
}

UniPoly squarefree_part(const UniPoly& p) {
  UniPoly q = p;
  trim(q);
  if (q.size() <= 1) return q;
  UniPoly g = poly_gcd(q, derivative(q));
  UniPoly s = poly_div(q, g);
  const Rational lc = s.back();
  for (auto& c : s) c /= lc;
  return s;
}

}  // namespace soscert
