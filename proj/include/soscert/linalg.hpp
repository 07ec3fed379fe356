#pragma once

#include <optional>
#include <vector>

#include "soscert/polynomial.hpp"

namespace soscert {

// Dense row-major matrix over the rationals.
class QMatrix {
 public:
  QMatrix() = default;
  QMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static QMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::vector<Rational> row(std::size_t i) const;
  std::vector<Rational> column(std::size_t j) const;
  QMatrix transpose() const;
  bool is_symmetric() const;

  friend QMatrix operator*(const QMatrix& a, const QMatrix& b);
  friend QMatrix operator+(const QMatrix& a, const QMatrix& b);
  friend QMatrix operator-(const QMatrix& a, const QMatrix& b);
  friend std::vector<Rational> operator*(const QMatrix& a, const std::vector<Rational>& v);
  friend bool operator==(const QMatrix& a, const QMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

struct Echelon {
  QMatrix reduced;
  std::vector<std::size_t> pivots;  // pivot column of each nonzero row
};

Echelon rref(QMatrix a);
std::size_t rank(const QMatrix& a);
// Particular solution with free variables set to zero; nullopt when inconsistent.
std::optional<std::vector<Rational>> solve(const QMatrix& a, const std::vector<Rational>& b);
std::vector<std::vector<Rational>> nullspace(const QMatrix& a);
std::optional<QMatrix> inverse(const QMatrix& a);

std::vector<double> to_double(const std::vector<Rational>& v);

// Univariate polynomials over Q as ascending coefficient vectors.
using UniPoly = std::vector<Rational>;
void trim(UniPoly& p);
UniPoly derivative(const UniPoly& p);
UniPoly poly_rem(UniPoly a, const UniPoly& b);
UniPoly poly_div(UniPoly a, const UniPoly& b);
UniPoly poly_gcd(UniPoly a, UniPoly b);
UniPoly squarefree_part(const UniPoly& p);

}  // namespace soscert
