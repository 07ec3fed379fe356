#pragma once

#include <stdexcept>
#include <string>

namespace soscert {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text. `line` is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, int line = 0, int column = 0)
      : Error(format(msg, line, column)), line_(line), column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  static std::string format(const std::string& msg, int line, int column) {
    std::string out;
    if (line > 0) out += "line " + std::to_string(line) + ": ";
    if (column > 0) out += "col " + std::to_string(column) + ": ";
    return out + msg;
  }
  int line_;
  int column_;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

class NotZeroDimensional : public Error {
 public:
  NotZeroDimensional() : Error("ideal is not zero-dimensional") {}
};

// (I:f)+(f) != (1); no certificate of the requested shape is guaranteed.
class ConditionFailed : public Error {
 public:
  using Error::Error;
};

class NotStrictlyPositiveOnS : public ConditionFailed {
 public:
  using ConditionFailed::ConditionFailed;
};

class NotInvertible : public Error {
 public:
  NotInvertible() : Error("element is not invertible modulo the ideal") {}
};

class NotGraded : public Error {
 public:
  NotGraded() : Error("equality constraints are not a graded basis") {}
};

class ClusterAmbiguity : public Error {
 public:
  using Error::Error;
};

class SingularVandermonde : public Error {
 public:
  SingularVandermonde() : Error("Vandermonde matrix of the roots is singular") {}
};

class NonPositiveAtRealRoot : public Error {
 public:
  using Error::Error;
};

class InfeasibleVariety : public Error {
 public:
  InfeasibleVariety() : Error("Gram variety is empty") {}
};

// Raised by ldlt; index is the 1-based pivot position.
class NotPositiveDefinite : public Error {
 public:
  explicit NotPositiveDefinite(int index)
      : Error("matrix is not positive definite (pivot " + std::to_string(index) + ")"),
        index_(index) {}
  int index() const { return index_; }

 private:
  int index_;
};

class ZeroPivot : public Error {
 public:
  explicit ZeroPivot(int index)
      : Error("zero pivot at " + std::to_string(index)), index_(index) {}
  int index() const { return index_; }

 private:
  int index_;
};

class PrecisionExceeded : public Error {
 public:
  using Error::Error;
};

class Infeasible : public Error {
 public:
  Infeasible(const std::string& msg, double residual) : Error(msg), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

class MaxIterations : public Error {
 public:
  MaxIterations(const std::string& msg, double residual) : Error(msg), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

}  // namespace soscert
