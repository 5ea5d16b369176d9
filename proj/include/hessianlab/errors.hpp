#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace hessianlab {

// Base of every error thrown by the library. `code()` is a stable,
// machine-readable tag; `what()` carries the human-readable details.
class Error : public std::runtime_error {
 public:
  explicit Error(std::string code, const std::string& msg)
      : std::runtime_error(msg), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

class SyntaxError : public Error {
 public:
  SyntaxError(int position, std::string expected, const std::string& msg)
      : Error("SyntaxError", msg), position_(position), expected_(std::move(expected)) {}
  int position() const { return position_; }
  const std::string& expected() const { return expected_; }

 private:
  int position_;
  std::string expected_;
};

class UnknownIdentifier : public Error {
 public:
  UnknownIdentifier(std::string name, int position)
      : Error("UnknownIdentifier",
              "unknown identifier '" + name + "' at position " + std::to_string(position)),
        name_(std::move(name)),
        position_(position) {}
  const std::string& name() const { return name_; }
  int position() const { return position_; }

 private:
  std::string name_;
  int position_;
};

class VariableOutOfRange : public Error {
 public:
  VariableOutOfRange(int index, int n, int position)
      : Error("VariableOutOfRange", "variable x" + std::to_string(index) +
                                        " out of range for dimension " + std::to_string(n) +
                                        " at position " + std::to_string(position)),
        index_(index),
        n_(n) {}
  int index() const { return index_; }
  int dimension() const { return n_; }

 private:
  int index_;
  int n_;
};

class DomainError : public Error {
 public:
  DomainError(const std::string& reason, int position = -1)
      : Error("DomainError", position >= 0
                                 ? reason + " (expression position " + std::to_string(position) + ")"
                                 : reason),
        position_(position) {}
  int position() const { return position_; }

 private:
  int position_;
};

class DivisionByZeroValuePart : public Error {
 public:
  DivisionByZeroValuePart() : Error("DivisionByZeroValuePart", "jet division by zero value part") {}
};

class OrderExceeded : public Error {
 public:
  OrderExceeded(int requested, int available)
      : Error("OrderExceeded", "derivative order " + std::to_string(requested) +
                                   " exceeds jet truncation order " + std::to_string(available)) {}
};

class ShapeMismatch : public Error {
 public:
  ShapeMismatch(const std::string& msg) : Error("ShapeMismatch", msg) {}
};

class SingularMatrix : public Error {
 public:
  explicit SingularMatrix(double det)
      : Error("SingularMatrix", "matrix determinant " + std::to_string(det) + " below threshold") {}
};

class NonConvexAt : public Error {
 public:
  NonConvexAt(Eigen::VectorXd point, double min_eig);
  const Eigen::VectorXd& point() const { return point_; }
  double min_eigenvalue() const { return min_eig_; }

 private:
  Eigen::VectorXd point_;
  double min_eig_;
};

class UndefinedForDimensionOne : public Error {
 public:
  UndefinedForDimensionOne()
      : Error("UndefinedForDimensionOne", "Pick invariant J is undefined for n = 1") {}
};

class DegenerateGradient : public Error {
 public:
  DegenerateGradient()
      : Error("DegenerateGradient", "gradient norm below frame-degeneracy threshold") {}
};

class StencilOutsideDomain : public Error {
 public:
  StencilOutsideDomain()
      : Error("StencilOutsideDomain", "finite-difference stencil leaves the domain box") {}
};

inline NonConvexAt::NonConvexAt(Eigen::VectorXd point, double min_eig)
    : Error("NonConvexAt",
            [&] {
              std::string s = "Hessian not positive definite at (";
              for (int i = 0; i < point.size(); ++i) {
                if (i) s += ", ";
                s += std::to_string(point[i]);
              }
              s += "), smallest eigenvalue estimate " + std::to_string(min_eig);
              return s;
            }()),
      point_(std::move(point)),
      min_eig_(min_eig) {}

}  // namespace hessianlab
