#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <initializer_list>
#include <limits>
#include <span>

#include "symmoments/errors.hpp"

namespace symmoments {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Finite, non-empty sequence of real weights a_1..a_n.
///
/// Storage is 0-based; every index mentioned in the documentation of the
/// free functions below is 1-based.
class CoefficientVector {
 public:
  explicit CoefficientVector(Eigen::VectorXd values);
  CoefficientVector(std::initializer_list<double> values);
  explicit CoefficientVector(std::span<const double> values);

  Eigen::Index size() const { return values_.size(); }
  double operator[](Eigen::Index i) const { return values_[i]; }
  const Eigen::VectorXd& values() const { return values_; }

  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }

  bool operator==(const CoefficientVector& other) const {
    return values_ == other.values_;
  }

 private:
  Eigen::VectorXd values_;
};

/// ℓ_q norm of any dense Eigen vector expression; q = kInfinity gives the
/// max norm. Empty input has norm 0.
template <typename Derived>
double lp_norm(const Eigen::MatrixBase<Derived>& x, double q) {
  if (std::isnan(q) || q < 1.0) throw DomainError("norm: q must be >= 1");
  if (x.size() == 0) return 0.0;
  const double top = x.cwiseAbs().maxCoeff();
  if (q == kInfinity || top == 0.0) return top;
  if (q == 1.0) return x.cwiseAbs().sum();
  // Scaling by the largest entry keeps (|x|/top)^q in [0, 1].
  const double sum = (x.cwiseAbs() / top).array().pow(q).sum();
  return top * std::pow(sum, 1.0 / q);
}

double norm(const CoefficientVector& v, double q);

/// Absolute values sorted nonincreasingly (a*_1 >= a*_2 >= ...). Ties keep
/// their original order.
CoefficientVector rearrange(const CoefficientVector& v);

/// True when |a_1| >= |a_2| >= ... >= |a_n|; signs are allowed.
bool is_rearranged(const CoefficientVector& v);

/// m = ceil(p/2), the first 1-based index of the tail.
Eigen::Index split_index(double p);

/// Number of leading indices i with i < p (1-based), i.e. ceil(p) - 1.
Eigen::Index indices_below(double p);

struct HeadTail {
  Eigen::VectorXd head;  // indices i < ceil(p/2), may be empty
  Eigen::VectorXd tail;  // indices i >= ceil(p/2), may be empty
};

/// Splits an already rearranged vector at m = ceil(p/2). Requires p >= 2.
HeadTail head_tail_split(const CoefficientVector& v, double p);

}  // namespace symmoments
