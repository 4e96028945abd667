#include "symmoments/coeffs.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace symmoments {

namespace {

void validate(const Eigen::VectorXd& values) {
  if (values.size() < 1) throw DomainError("coefficients: need at least one entry");
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw DomainError("coefficients[" + std::to_string(i) + "]: not a finite number");
    }
  }
}

Eigen::VectorXd to_vector(std::span<const double> values) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(values.size()));
  std::copy(values.begin(), values.end(), out.begin());
  return out;
}

}  // namespace

CoefficientVector::CoefficientVector(Eigen::VectorXd values) : values_(std::move(values)) {
  validate(values_);
}

CoefficientVector::CoefficientVector(std::initializer_list<double> values)
    : CoefficientVector(to_vector(std::span<const double>(values.begin(), values.size()))) {}

CoefficientVector::CoefficientVector(std::span<const double> values)
    : CoefficientVector(to_vector(values)) {}

double norm(const CoefficientVector& v, double q) { return lp_norm(v.values(), q); }

CoefficientVector rearrange(const CoefficientVector& v) {
  Eigen::VectorXd abs = v.values().cwiseAbs();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(abs.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index l, Eigen::Index r) { return abs[l] > abs[r]; });
  Eigen::VectorXd sorted(abs.size());
  for (std::size_t i = 0; i < order.size(); ++i) sorted[static_cast<Eigen::Index>(i)] = abs[order[i]];
  return CoefficientVector(std::move(sorted));
}

bool is_rearranged(const CoefficientVector& v) {
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    if (std::abs(v[i]) > std::abs(v[i - 1])) return false;
  }
  return true;
}

Eigen::Index split_index(double p) {
  if (std::isnan(p) || p < 0.0) throw DomainError("split_index: p must be >= 0");
  // p/2 is exact in binary floating point, so ceil sees the true half.
  return static_cast<Eigen::Index>(std::ceil(p / 2.0));
}

Eigen::Index indices_below(double p) {
  if (std::isnan(p) || p < 1.0) throw DomainError("indices_below: p must be >= 1");
  return static_cast<Eigen::Index>(std::ceil(p)) - 1;
}

HeadTail head_tail_split(const CoefficientVector& v, double p) {
  if (std::isnan(p) || p < 2.0) throw DomainError("head_tail_split: p must be >= 2");
  const Eigen::Index n = v.size();
  const Eigen::Index head_len = std::min(split_index(p) - 1, n);
  return {v.values().head(head_len), v.values().tail(n - head_len)};
}

}  // namespace symmoments
