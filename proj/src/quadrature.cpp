#include "symmoments/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "symmoments/errors.hpp"

namespace symmoments::quadrature {

namespace {

// QUADPACK qk15 abscissae and weights.
constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrod = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGauss = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Piece {
  double a, b, value, error;
  bool operator<(const Piece& other) const { return error < other.error; }
};

Piece gauss_kronrod(const Integrand& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double f_center = f(center);
  double kronrod = f_center * kKronrod[7];
  double gauss = f_center * kGauss[3];
  double abs_sum = std::abs(kronrod);
  std::array<double, 7> f1{}, f2{};
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kNodes[j];
    f1[j] = f(center - dx);
    f2[j] = f(center + dx);
    kronrod += kKronrod[j] * (f1[j] + f2[j]);
    abs_sum += kKronrod[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1) gauss += kGauss[j / 2] * (f1[j] + f2[j]);
  }
  const double mean = 0.5 * kronrod;
  double asc = kKronrod[7] * std::abs(f_center - mean);
  for (int j = 0; j < 7; ++j) {
    asc += kKronrod[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
  }
  const double value = kronrod * half;
  asc *= std::abs(half);
  abs_sum *= std::abs(half);
  double error = std::abs((kronrod - gauss) * half);
  if (asc != 0.0 && error != 0.0) error = asc * std::min(1.0, std::pow(200.0 * error / asc, 1.5));
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (abs_sum > std::numeric_limits<double>::min() / (50.0 * eps)) {
    error = std::max(50.0 * eps * abs_sum, error);
  }
  if (!std::isfinite(value)) throw QuadratureError("quadrature: non-finite integrand value");
  return {a, b, value, error};
}

}  // namespace

Result integrate(const Integrand& f, std::span<const double> breakpoints, const Options& options) {
  if (breakpoints.size() < 2) throw DomainError("quadrature: need at least two breakpoints");
  std::priority_queue<Piece> queue;
  double total = 0.0;
  double total_error = 0.0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (breakpoints[i + 1] == breakpoints[i]) continue;
    Piece piece = gauss_kronrod(f, breakpoints[i], breakpoints[i + 1]);
    total += piece.value;
    total_error += piece.error;
    queue.push(piece);
  }
  auto done = [&] {
    return total_error <= std::max(options.abs_tol, options.rel_tol * std::abs(total));
  };
  while (!queue.empty() && !done()) {
    if (static_cast<int>(queue.size()) >= options.max_intervals) {
      throw QuadratureError("quadrature: subdivision cap of " +
                            std::to_string(options.max_intervals) +
                            " intervals reached (error estimate " + std::to_string(total_error) +
                            ")");
    }
    Piece worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      throw QuadratureError("quadrature: interval cannot be subdivided further");
    }
    Piece left = gauss_kronrod(f, worst.a, mid);
    Piece right = gauss_kronrod(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
  }
  // Re-sum from the pieces to shed the drift of the running updates.
  Result result;
  result.intervals = static_cast<int>(queue.size());
  std::vector<Piece> pieces;
  pieces.reserve(queue.size());
  while (!queue.empty()) {
    pieces.push_back(queue.top());
    queue.pop();
  }
  std::sort(pieces.begin(), pieces.end(), [](const Piece& l, const Piece& r) { return l.a < r.a; });
  for (const Piece& p : pieces) {
    result.value += p.value;
    result.error += p.error;
  }
  return result;
}

Result integrate(const Integrand& f, double a, double b, const Options& options) {
  const std::array<double, 2> limits{a, b};
  return integrate(f, limits, options);
}

}  // namespace symmoments::quadrature
