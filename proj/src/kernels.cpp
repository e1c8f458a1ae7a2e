#include "fejer/kernels.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fejer/errors.hpp"

namespace fejer {

namespace {

constexpr double kPi = std::numbers::pi;
// Below this |sin(pi t)| the limit value is used.
constexpr double kNearSingular = 1e-8;

void require_degree(int l) {
  if (l < 0) throw Error("kernel degree must be nonnegative, got " + std::to_string(l));
}

}  // namespace

double wrap_centered(double t) {
  double s = t - std::floor(t + 0.5);
  return s;
}

double dirichlet(int l, double t) {
  require_degree(l);
  const double s = wrap_centered(t);
  const double den = std::sin(kPi * s);
  if (std::abs(den) < kNearSingular) return 2.0 * l + 1.0;
  return std::sin((2.0 * l + 1.0) * kPi * s) / den;
}

double fejer(int l, double t) {
  require_degree(l);
  const double s = wrap_centered(t);
  const double den = std::sin(kPi * s);
  if (std::abs(den) < kNearSingular) return l + 1.0;
  const double q = std::sin((l + 1.0) * kPi * s) / den;
  return q * q / (l + 1.0);
}

double kernel_tensor(const RectIndex& rect, std::span<const double> x,
                     std::span<const double> t) {
  const auto p = static_cast<std::size_t>(rect.p());
  if (x.size() != p || t.size() != p)
    throw DimensionMismatch("kernel_tensor: expected " + std::to_string(p) +
                            " coordinates, got x=" + std::to_string(x.size()) +
                            " t=" + std::to_string(t.size()));
  double prod = 1.0;
  for (std::size_t j = 0; j < p; ++j) prod *= fejer(rect.degree(static_cast<int>(j)), x[j] - t[j]);
  return prod;
}

}  // namespace fejer
