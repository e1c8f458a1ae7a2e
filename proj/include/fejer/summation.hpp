#pragma once

#include <functional>
#include <memory>
#include <span>
#include <variant>
#include <vector>

#include "fejer/funcspace.hpp"
#include "fejer/index_core.hpp"

namespace fejer {

// Triangular Fejer weight (N+1-|n|)/(N+1), zero outside |n| <= N.
double fejer_weight(int n, int degree);

// c_n = int f(x) e^{-2 pi i n.x} dx.
// Polynomials: lookup. Spikes: product of (1 - e^{-2 pi i n eps})/(2 pi i n eps).
// Grids: discrete transform of the samples; throws ResolutionError when
// |n_k| >= G_k/2, zero for coordinates beyond m.
Complex fourier_coeff(const Function& f, const MultiIndex& n);

// Dense coefficient table over the box |n_j| <= N_j, j = 1..p, with
// n_j = 0 for j > p.
class FourierTable {
 public:
  static FourierTable build(const Function& f, const RectIndex& box);

  const RectIndex& box() const { return box_; }
  bool covers(const MultiIndex& n) const;
  // Throws MissingCoefficients outside the box.
  Complex operator()(const MultiIndex& n) const;
  // max |c_{-n} - conj(c_n)| over the box.
  double conjugate_asymmetry() const;

 private:
  FourierTable(RectIndex box, std::vector<Complex> coeffs)
      : box_(std::move(box)), coeffs_(std::move(coeffs)) {}
  std::size_t offset(const MultiIndex& n) const;

  friend Complex weighted_sum(const FourierTable&, const RectIndex&,
                              std::span<const double>, bool);

  RectIndex box_;
  std::vector<Complex> coeffs_;
};

// Rectangular partial sum S_{p,N_1..N_p}(x).
Complex partial_sum(const Function& f, const RectIndex& rect, std::span<const double> x);
Complex partial_sum(const FourierTable& table, const RectIndex& rect,
                    std::span<const double> x);

// Fejer mean as the triangular-weight coefficient sum.
Complex fejer_mean_weights(const Function& f, const RectIndex& rect,
                           std::span<const double> x);
Complex fejer_mean_weights(const FourierTable& table, const RectIndex& rect,
                           std::span<const double> x);

// Fejer mean as quadrature of prod_j K_{N_j}(x_j - t_j) f(t) over the grid.
// Requires rect.p() <= f.m() and G_j >= 2 N_j + 2.
Complex fejer_mean_conv(const CylinderGrid& f, const RectIndex& rect,
                        std::span<const double> x);

// s_p = fejer_mean_weights(f, rect_p, x), p = 1..p_max, where rect_p is the
// final element of enumerate_net(schedule, p, n_of_p(p), seed).
std::vector<Complex> strengthened_limit(const Function& f, const Schedule& schedule,
                                        int p_max, const std::function<int(int)>& n_of_p,
                                        std::span<const double> x,
                                        std::uint64_t seed = 0);

// Fejer means of one function at one point for many rectangles with
// p <= max_p and degrees <= max_degree.
class MeanEvaluator {
 public:
  MeanEvaluator(const Function& f, std::span<const double> x, int max_p, int max_degree);
  // Shares a prebuilt table across points; bounds are the table's box.
  MeanEvaluator(std::shared_ptr<const FourierTable> table, std::span<const double> x);

  Complex operator()(const RectIndex& rect) const;

 private:
  struct Term {
    Complex value;  // c_n e^{2 pi i n.x}
    int max_coord;
    std::vector<std::pair<int, int>> axes;  // (axis, |n_axis|)
  };
  struct Terms {
    std::vector<Term> terms;
  };
  struct AxisMeans {
    // means[axis][N]; axes of the spike beyond max_p are absent.
    std::vector<std::vector<Complex>> means;
    std::vector<bool> present;
  };
  struct Table {
    std::shared_ptr<const FourierTable> table;
    Point x;
  };

  int max_p_;
  int max_degree_;
  std::variant<Terms, AxisMeans, Table> state_;
};

}  // namespace fejer
