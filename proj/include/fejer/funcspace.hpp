#pragma once

#include <complex>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <span>
#include <variant>
#include <vector>

#include "fejer/index_core.hpp"

namespace fejer {

using Complex = std::complex<double>;
// A point of the (truncated) torus; x[0] is coordinate 1.
using Point = std::vector<double>;

// e^{2 pi i t}, with t reduced modulo 1 before the polar form.
Complex unit_phase(double t);

// Finite sum of Jessen characters: sum_n c_n e^{2 pi i n.x}.
class TrigPoly {
 public:
  TrigPoly() = default;
  explicit TrigPoly(std::map<MultiIndex, Complex> coeffs);

  static TrigPoly constant(Complex c);
  static TrigPoly character(const MultiIndex& n, Complex c = 1.0);

  // Adds c to the coefficient of n; exact zeros are removed.
  TrigPoly& add(const MultiIndex& n, Complex c);

  Complex coefficient(const MultiIndex& n) const;
  const std::map<MultiIndex, Complex>& terms() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }

  // Largest coordinate in the union of supports.
  int active_dim() const;
  // max over terms and coordinates of |n_k|.
  int max_degree() const;

  Complex operator()(std::span<const double> x) const;

  friend bool operator==(const TrigPoly&, const TrigPoly&) = default;

 private:
  std::map<MultiIndex, Complex> coeffs_;
};

// prod_k eps_k^{-1} 1[0 <= x_k < eps_k] over finitely many coordinates.
// Unit integral; every factor has a closed-form Fourier coefficient.
class SpikeTensor {
 public:
  SpikeTensor() = default;
  // coordinate -> width eps in (0, 1].
  explicit SpikeTensor(std::map<int, double> widths);

  const std::map<int, double>& widths() const { return widths_; }
  int active_dim() const { return widths_.empty() ? 0 : widths_.rbegin()->first; }
  // Value on the support, prod_k 1/eps_k.
  double height() const;

  double operator()(std::span<const double> x) const;

  friend bool operator==(const SpikeTensor&, const SpikeTensor&) = default;

 private:
  std::map<int, double> widths_;
};

// Samples of a function of the first m coordinates on the product grid of
// nodes j/G_k, row-major with coordinate 1 outermost. Constant in
// coordinates > m.
class CylinderGrid {
 public:
  CylinderGrid() : samples_(1, Complex(0.0)) {}
  CylinderGrid(std::vector<std::size_t> sizes, std::vector<Complex> samples);

  static CylinderGrid sample(const std::function<Complex(std::span<const double>)>& f,
                             std::vector<std::size_t> sizes);
  static CylinderGrid sample(const TrigPoly& f, std::vector<std::size_t> sizes);

  int m() const { return static_cast<int>(sizes_.size()); }
  const std::vector<std::size_t>& sizes() const { return sizes_; }
  const std::vector<Complex>& samples() const { return samples_; }
  std::size_t stride(int axis) const;

  // Value at the nearest grid node.
  Complex operator()(std::span<const double> x) const;

  // Little-endian complex64: (float32 re, float32 im) per sample, in the
  // row-major order above. No header; sizes come from the caller.
  static CylinderGrid read_binary(const std::filesystem::path& path,
                                  std::vector<std::size_t> sizes);
  void write_binary(const std::filesystem::path& path) const;

  friend bool operator==(const CylinderGrid&, const CylinderGrid&) = default;

 private:
  std::vector<std::size_t> sizes_;
  std::vector<Complex> samples_;
};

using Function = std::variant<TrigPoly, SpikeTensor, CylinderGrid>;

int active_dim(const Function& f);

// Throws MissingCoordinate if x is shorter than the active support.
Complex eval(const Function& f, std::span<const double> x);

// f_m: integrate out every coordinate > m.
TrigPoly marginalize(const TrigPoly& f, int m);
SpikeTensor marginalize(const SpikeTensor& f, int m);
CylinderGrid marginalize(const CylinderGrid& f, int m);
Function marginalize(const Function& f, int m);

struct QuadratureOptions {
  // Nodes per axis. 0 starts from a power of two set by the degree and doubles
  // until the halved grid agrees.
  std::size_t grid = 0;
  // Allowed |Q(grid) - Q(grid/2)| relative to max(1, |Q(grid)|).
  double tolerance = 1e-8;
  // Refuse product grids larger than this.
  std::size_t max_nodes = std::size_t{1} << 24;
};

// |s| ln^d(|s| + 1); d = 0 gives |s|.
double orlicz_integrand(double magnitude, int d);

// int |f| ln^d(|f|+1) dmu. Closed form for spikes, uniform-grid quadrature
// for polynomials (with a halved-grid resolution check) and grids.
double orlicz_functional(const Function& f, int d, const QuadratureOptions& opts = {});

struct LemmaResult {
  double lhs = 0.0;  // functional of the marginal f_m
  double rhs = 0.0;  // functional of f
  bool holds = false;
};

LemmaResult lemma_check(const Function& f, int m, int d, double tolerance = 1e-8,
                        const QuadratureOptions& opts = {});

// Per-axis node count used for polynomial quadrature under opts.
std::size_t quadrature_grid_size(const TrigPoly& f, const QuadratureOptions& opts);

}  // namespace fejer
