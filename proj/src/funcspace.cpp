#include "fejer/funcspace.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <string>

#include "fejer/errors.hpp"

namespace fejer {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_coords(std::span<const double> x, int needed, const char* what) {
  if (x.size() < static_cast<std::size_t>(needed))
    throw MissingCoordinate(std::string(what) + " needs " + std::to_string(needed) +
                            " coordinates, point has " + std::to_string(x.size()));
}

std::size_t product(const std::vector<std::size_t>& v) {
  std::size_t n = 1;
  for (auto g : v) n *= g;
  return n;
}

std::size_t next_pow2(std::size_t n) {
  std::size_t g = 1;
  while (g < n) g <<= 1;
  return g;
}

}  // namespace

Complex unit_phase(double t) {
  const double s = t - std::floor(t);
  if (s == 0.0) return {1.0, 0.0};
  return std::polar(1.0, kTwoPi * s);
}

// ---------------------------------------------------------------------------
// TrigPoly

TrigPoly::TrigPoly(std::map<MultiIndex, Complex> coeffs) {
  for (const auto& [n, c] : coeffs) add(n, c);
}

TrigPoly TrigPoly::constant(Complex c) { return character(MultiIndex{}, c); }

TrigPoly TrigPoly::character(const MultiIndex& n, Complex c) {
  TrigPoly f;
  f.add(n, c);
  return f;
}

TrigPoly& TrigPoly::add(const MultiIndex& n, Complex c) {
  Complex& slot = coeffs_[n];
  slot += c;
  if (slot == Complex(0.0)) coeffs_.erase(n);
  return *this;
}

Complex TrigPoly::coefficient(const MultiIndex& n) const {
  auto it = coeffs_.find(n);
  return it == coeffs_.end() ? Complex(0.0) : it->second;
}

int TrigPoly::active_dim() const {
  int d = 0;
  for (const auto& [n, c] : coeffs_) d = std::max(d, n.max_coordinate());
  return d;
}

int TrigPoly::max_degree() const {
  int d = 0;
  for (const auto& [n, c] : coeffs_)
    for (const auto& [coord, v] : n.entries()) d = std::max(d, std::abs(v));
  return d;
}

Complex TrigPoly::operator()(std::span<const double> x) const {
  require_coords(x, active_dim(), "trigonometric polynomial");
  Complex s(0.0);
  for (const auto& [n, c] : coeffs_) {
    Complex phase(1.0, 0.0);
    for (const auto& [coord, v] : n.entries()) phase *= unit_phase(v * x[coord - 1]);
    s += c * phase;
  }
  return s;
}

// ---------------------------------------------------------------------------
// SpikeTensor

SpikeTensor::SpikeTensor(std::map<int, double> widths) : widths_(std::move(widths)) {
  for (const auto& [coord, eps] : widths_) {
    if (coord < 1) throw Error("spike coordinates are 1-based");
    if (!(eps > 0.0 && eps <= 1.0)) throw Error("spike width must lie in (0, 1]");
  }
}

double SpikeTensor::height() const {
  double h = 1.0;
  for (const auto& [coord, eps] : widths_) h /= eps;
  return h;
}

double SpikeTensor::operator()(std::span<const double> x) const {
  require_coords(x, active_dim(), "spike tensor");
  double v = 1.0;
  for (const auto& [coord, eps] : widths_) {
    const double t = x[coord - 1] - std::floor(x[coord - 1]);
    if (t >= eps) return 0.0;
    v /= eps;
  }
  return v;
}

// ---------------------------------------------------------------------------
// CylinderGrid

CylinderGrid::CylinderGrid(std::vector<std::size_t> sizes, std::vector<Complex> samples)
    : sizes_(std::move(sizes)), samples_(std::move(samples)) {
  for (auto g : sizes_)
    if (g == 0) throw Error("grid sizes must be positive");
  if (samples_.size() != product(sizes_))
    throw DimensionMismatch("grid expects " + std::to_string(product(sizes_)) +
                            " samples, got " + std::to_string(samples_.size()));
}

std::size_t CylinderGrid::stride(int axis) const {
  std::size_t s = 1;
  for (std::size_t k = static_cast<std::size_t>(axis) + 1; k < sizes_.size(); ++k)
    s *= sizes_[k];
  return s;
}

CylinderGrid CylinderGrid::sample(
    const std::function<Complex(std::span<const double>)>& f,
    std::vector<std::size_t> sizes) {
  const std::size_t total = product(sizes);
  std::vector<Complex> samples(total);
  Point x(sizes.size());
  std::vector<std::size_t> idx(sizes.size(), 0);
  for (std::size_t i = 0; i < total; ++i) {
    for (std::size_t k = 0; k < sizes.size(); ++k)
      x[k] = static_cast<double>(idx[k]) / static_cast<double>(sizes[k]);
    samples[i] = f(x);
    for (std::size_t k = sizes.size(); k-- > 0;) {
      if (++idx[k] < sizes[k]) break;
      idx[k] = 0;
    }
  }
  return CylinderGrid(std::move(sizes), std::move(samples));
}

CylinderGrid CylinderGrid::sample(const TrigPoly& f, std::vector<std::size_t> sizes) {
  if (f.active_dim() > static_cast<int>(sizes.size()))
    throw DimensionMismatch("grid with " + std::to_string(sizes.size()) +
                            " axes cannot hold a polynomial in " +
                            std::to_string(f.active_dim()) + " coordinates");
  // Per-axis root-of-unity tables keep the phases exact modulo rounding of
  // a single polar() call.
  std::vector<std::vector<Complex>> roots(sizes.size());
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    roots[k].resize(sizes[k]);
    for (std::size_t r = 0; r < sizes[k]; ++r)
      roots[k][r] = unit_phase(static_cast<double>(r) / static_cast<double>(sizes[k]));
  }
  struct Term {
    Complex c;
    std::vector<std::pair<std::size_t, long long>> axes;
  };
  std::vector<Term> terms;
  for (const auto& [n, c] : f.terms()) {
    Term t{c, {}};
    for (const auto& [coord, v] : n.entries())
      t.axes.emplace_back(static_cast<std::size_t>(coord - 1), v);
    terms.push_back(std::move(t));
  }

  const std::size_t total = product(sizes);
  std::vector<Complex> samples(total);
  std::vector<std::size_t> idx(sizes.size(), 0);
  for (std::size_t i = 0; i < total; ++i) {
    Complex s(0.0);
    for (const auto& t : terms) {
      Complex ph = t.c;
      for (const auto& [axis, v] : t.axes) {
        const auto g = static_cast<long long>(sizes[axis]);
        long long r = (v * static_cast<long long>(idx[axis])) % g;
        if (r < 0) r += g;
        ph *= roots[axis][static_cast<std::size_t>(r)];
      }
      s += ph;
    }
    samples[i] = s;
    for (std::size_t k = sizes.size(); k-- > 0;) {
      if (++idx[k] < sizes[k]) break;
      idx[k] = 0;
    }
  }
  return CylinderGrid(std::move(sizes), std::move(samples));
}

Complex CylinderGrid::operator()(std::span<const double> x) const {
  require_coords(x, m(), "grid function");
  std::size_t flat = 0;
  for (std::size_t k = 0; k < sizes_.size(); ++k) {
    const double g = static_cast<double>(sizes_[k]);
    const double t = x[k] - std::floor(x[k]);
    auto j = static_cast<std::size_t>(std::llround(t * g)) % sizes_[k];
    flat = flat * sizes_[k] + j;
  }
  return samples_[flat];
}

CylinderGrid CylinderGrid::read_binary(const std::filesystem::path& path,
                                       std::vector<std::size_t> sizes) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open grid file " + path.string());
  const std::size_t total = product(sizes);
  std::vector<Complex> samples(total);
  unsigned char buf[8];
  for (std::size_t i = 0; i < total; ++i) {
    if (!in.read(reinterpret_cast<char*>(buf), 8))
      throw ConfigError("grid file " + path.string() + " holds fewer than " +
                        std::to_string(total) + " samples");
    auto word = [&](int off) {
      std::uint32_t w = 0;
      for (int b = 3; b >= 0; --b) w = (w << 8) | buf[off + b];
      return std::bit_cast<float>(w);
    };
    samples[i] = Complex(word(0), word(4));
  }
  if (in.peek() != std::char_traits<char>::eof())
    throw ConfigError("grid file " + path.string() + " holds more than " +
                      std::to_string(total) + " samples");
  return CylinderGrid(std::move(sizes), std::move(samples));
}

void CylinderGrid::write_binary(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write grid file " + path.string());
  unsigned char buf[8];
  for (const auto& s : samples_) {
    auto put = [&](int off, float v) {
      auto w = std::bit_cast<std::uint32_t>(v);
      for (int b = 0; b < 4; ++b) buf[off + b] = static_cast<unsigned char>(w >> (8 * b));
    };
    put(0, static_cast<float>(s.real()));
    put(4, static_cast<float>(s.imag()));
    out.write(reinterpret_cast<const char*>(buf), 8);
  }
  if (!out) throw Error("write failed for " + path.string());
}

// ---------------------------------------------------------------------------
// Function-level operations

int active_dim(const Function& f) {
  return std::visit(
      [](const auto& g) -> int {
        if constexpr (std::is_same_v<std::decay_t<decltype(g)>, CylinderGrid>)
          return g.m();
        else
          return g.active_dim();
      },
      f);
}

Complex eval(const Function& f, std::span<const double> x) {
  return std::visit([&](const auto& g) { return Complex(g(x)); }, f);
}

TrigPoly marginalize(const TrigPoly& f, int m) {
  if (m < 0) throw Error("marginalize: m must be >= 0");
  TrigPoly out;
  for (const auto& [n, c] : f.terms())
    if (n.supported_within(m)) out.add(n, c);
  return out;
}

SpikeTensor marginalize(const SpikeTensor& f, int m) {
  if (m < 0) throw Error("marginalize: m must be >= 0");
  std::map<int, double> kept;
  for (const auto& [coord, eps] : f.widths())
    if (coord <= m) kept.emplace(coord, eps);
  return SpikeTensor(std::move(kept));
}

CylinderGrid marginalize(const CylinderGrid& f, int m) {
  if (m < 0) throw Error("marginalize: m must be >= 0");
  if (m >= f.m()) return f;
  std::vector<std::size_t> sizes(f.sizes().begin(), f.sizes().begin() + m);
  const std::size_t outer = product(sizes);
  const std::size_t inner = f.samples().size() / outer;
  std::vector<Complex> samples(outer);
  for (std::size_t o = 0; o < outer; ++o) {
    Complex s(0.0);
    for (std::size_t i = 0; i < inner; ++i) s += f.samples()[o * inner + i];
    samples[o] = s / static_cast<double>(inner);
  }
  return CylinderGrid(std::move(sizes), std::move(samples));
}

Function marginalize(const Function& f, int m) {
  return std::visit([m](const auto& g) -> Function { return marginalize(g, m); }, f);
}

// ---------------------------------------------------------------------------
// Orlicz functionals

double orlicz_integrand(double magnitude, int d) {
  if (d < 0) throw Error("Orlicz exponent must be >= 0");
  if (magnitude == 0.0) return 0.0;
  return magnitude * std::pow(std::log1p(magnitude), d);
}

std::size_t quadrature_grid_size(const TrigPoly& f, const QuadratureOptions& opts) {
  if (opts.grid != 0) return opts.grid;
  const auto deg = static_cast<std::size_t>(f.max_degree());
  return next_pow2(std::max<std::size_t>(16, 8 * (deg + 1)));
}

namespace {

double grid_mean_integrand(const CylinderGrid& g, int d) {
  double s = 0.0;
  for (const auto& v : g.samples()) s += orlicz_integrand(std::abs(v), d);
  return s / static_cast<double>(g.samples().size());
}

struct Quadrature {
  double value = 0.0;
  std::size_t grid = 0;
};

// Fixed grid when opts.grid is set; otherwise doubles until the halved grid agrees.
Quadrature orlicz_trigpoly(const TrigPoly& f, int d, const QuadratureOptions& opts) {
  const int dims = f.active_dim();
  if (dims == 0) return {orlicz_integrand(std::abs(f.coefficient(MultiIndex{})), d), 1};

  std::size_t g = quadrature_grid_size(f, opts);
  if (g < 2) throw ResolutionError("quadrature grid needs at least 2 nodes per axis");
  const auto mean_at = [&](std::size_t n) {
    return grid_mean_integrand(CylinderGrid::sample(f, std::vector<std::size_t>(dims, n)), d);
  };
  double coarse = mean_at(g / 2);
  while (true) {
    const double nodes = std::pow(static_cast<double>(g), dims);
    if (nodes > static_cast<double>(opts.max_nodes))
      throw ResolutionError("quadrature over " + std::to_string(dims) + " axes at " +
                            std::to_string(g) + " nodes/axis exceeds the node budget");
    const double fine = mean_at(g);
    const double diff = std::abs(fine - coarse);
    if (diff <= opts.tolerance * std::max(1.0, std::abs(fine))) return {fine, g};
    if (opts.grid != 0)
      throw ResolutionError("quadrature at " + std::to_string(g) +
                            " nodes/axis not converged: halved grid differs by " +
                            std::to_string(diff));
    coarse = fine;
    g *= 2;
  }
}

}  // namespace

double orlicz_functional(const Function& f, int d, const QuadratureOptions& opts) {
  if (d < 0) throw Error("Orlicz exponent must be >= 0");
  if (const auto* s = std::get_if<SpikeTensor>(&f))
    return orlicz_integrand(s->height(), d) / s->height();
  if (const auto* g = std::get_if<CylinderGrid>(&f)) return grid_mean_integrand(*g, d);
  return orlicz_trigpoly(std::get<TrigPoly>(f), d, opts).value;
}

LemmaResult lemma_check(const Function& f, int m, int d, double tolerance,
                        const QuadratureOptions& opts) {
  LemmaResult r;
  if (const auto* t = std::get_if<TrigPoly>(&f)) {
    // Both sides on the nodes that resolve f; there the grid marginal is the node average.
    const auto full = orlicz_trigpoly(*t, d, opts);
    QuadratureOptions q = opts;
    q.grid = full.grid;
    q.tolerance = std::numeric_limits<double>::infinity();
    r.rhs = full.value;
    r.lhs = orlicz_trigpoly(std::get<TrigPoly>(marginalize(f, m)), d, q).value;
  } else {
    r.lhs = orlicz_functional(marginalize(f, m), d, opts);
    r.rhs = orlicz_functional(f, d, opts);
  }
  r.holds = r.lhs <= r.rhs + tolerance;
  return r;
}

}  // namespace fejer
