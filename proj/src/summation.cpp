#include "fejer/summation.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <string>

#include "fejer/errors.hpp"
#include "fejer/kernels.hpp"

namespace fejer {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::size_t kMaxTableEntries = std::size_t{1} << 26;

void require_point(std::span<const double> x, int p) {
  if (x.size() < static_cast<std::size_t>(p))
    throw MissingCoordinate("rectangle with p=" + std::to_string(p) +
                            " needs that many coordinates, point has " +
                            std::to_string(x.size()));
}

// Fourier coefficient of eps^{-1} 1[0, eps) at frequency n.
Complex spike_coeff(int n, double eps) {
  if (n == 0) return {1.0, 0.0};
  const double a = kTwoPi * n * eps;
  // (1 - e^{-ia}) / (ia) = (sin a + i (cos a - 1)) / a
  return {std::sin(a) / a, (std::cos(a) - 1.0) / a};
}

// sum over n of data[n] * prod_k vecs[k][n_k], contracting the last axis first.
Complex contract(std::vector<Complex> data, const std::vector<std::size_t>& sizes,
                 const std::vector<std::vector<Complex>>& vecs) {
  for (std::size_t k = sizes.size(); k-- > 0;) {
    const std::size_t g = sizes[k];
    const std::size_t outer = data.size() / g;
    std::vector<Complex> next(outer);
    for (std::size_t o = 0; o < outer; ++o) {
      Complex s(0.0);
      const Complex* row = data.data() + o * g;
      for (std::size_t j = 0; j < g; ++j) s += row[j] * vecs[k][j];
      next[o] = s;
    }
    data = std::move(next);
  }
  return data.at(0);
}

std::vector<Complex> roots_of_unity(std::size_t g, int sign) {
  std::vector<Complex> r(g);
  for (std::size_t j = 0; j < g; ++j)
    r[j] = unit_phase(sign * static_cast<double>(j) / static_cast<double>(g));
  return r;
}

std::size_t mod_index(long long v, std::size_t g) {
  const auto gg = static_cast<long long>(g);
  long long r = v % gg;
  if (r < 0) r += gg;
  return static_cast<std::size_t>(r);
}

void require_unaliased(const CylinderGrid& f, int axis, int n) {
  const auto g = f.sizes()[axis];
  if (2 * static_cast<std::size_t>(std::abs(n)) >= g)
    throw ResolutionError("frequency " + std::to_string(n) + " on axis " +
                          std::to_string(axis + 1) + " aliases on a grid of " +
                          std::to_string(g) + " nodes");
}

Complex grid_coeff(const CylinderGrid& f, const MultiIndex& n) {
  for (const auto& [coord, v] : n.entries()) {
    if (coord > f.m()) return {0.0, 0.0};
    require_unaliased(f, coord - 1, v);
  }
  std::vector<std::vector<Complex>> vecs(f.m());
  for (int k = 0; k < f.m(); ++k) {
    const auto g = f.sizes()[k];
    const auto roots = roots_of_unity(g, -1);
    vecs[k].resize(g);
    for (std::size_t j = 0; j < g; ++j)
      vecs[k][j] = roots[mod_index(static_cast<long long>(n[k + 1]) * static_cast<long long>(j), g)] /
                   static_cast<double>(g);
  }
  return contract(f.samples(), f.sizes(), vecs);
}

// Normalized DFT along every axis: out[r] = (1/G) sum_j in[j] e^{-2 pi i r j / G}.
std::vector<Complex> grid_dft(const CylinderGrid& f) {
  std::vector<Complex> data = f.samples();
  for (int k = 0; k < f.m(); ++k) {
    const std::size_t g = f.sizes()[k];
    const std::size_t stride = f.stride(k);
    const std::size_t outer = data.size() / (g * stride);
    const auto roots = roots_of_unity(g, -1);
    std::vector<Complex> line(g);
    for (std::size_t o = 0; o < outer; ++o)
      for (std::size_t i = 0; i < stride; ++i) {
        Complex* base = data.data() + o * g * stride + i;
        for (std::size_t r = 0; r < g; ++r) {
          Complex s(0.0);
          for (std::size_t j = 0; j < g; ++j) s += base[j * stride] * roots[(r * j) % g];
          line[r] = s / static_cast<double>(g);
        }
        for (std::size_t r = 0; r < g; ++r) base[r * stride] = line[r];
      }
  }
  return data;
}

template <class Weight>
Complex trig_sum(const TrigPoly& f, const RectIndex& rect, std::span<const double> x,
                 Weight weight) {
  require_point(x, rect.p());
  Complex s(0.0);
  for (const auto& [n, c] : f.terms()) {
    if (!n.supported_within(rect.p())) continue;
    double w = 1.0;
    Complex phase(1.0, 0.0);
    for (const auto& [coord, v] : n.entries()) {
      w *= weight(v, rect.degree(coord - 1));
      if (w == 0.0) break;
      phase *= unit_phase(v * x[coord - 1]);
    }
    if (w != 0.0) s += (w * c) * phase;
  }
  return s;
}

template <class Weight>
Complex spike_sum(const SpikeTensor& f, const RectIndex& rect, std::span<const double> x,
                  Weight weight) {
  require_point(x, rect.p());
  Complex prod(1.0, 0.0);
  for (const auto& [coord, eps] : f.widths()) {
    if (coord > rect.p()) break;
    const int big_n = rect.degree(coord - 1);
    Complex s(0.0);
    for (int n = -big_n; n <= big_n; ++n)
      s += weight(n, big_n) * spike_coeff(n, eps) * unit_phase(n * x[coord - 1]);
    prod *= s;
  }
  return prod;
}

double unit_weight(int n, int degree) { return std::abs(n) <= degree ? 1.0 : 0.0; }

}  // namespace

double fejer_weight(int n, int degree) {
  const int a = std::abs(n);
  if (a > degree) return 0.0;
  return static_cast<double>(degree + 1 - a) / static_cast<double>(degree + 1);
}

Complex fourier_coeff(const Function& f, const MultiIndex& n) {
  if (const auto* t = std::get_if<TrigPoly>(&f)) return t->coefficient(n);
  if (const auto* s = std::get_if<SpikeTensor>(&f)) {
    Complex c(1.0, 0.0);
    for (const auto& [coord, v] : n.entries()) {
      auto it = s->widths().find(coord);
      if (it == s->widths().end()) return {0.0, 0.0};
      c *= spike_coeff(v, it->second);
    }
    return c;
  }
  return grid_coeff(std::get<CylinderGrid>(f), n);
}

// ---------------------------------------------------------------------------
// FourierTable

FourierTable FourierTable::build(const Function& f, const RectIndex& box) {
  const int p = box.p();
  std::vector<std::size_t> dims(p);
  std::size_t total = 1;
  for (int j = 0; j < p; ++j) {
    dims[j] = 2 * static_cast<std::size_t>(box.degree(j)) + 1;
    total *= dims[j];
    if (total > kMaxTableEntries)
      throw Error("coefficient box " + box.to_string() + " is too large");
  }
  std::vector<Complex> coeffs(total, Complex(0.0));

  if (const auto* t = std::get_if<TrigPoly>(&f)) {
    FourierTable table(box, {});
    table.coeffs_ = std::move(coeffs);
    for (const auto& [n, c] : t->terms())
      if (table.covers(n)) table.coeffs_[table.offset(n)] = c;
    return table;
  }

  // Per-axis factors for separable sources, or the full transform for grids.
  std::vector<std::vector<Complex>> axis(p);
  if (const auto* s = std::get_if<SpikeTensor>(&f)) {
    for (int j = 0; j < p; ++j) {
      const int big_n = box.degree(j);
      axis[j].assign(dims[j], Complex(0.0));
      auto it = s->widths().find(j + 1);
      for (int n = -big_n; n <= big_n; ++n)
        axis[j][n + big_n] = it == s->widths().end() ? Complex(n == 0 ? 1.0 : 0.0)
                                                     : spike_coeff(n, it->second);
    }
    std::vector<std::size_t> idx(p, 0);
    for (std::size_t i = 0; i < total; ++i) {
      Complex c(1.0, 0.0);
      for (int j = 0; j < p; ++j) c *= axis[j][idx[j]];
      coeffs[i] = c;
      for (int j = p; j-- > 0;) {
        if (++idx[j] < dims[j]) break;
        idx[j] = 0;
      }
    }
    return FourierTable(box, std::move(coeffs));
  }

  const auto& grid = std::get<CylinderGrid>(f);
  const CylinderGrid reduced = marginalize(grid, p);
  for (int j = 0; j < reduced.m(); ++j) require_unaliased(reduced, j, box.degree(j));
  const auto spectrum = grid_dft(reduced);
  std::vector<int> idx(p, 0);
  for (int j = 0; j < p; ++j) idx[j] = -box.degree(j);
  for (std::size_t i = 0; i < total; ++i) {
    bool beyond = false;
    std::size_t flat = 0;
    for (int j = 0; j < p; ++j) {
      if (j >= reduced.m()) {
        beyond = beyond || idx[j] != 0;
        continue;
      }
      flat = flat * reduced.sizes()[j] + mod_index(idx[j], reduced.sizes()[j]);
    }
    coeffs[i] = beyond ? Complex(0.0) : spectrum[flat];
    for (int j = p; j-- > 0;) {
      if (++idx[j] <= box.degree(j)) break;
      idx[j] = -box.degree(j);
    }
  }
  return FourierTable(box, std::move(coeffs));
}

bool FourierTable::covers(const MultiIndex& n) const {
  if (!n.supported_within(box_.p())) return false;
  for (const auto& [coord, v] : n.entries())
    if (std::abs(v) > box_.degree(coord - 1)) return false;
  return true;
}

std::size_t FourierTable::offset(const MultiIndex& n) const {
  std::size_t flat = 0;
  for (int j = 0; j < box_.p(); ++j) {
    const int big_n = box_.degree(j);
    flat = flat * (2 * static_cast<std::size_t>(big_n) + 1) +
           static_cast<std::size_t>(n[j + 1] + big_n);
  }
  return flat;
}

Complex FourierTable::operator()(const MultiIndex& n) const {
  if (!covers(n))
    throw MissingCoefficients("index " + n.to_string() + " outside coefficient box " +
                              box_.to_string());
  return coeffs_[offset(n)];
}

double FourierTable::conjugate_asymmetry() const {
  double worst = 0.0;
  const std::size_t total = coeffs_.size();
  // Negating every index reverses the flat order of a symmetric box.
  for (std::size_t i = 0; i < total; ++i)
    worst = std::max(worst, std::abs(coeffs_[total - 1 - i] - std::conj(coeffs_[i])));
  return worst;
}

Complex weighted_sum(const FourierTable& table, const RectIndex& rect,
                     std::span<const double> x, bool fejer_weights) {
  const RectIndex& box = table.box_;
  if (rect.p() > box.p())
    throw MissingCoefficients("rectangle " + rect.to_string() + " exceeds table box " +
                              box.to_string());
  for (int j = 0; j < rect.p(); ++j)
    if (rect.degree(j) > box.degree(j))
      throw MissingCoefficients("rectangle " + rect.to_string() + " exceeds table box " +
                                box.to_string());
  require_point(x, rect.p());

  const int p = box.p();
  std::vector<std::vector<Complex>> factor(rect.p());
  for (int j = 0; j < rect.p(); ++j) {
    const int big_n = rect.degree(j);
    factor[j].resize(2 * static_cast<std::size_t>(big_n) + 1);
    for (int n = -big_n; n <= big_n; ++n)
      factor[j][n + big_n] = (fejer_weights ? fejer_weight(n, big_n) : 1.0) * unit_phase(n * x[j]);
  }

  auto rec = [&](auto&& self, int axis, std::size_t flat) -> Complex {
    if (axis == p) return table.coeffs_[flat];
    const int b = box.degree(axis);
    const std::size_t dim = 2 * static_cast<std::size_t>(b) + 1;
    if (axis >= rect.p()) return self(self, axis + 1, flat * dim + static_cast<std::size_t>(b));
    const int big_n = rect.degree(axis);
    Complex s(0.0);
    for (int n = -big_n; n <= big_n; ++n)
      s += factor[axis][n + big_n] *
           self(self, axis + 1, flat * dim + static_cast<std::size_t>(n + b));
    return s;
  };
  return rec(rec, 0, 0);
}

// ---------------------------------------------------------------------------
// Sums and means

Complex partial_sum(const FourierTable& table, const RectIndex& rect,
                    std::span<const double> x) {
  return weighted_sum(table, rect, x, false);
}

Complex fejer_mean_weights(const FourierTable& table, const RectIndex& rect,
                           std::span<const double> x) {
  return weighted_sum(table, rect, x, true);
}

Complex partial_sum(const Function& f, const RectIndex& rect, std::span<const double> x) {
  if (const auto* t = std::get_if<TrigPoly>(&f)) return trig_sum(*t, rect, x, unit_weight);
  if (const auto* s = std::get_if<SpikeTensor>(&f)) return spike_sum(*s, rect, x, unit_weight);
  return partial_sum(FourierTable::build(f, rect), rect, x);
}

Complex fejer_mean_weights(const Function& f, const RectIndex& rect,
                           std::span<const double> x) {
  if (const auto* t = std::get_if<TrigPoly>(&f)) return trig_sum(*t, rect, x, fejer_weight);
  if (const auto* s = std::get_if<SpikeTensor>(&f)) return spike_sum(*s, rect, x, fejer_weight);
  return fejer_mean_weights(FourierTable::build(f, rect), rect, x);
}

Complex fejer_mean_conv(const CylinderGrid& f, const RectIndex& rect,
                        std::span<const double> x) {
  if (rect.p() > f.m())
    throw DimensionMismatch("rectangle " + rect.to_string() + " exceeds grid with m=" +
                            std::to_string(f.m()));
  require_point(x, rect.p());
  std::vector<std::vector<Complex>> vecs(f.m());
  for (int k = 0; k < f.m(); ++k) {
    const std::size_t g = f.sizes()[k];
    const double inv = 1.0 / static_cast<double>(g);
    if (k < rect.p() && g < 2 * static_cast<std::size_t>(rect.degree(k)) + 2)
      throw ResolutionError("grid axis " + std::to_string(k + 1) + " with " +
                            std::to_string(g) + " nodes cannot resolve degree " +
                            std::to_string(rect.degree(k)));
    vecs[k].resize(g);
    for (std::size_t j = 0; j < g; ++j)
      vecs[k][j] = k < rect.p()
                       ? Complex(fejer(rect.degree(k), x[k] - static_cast<double>(j) * inv) * inv)
                       : Complex(inv);
  }
  return contract(f.samples(), f.sizes(), vecs);
}

std::vector<Complex> strengthened_limit(const Function& f, const Schedule& schedule,
                                        int p_max, const std::function<int(int)>& n_of_p,
                                        std::span<const double> x, std::uint64_t seed) {
  if (p_max < 1) throw Error("strengthened_limit: p_max must be >= 1");
  std::vector<Complex> out;
  out.reserve(p_max);
  for (int p = 1; p <= p_max; ++p) {
    const auto path = enumerate_net(schedule, p, n_of_p(p), seed);
    out.push_back(fejer_mean_weights(f, path.back(), x));
  }
  return out;
}

// ---------------------------------------------------------------------------
// MeanEvaluator

MeanEvaluator::MeanEvaluator(const Function& f, std::span<const double> x, int max_p,
                             int max_degree)
    : max_p_(max_p), max_degree_(max_degree), state_(Terms{}) {
  if (max_p < 1 || max_degree < 0) throw Error("MeanEvaluator: invalid bounds");
  require_point(x, max_p);

  if (const auto* t = std::get_if<TrigPoly>(&f)) {
    Terms terms;
    for (const auto& [n, c] : t->terms()) {
      if (!n.supported_within(max_p)) continue;
      Term term{c, n.max_coordinate(), {}};
      for (const auto& [coord, v] : n.entries()) {
        term.value *= unit_phase(v * x[coord - 1]);
        term.axes.emplace_back(coord - 1, std::abs(v));
      }
      terms.terms.push_back(std::move(term));
    }
    state_ = std::move(terms);
  } else if (const auto* s = std::get_if<SpikeTensor>(&f)) {
    AxisMeans am;
    am.means.resize(max_p);
    am.present.assign(max_p, false);
    for (const auto& [coord, eps] : s->widths()) {
      if (coord > max_p) break;
      const double xk = x[coord - 1];
      auto& means = am.means[coord - 1];
      means.resize(max_degree + 1);
      // sigma_N = A_N - B_N / (N+1), A_N = sum_{n<=N} a_n, B_N = sum n a_n.
      Complex a_sum(1.0, 0.0), b_sum(0.0, 0.0);
      means[0] = a_sum;
      for (int n = 1; n <= max_degree; ++n) {
        const Complex a = spike_coeff(n, eps) * unit_phase(n * xk) +
                          spike_coeff(-n, eps) * unit_phase(-n * xk);
        a_sum += a;
        b_sum += static_cast<double>(n) * a;
        means[n] = a_sum - b_sum / static_cast<double>(n + 1);
      }
      am.present[coord - 1] = true;
    }
    state_ = std::move(am);
  } else {
    state_ = Table{std::make_shared<const FourierTable>(
                       FourierTable::build(f, RectIndex::cube(max_p, max_degree))),
                   Point(x.begin(), x.end())};
  }
}

MeanEvaluator::MeanEvaluator(std::shared_ptr<const FourierTable> table,
                             std::span<const double> x)
    : max_p_(table->box().p()),
      max_degree_(table->box().min_degree()),
      state_(Table{table, Point(x.begin(), x.end())}) {
  require_point(x, max_p_);
}

Complex MeanEvaluator::operator()(const RectIndex& rect) const {
  if (rect.p() > max_p_ || rect.max_degree() > max_degree_)
    throw MissingCoefficients("rectangle " + rect.to_string() +
                              " outside evaluator bounds");
  if (const auto* terms = std::get_if<Terms>(&state_)) {
    Complex s(0.0);
    for (const auto& t : terms->terms) {
      if (t.max_coord > rect.p()) continue;
      double w = 1.0;
      for (const auto& [axis, a] : t.axes) w *= fejer_weight(a, rect.degree(axis));
      if (w != 0.0) s += w * t.value;
    }
    return s;
  }
  if (const auto* am = std::get_if<AxisMeans>(&state_)) {
    Complex prod(1.0, 0.0);
    for (int j = 0; j < rect.p(); ++j)
      if (am->present[j]) prod *= am->means[j][rect.degree(j)];
    return prod;
  }
  const auto& t = std::get<Table>(state_);
  return fejer_mean_weights(*t.table, rect, t.x);
}

}  // namespace fejer
