#include "fejer/tensor_net.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "fejer/errors.hpp"
#include "fejer/kernels.hpp"
#include "fejer/random.hpp"

namespace fejer {

FactorSpace::FactorSpace(std::vector<double> points, std::vector<double> weights)
    : points_(std::move(points)), weights_(std::move(weights)) {
  if (points_.empty()) throw Error("factor space needs at least one point");
  if (points_.size() != weights_.size())
    throw DimensionMismatch("factor space has " + std::to_string(points_.size()) +
                            " points but " + std::to_string(weights_.size()) + " weights");
  double total = 0.0;
  for (double w : weights_) {
    if (w < 0.0) throw Error("factor space weights must be nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw Error("factor space weights must sum to 1");
}

FactorSpace FactorSpace::circle(std::size_t grid) {
  if (grid == 0) throw Error("circle grid needs at least one node");
  std::vector<double> pts(grid), w(grid, 1.0 / static_cast<double>(grid));
  for (std::size_t j = 0; j < grid; ++j)
    pts[j] = static_cast<double>(j) / static_cast<double>(grid);
  return FactorSpace(std::move(pts), std::move(w));
}

Complex integrate(const FactorSpace& space, std::span<const Complex> f) {
  if (f.size() != space.size())
    throw DimensionMismatch("integrate: " + std::to_string(f.size()) + " values on " +
                            std::to_string(space.size()) + " points");
  Complex s(0.0);
  for (std::size_t i = 0; i < f.size(); ++i) s += space.weights()[i] * f[i];
  return s;
}

LinearMap dense_operator(std::size_t n, std::vector<Complex> matrix) {
  if (matrix.size() != n * n)
    throw DimensionMismatch("dense operator needs " + std::to_string(n * n) + " entries");
  return [n, m = std::move(matrix)](std::span<const Complex> f) {
    if (f.size() != n)
      throw DimensionMismatch("operator of size " + std::to_string(n) + " applied to " +
                              std::to_string(f.size()) + " values");
    std::vector<Complex> out(n);
    for (std::size_t i = 0; i < n; ++i) {
      Complex s(0.0);
      for (std::size_t j = 0; j < n; ++j) s += m[i * n + j] * f[j];
      out[i] = s;
    }
    return out;
  };
}

// ---------------------------------------------------------------------------
// OperatorNet

OperatorNet::OperatorNet(FactorSpace space, std::vector<std::vector<bool>> order,
                         std::vector<LinearMap> operators, std::vector<std::string> labels)
    : space_(std::move(space)),
      order_(std::move(order)),
      operators_(std::move(operators)),
      labels_(std::move(labels)) {
  const std::size_t n = operators_.size();
  if (n == 0) throw Error("operator net needs at least the zero element");
  if (order_.size() != n) throw DimensionMismatch("order relation size differs from net size");
  for (const auto& row : order_)
    if (row.size() != n) throw DimensionMismatch("order relation must be square");
  if (labels_.empty())
    for (std::size_t i = 0; i < n; ++i) labels_.push_back(std::to_string(i));
  if (labels_.size() != n) throw DimensionMismatch("one label per index required");

  for (std::size_t i = 0; i < n; ++i) {
    if (!order_[i][i]) throw Error("net order must be reflexive");
    if (!order_[0][i]) throw Error("index 0 must be the least element");
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && order_[i][j] && order_[j][i]) throw Error("net order must be antisymmetric");
      for (std::size_t k = 0; k < n; ++k)
        if (order_[i][j] && order_[j][k] && !order_[i][k])
          throw Error("net order must be transitive");
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) upper_bound(i, j);
}

std::vector<std::vector<bool>> OperatorNet::chain_order(std::size_t n) {
  std::vector<std::vector<bool>> order(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) order[i][j] = true;
  return order;
}

OperatorNet OperatorNet::fejer(std::size_t grid, std::vector<int> degrees) {
  if (degrees.empty() || degrees[0] != 0)
    throw Error("Fejer net degrees must start at 0");
  for (std::size_t i = 1; i < degrees.size(); ++i)
    if (degrees[i] <= degrees[i - 1]) throw Error("Fejer net degrees must increase");
  if (grid < 2 * static_cast<std::size_t>(degrees.back()) + 2)
    throw ResolutionError("circle grid of " + std::to_string(grid) +
                          " nodes cannot resolve degree " + std::to_string(degrees.back()));

  std::vector<LinearMap> ops;
  std::vector<std::string> labels;
  const double inv = 1.0 / static_cast<double>(grid);
  for (int big_n : degrees) {
    // Circulant: entry (a, b) depends on (a - b) mod G only.
    std::vector<double> row(grid);
    for (std::size_t d = 0; d < grid; ++d)
      row[d] = fejer::fejer(big_n, static_cast<double>(d) * inv) * inv;
    std::vector<Complex> m(grid * grid);
    for (std::size_t a = 0; a < grid; ++a)
      for (std::size_t b = 0; b < grid; ++b) m[a * grid + b] = row[(a + grid - b) % grid];
    ops.push_back(dense_operator(grid, std::move(m)));
    labels.push_back(std::to_string(big_n));
  }
  return OperatorNet(FactorSpace::circle(grid), chain_order(degrees.size()), std::move(ops),
                     std::move(labels));
}

std::size_t OperatorNet::upper_bound(std::size_t i, std::size_t j) const {
  for (std::size_t k = 0; k < order_.size(); ++k)
    if (order_.at(i)[k] && order_.at(j)[k]) return k;
  throw Error("net index set is not directed: " + std::to_string(i) + " and " +
              std::to_string(j) + " have no upper bound");
}

std::vector<Complex> OperatorNet::apply(std::size_t index, std::span<const Complex> f) const {
  if (f.size() != space_.size())
    throw DimensionMismatch("net operator on " + std::to_string(space_.size()) +
                            " points applied to " + std::to_string(f.size()) + " values");
  auto out = operators_.at(index)(f);
  if (out.size() != space_.size()) throw DimensionMismatch("net operator changed the shape");
  return out;
}

void OperatorNet::validate(std::uint64_t seed, double tolerance) const {
  Rng rng(seed);
  const std::size_t n = space_.size();
  auto random_vec = [&] {
    std::vector<Complex> v(n);
    for (auto& z : v) z = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
    return v;
  };
  for (std::size_t i = 0; i < operators_.size(); ++i) {
    const auto f = random_vec(), g = random_vec();
    const Complex a(rng.uniform(-2, 2), rng.uniform(-2, 2));
    const Complex b(rng.uniform(-2, 2), rng.uniform(-2, 2));
    std::vector<Complex> comb(n);
    for (std::size_t k = 0; k < n; ++k) comb[k] = a * f[k] + b * g[k];
    const auto tf = apply(i, f), tg = apply(i, g), tc = apply(i, comb);
    double scale = 1.0;
    for (std::size_t k = 0; k < n; ++k) scale = std::max(scale, std::abs(tf[k]) + std::abs(tg[k]));
    for (std::size_t k = 0; k < n; ++k)
      if (std::abs(tc[k] - (a * tf[k] + b * tg[k])) > tolerance * 4.0 * scale)
        throw Error("operator '" + labels_[i] + "' is not linear");
  }
  const auto f = random_vec();
  const Complex mean = integrate(space_, f);
  for (const auto& v : apply(0, f))
    if (std::abs(v - mean) > tolerance * std::max(1.0, std::abs(mean)) * 4.0)
      throw Error("zero index does not act as integration");
}

// ---------------------------------------------------------------------------
// Product index

ProductNetIndex::ProductNetIndex(std::vector<std::size_t> positions)
    : positions_(std::move(positions)) {
  while (!positions_.empty() && positions_.back() == 0) positions_.pop_back();
}

std::size_t ProductNetIndex::support_size() const {
  return static_cast<std::size_t>(
      std::count_if(positions_.begin(), positions_.end(), [](auto v) { return v != 0; }));
}

namespace {

void check_index(std::span<const OperatorNet> nets, const ProductNetIndex& idx) {
  if (idx.positions().size() > nets.size())
    throw DimensionMismatch("product index moves factor " +
                            std::to_string(idx.positions().size()) + " but only " +
                            std::to_string(nets.size()) + " factors are instantiated");
  for (std::size_t k = 0; k < idx.positions().size(); ++k)
    if (idx[k] >= nets[k].size())
      throw DimensionMismatch("product index position out of range on factor " +
                              std::to_string(k + 1));
}

}  // namespace

bool dominates(std::span<const OperatorNet> nets, const ProductNetIndex& a,
               const ProductNetIndex& b) {
  check_index(nets, a);
  check_index(nets, b);
  for (std::size_t k = 0; k < nets.size(); ++k)
    if (!nets[k].leq(b[k], a[k])) return false;
  return true;
}

ProductNetIndex join(std::span<const OperatorNet> nets, const ProductNetIndex& a,
                     const ProductNetIndex& b) {
  check_index(nets, a);
  check_index(nets, b);
  std::vector<std::size_t> pos(nets.size());
  for (std::size_t k = 0; k < nets.size(); ++k) pos[k] = nets[k].upper_bound(a[k], b[k]);
  return ProductNetIndex(std::move(pos));
}

std::vector<Complex> tensor_apply(std::span<const OperatorNet> nets,
                                  const ProductNetIndex& idx, std::span<const Complex> f,
                                  std::span<const std::size_t> axis_order) {
  check_index(nets, idx);
  const std::size_t k_count = nets.size();
  std::size_t total = 1;
  for (const auto& net : nets) total *= net.space().size();
  if (f.size() != total)
    throw DimensionMismatch("product grid expects " + std::to_string(total) +
                            " values, got " + std::to_string(f.size()));

  std::vector<std::size_t> order(k_count);
  std::iota(order.begin(), order.end(), 0);
  if (!axis_order.empty()) {
    std::vector<std::size_t> sorted(axis_order.begin(), axis_order.end());
    std::sort(sorted.begin(), sorted.end());
    if (sorted != order) throw DimensionMismatch("axis order must permute the factors");
    order.assign(axis_order.begin(), axis_order.end());
  }

  std::vector<Complex> data(f.begin(), f.end());
  for (std::size_t axis : order) {
    const auto& net = nets[axis];
    const std::size_t g = net.space().size();
    std::size_t stride = 1;
    for (std::size_t k = axis + 1; k < k_count; ++k) stride *= nets[k].space().size();
    const std::size_t outer = total / (g * stride);
    std::vector<Complex> line(g);
    for (std::size_t o = 0; o < outer; ++o)
      for (std::size_t i = 0; i < stride; ++i) {
        Complex* base = data.data() + o * g * stride + i;
        for (std::size_t j = 0; j < g; ++j) line[j] = base[j * stride];
        if (idx[axis] == 0) {
          const Complex mean = integrate(net.space(), line);
          for (std::size_t j = 0; j < g; ++j) base[j * stride] = mean;
        } else {
          const auto out = net.apply(idx[axis], line);
          for (std::size_t j = 0; j < g; ++j) base[j * stride] = out[j];
        }
      }
  }
  return data;
}

std::vector<Complex> sample_product(std::span<const OperatorNet> nets,
                                    const std::function<Complex(std::span<const double>)>& g) {
  std::size_t total = 1;
  for (const auto& net : nets) total *= net.space().size();
  std::vector<Complex> out(total);
  std::vector<std::size_t> idx(nets.size(), 0);
  Point x(nets.size());
  for (std::size_t i = 0; i < total; ++i) {
    for (std::size_t k = 0; k < nets.size(); ++k) x[k] = nets[k].space().points()[idx[k]];
    out[i] = g(x);
    for (std::size_t k = nets.size(); k-- > 0;) {
      if (++idx[k] < nets[k].space().size()) break;
      idx[k] = 0;
    }
  }
  return out;
}

std::vector<ProductNetIndex> growing_path(std::span<const OperatorNet> nets) {
  std::size_t levels = 0;
  for (std::size_t k = 0; k < nets.size(); ++k) levels = std::max(levels, k + nets[k].size() - 1);
  std::vector<ProductNetIndex> path;
  for (std::size_t level = 0; level <= levels; ++level) {
    std::vector<std::size_t> pos(nets.size());
    for (std::size_t k = 0; k < nets.size(); ++k)
      pos[k] = level < k ? 0 : std::min(level - k, nets[k].size() - 1);
    path.emplace_back(std::move(pos));
  }
  return path;
}

HarnessReport theorem4_harness(std::span<const OperatorNet> nets,
                               std::span<const Complex> f,
                               std::span<const ProductNetIndex> path, double tolerance) {
  for (std::size_t s = 1; s < path.size(); ++s)
    if (!dominates(nets, path[s], path[s - 1]))
      throw NonMonotonePath("product net path step " + std::to_string(s) +
                            " does not dominate its predecessor");
  HarnessReport report;
  report.tolerance = tolerance;
  for (std::size_t s = 0; s < path.size(); ++s) {
    const auto g = tensor_apply(nets, path[s], f);
    double err = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) err = std::max(err, std::abs(g[i] - f[i]));
    HarnessStep step;
    step.step = s;
    step.support = path[s].support_size();
    step.positions.resize(nets.size());
    for (std::size_t k = 0; k < nets.size(); ++k) step.positions[k] = path[s][k];
    step.max_error = err;
    step.below_tolerance = err <= tolerance;
    report.steps.push_back(std::move(step));
  }
  report.converged = !report.steps.empty() && report.steps.back().below_tolerance;
  return report;
}

}  // namespace fejer
