#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fejer/funcspace.hpp"

namespace fejer {

// Finite probability space: abstract sample nodes with weights summing to 1.
class FactorSpace {
 public:
  FactorSpace(std::vector<double> points, std::vector<double> weights);

  // Nodes j/G with equal weights.
  static FactorSpace circle(std::size_t grid);

  std::size_t size() const { return points_.size(); }
  const std::vector<double>& points() const { return points_; }
  const std::vector<double>& weights() const { return weights_; }

 private:
  std::vector<double> points_;
  std::vector<double> weights_;
};

// sum_i w_i f_i.
Complex integrate(const FactorSpace& space, std::span<const Complex> f);

using LinearMap = std::function<std::vector<Complex>(std::span<const Complex>)>;

// Dense row-major n x n matrix acting on function values.
LinearMap dense_operator(std::size_t n, std::vector<Complex> matrix);

// Directed family of operators on functions over one factor space. Index 0 is
// the least element and acts as integration against the space's measure.
class OperatorNet {
 public:
  // order[i][j] is true iff index i <= index j.
  OperatorNet(FactorSpace space, std::vector<std::vector<bool>> order,
              std::vector<LinearMap> operators, std::vector<std::string> labels = {});

  // Totally ordered Fejer means on the circle grid: operator i convolves
  // with K_{degrees[i]}. degrees must be strictly increasing from 0.
  static OperatorNet fejer(std::size_t grid, std::vector<int> degrees);

  static std::vector<std::vector<bool>> chain_order(std::size_t n);

  const FactorSpace& space() const { return space_; }
  std::size_t size() const { return operators_.size(); }
  bool leq(std::size_t i, std::size_t j) const { return order_.at(i).at(j); }
  // Some index above both; exists because the index set is directed.
  std::size_t upper_bound(std::size_t i, std::size_t j) const;
  const std::string& label(std::size_t i) const { return labels_.at(i); }

  std::vector<Complex> apply(std::size_t index, std::span<const Complex> f) const;

  // Checks linearity of every operator and the integration property of the
  // zero index on random inputs; throws Error on violation.
  void validate(std::uint64_t seed, double tolerance = 1e-12) const;

 private:
  FactorSpace space_;
  std::vector<std::vector<bool>> order_;
  std::vector<LinearMap> operators_;
  std::vector<std::string> labels_;
};

// Per-factor positions into each net; factors past the stored prefix sit at
// the zero element. Trailing zeros are trimmed.
class ProductNetIndex {
 public:
  ProductNetIndex() = default;
  explicit ProductNetIndex(std::vector<std::size_t> positions);

  std::size_t operator[](std::size_t factor) const {
    return factor < positions_.size() ? positions_[factor] : 0;
  }
  const std::vector<std::size_t>& positions() const { return positions_; }
  // Number of factors away from zero.
  std::size_t support_size() const;

  friend bool operator==(const ProductNetIndex&, const ProductNetIndex&) = default;

 private:
  std::vector<std::size_t> positions_;
};

// Componentwise order of the product net.
bool dominates(std::span<const OperatorNet> nets, const ProductNetIndex& a,
               const ProductNetIndex& b);
ProductNetIndex join(std::span<const OperatorNet> nets, const ProductNetIndex& a,
                     const ProductNetIndex& b);

// Applies each factor operator along its axis of f, stored row-major over the
// factor grids with factor 0 outermost. Factors at zero are integrated out
// and broadcast back along the axis. axis_order (a permutation of factors)
// defaults to 0, 1, ...
std::vector<Complex> tensor_apply(std::span<const OperatorNet> nets,
                                  const ProductNetIndex& idx, std::span<const Complex> f,
                                  std::span<const std::size_t> axis_order = {});

// Samples of g on the product of the nets' factor spaces (coordinate k+1 is
// factor k's node).
std::vector<Complex> sample_product(std::span<const OperatorNet> nets,
                                    const std::function<Complex(std::span<const double>)>& g);

struct HarnessStep {
  std::size_t step = 0;
  std::size_t support = 0;
  std::vector<std::size_t> positions;
  double max_error = 0.0;
  bool below_tolerance = false;

  friend bool operator==(const HarnessStep&, const HarnessStep&) = default;
};

struct HarnessReport {
  std::vector<HarnessStep> steps;
  double tolerance = 0.0;
  // Final step below tolerance.
  bool converged = false;
};

// Factor k at position clamp(level - k, 0, last_k) for level = 0, 1, ...
// until every factor sits at its last index: support and indices grow
// together.
std::vector<ProductNetIndex> growing_path(std::span<const OperatorNet> nets);

// Drives the product net along a monotone path and records the max error
// |T_n f - f| over the grid nodes at each step.
HarnessReport theorem4_harness(std::span<const OperatorNet> nets,
                               std::span<const Complex> f,
                               std::span<const ProductNetIndex> path, double tolerance);

}  // namespace fejer
