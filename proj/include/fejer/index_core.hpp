#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace fejer {

// Finitely supported integer vector n = (n_1, n_2, ...), an element of
// Z^{<inf}. Coordinates are 1-based; only nonzero entries are stored.
class MultiIndex {
 public:
  MultiIndex() = default;
  // {coordinate, value} pairs; zero values are dropped.
  MultiIndex(std::initializer_list<std::pair<int, int>> entries);

  // entries[0] is coordinate 1.
  static MultiIndex dense(std::span<const int> entries);
  static MultiIndex dense(std::initializer_list<int> entries) {
    return dense(std::span<const int>(entries.begin(), entries.size()));
  }

  int operator[](int coord) const;
  void set(int coord, int value);

  const std::map<int, int>& entries() const { return entries_; }
  bool is_zero() const { return entries_.empty(); }
  // Largest coordinate with a nonzero entry, 0 for the zero index.
  int max_coordinate() const;
  bool supported_within(int m) const { return max_coordinate() <= m; }

  // n.x = sum_k n_k x_k; x[0] is coordinate 1.
  double pairing(std::span<const double> x) const;

  MultiIndex operator+(const MultiIndex& other) const;
  MultiIndex operator-(const MultiIndex& other) const;
  MultiIndex operator-() const { return scaled(-1); }
  MultiIndex scaled(int factor) const;

  std::string to_string() const;

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
  friend auto operator<=>(const MultiIndex& a, const MultiIndex& b) {
    return a.entries_ <=> b.entries_;
  }

 private:
  std::map<int, int> entries_;
};

// A point (p; N_1, ..., N_p) of the rectangular summation net.
class RectIndex {
 public:
  explicit RectIndex(std::vector<int> degrees);
  RectIndex(std::initializer_list<int> degrees)
      : RectIndex(std::vector<int>(degrees)) {}

  static RectIndex cube(int p, int n) { return RectIndex(std::vector<int>(p, n)); }

  int p() const { return static_cast<int>(degrees_.size()); }
  // degrees()[j] is N_{j+1}.
  const std::vector<int>& degrees() const { return degrees_; }
  int degree(int j) const { return degrees_.at(j); }
  int min_degree() const;
  int max_degree() const;

  std::string to_string() const;

  friend bool operator==(const RectIndex&, const RectIndex&) = default;

 private:
  std::vector<int> degrees_;
};

// Componentwise a >= b. Throws DimensionMismatch if the dimensions differ.
bool dominates(const RectIndex& a, const RectIndex& b);

// Componentwise maximum; dominates both arguments.
RectIndex join(const RectIndex& a, const RectIndex& b);

enum class ScheduleKind { Cube, Regular, Pringsheim, DRegular };

// Growth regime for the degrees of a rectangular net path.
class Schedule {
 public:
  static Schedule cube();
  static Schedule regular(double lambda);
  static Schedule pringsheim();
  // blocks: 1-based coordinates, must partition {1..p} at use time.
  static Schedule dregular(std::vector<std::vector<int>> blocks, double lambda);

  ScheduleKind kind() const { return kind_; }
  double lambda() const { return lambda_; }
  const std::vector<std::vector<int>>& blocks() const { return blocks_; }

  // Blocks within which the ratio condition applies at dimension p.
  // Cube and Regular use a single block, Pringsheim p singletons.
  std::vector<std::vector<int>> blocks_for(int p) const;

  // Single-element condition (no monotonicity).
  bool admits(const RectIndex& rect) const;

  // D-regular blocks cut down to the coordinates 1..p (empty blocks dropped);
  // other kinds unchanged.
  Schedule restricted(int p) const;

  std::string name() const;

  friend bool operator==(const Schedule&, const Schedule&) = default;

 private:
  Schedule(ScheduleKind kind, double lambda, std::vector<std::vector<int>> blocks);

  ScheduleKind kind_;
  double lambda_ = 1.0;
  std::vector<std::vector<int>> blocks_;
};

// (max_j (N_j+1)) <= lambda * (min_j (N_j+1)) over the given coordinates.
bool ratio_bounded(const RectIndex& rect, std::span<const int> coords, double lambda);

// True iff every element is admissible under s. Throws DimensionMismatch on
// mixed p and NonMonotonePath if consecutive elements are not ordered.
bool schedule_admits(const Schedule& s, std::span<const RectIndex> path);

// Seeded monotone path from the all-zero rectangle to (n_max, ..., n_max),
// each element admissible under s. Non-cube schedules advance a random subset
// of coordinates per step, with per-coordinate rates drawn once per path.
std::vector<RectIndex> enumerate_net(const Schedule& s, int p, int n_max,
                                     std::uint64_t seed);

}  // namespace fejer
