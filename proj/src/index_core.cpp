#include "fejer/index_core.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "fejer/errors.hpp"
#include "fejer/random.hpp"

namespace fejer {

MultiIndex::MultiIndex(std::initializer_list<std::pair<int, int>> entries) {
  for (const auto& [coord, value] : entries) set(coord, value);
}

MultiIndex MultiIndex::dense(std::span<const int> entries) {
  MultiIndex n;
  for (std::size_t i = 0; i < entries.size(); ++i)
    n.set(static_cast<int>(i) + 1, entries[i]);
  return n;
}

int MultiIndex::operator[](int coord) const {
  auto it = entries_.find(coord);
  return it == entries_.end() ? 0 : it->second;
}

void MultiIndex::set(int coord, int value) {
  if (coord < 1) throw Error("multi-index coordinates are 1-based");
  if (value == 0)
    entries_.erase(coord);
  else
    entries_[coord] = value;
}

int MultiIndex::max_coordinate() const {
  return entries_.empty() ? 0 : entries_.rbegin()->first;
}

double MultiIndex::pairing(std::span<const double> x) const {
  if (static_cast<std::size_t>(max_coordinate()) > x.size())
    throw MissingCoordinate("point has " + std::to_string(x.size()) +
                            " coordinates, index " + to_string() + " needs " +
                            std::to_string(max_coordinate()));
  double s = 0.0;
  for (const auto& [coord, value] : entries_) s += value * x[coord - 1];
  return s;
}

MultiIndex MultiIndex::operator+(const MultiIndex& other) const {
  MultiIndex r = *this;
  for (const auto& [coord, value] : other.entries_) r.set(coord, r[coord] + value);
  return r;
}

MultiIndex MultiIndex::operator-(const MultiIndex& other) const {
  return *this + other.scaled(-1);
}

MultiIndex MultiIndex::scaled(int factor) const {
  MultiIndex r;
  for (const auto& [coord, value] : entries_) r.set(coord, value * factor);
  return r;
}

std::string MultiIndex::to_string() const {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (const auto& [coord, value] : entries_) {
    if (!first) os << ',';
    os << coord << ':' << value;
    first = false;
  }
  os << '}';
  return os.str();
}

RectIndex::RectIndex(std::vector<int> degrees) : degrees_(std::move(degrees)) {
  if (degrees_.empty()) throw Error("rectangle needs p >= 1");
  for (int n : degrees_)
    if (n < 0) throw Error("rectangle degrees must be nonnegative");
}

int RectIndex::min_degree() const {
  return *std::min_element(degrees_.begin(), degrees_.end());
}

int RectIndex::max_degree() const {
  return *std::max_element(degrees_.begin(), degrees_.end());
}

std::string RectIndex::to_string() const {
  std::ostringstream os;
  os << "(p=" << p() << ",(";
  for (std::size_t j = 0; j < degrees_.size(); ++j) os << (j ? "," : "") << degrees_[j];
  os << "))";
  return os.str();
}

namespace {

void require_same_p(const RectIndex& a, const RectIndex& b) {
  if (a.p() != b.p())
    throw DimensionMismatch("incomparable net positions " + a.to_string() + " and " +
                            b.to_string());
}

}  // namespace

bool dominates(const RectIndex& a, const RectIndex& b) {
  require_same_p(a, b);
  for (int j = 0; j < a.p(); ++j)
    if (a.degree(j) < b.degree(j)) return false;
  return true;
}

RectIndex join(const RectIndex& a, const RectIndex& b) {
  require_same_p(a, b);
  std::vector<int> d(a.p());
  for (int j = 0; j < a.p(); ++j) d[j] = std::max(a.degree(j), b.degree(j));
  return RectIndex(std::move(d));
}

Schedule::Schedule(ScheduleKind kind, double lambda, std::vector<std::vector<int>> blocks)
    : kind_(kind), lambda_(lambda), blocks_(std::move(blocks)) {
  if (!(lambda_ >= 1.0)) throw Error("schedule lambda must be >= 1");
}

Schedule Schedule::cube() { return Schedule(ScheduleKind::Cube, 1.0, {}); }

Schedule Schedule::regular(double lambda) {
  return Schedule(ScheduleKind::Regular, lambda, {});
}

Schedule Schedule::pringsheim() { return Schedule(ScheduleKind::Pringsheim, 1.0, {}); }

Schedule Schedule::dregular(std::vector<std::vector<int>> blocks, double lambda) {
  if (blocks.empty()) throw Error("d-regular schedule needs at least one block");
  for (const auto& b : blocks)
    if (b.empty()) throw Error("d-regular blocks must be nonempty");
  return Schedule(ScheduleKind::DRegular, lambda, std::move(blocks));
}

Schedule Schedule::restricted(int p) const {
  if (kind_ != ScheduleKind::DRegular) return *this;
  std::vector<std::vector<int>> cut;
  for (const auto& b : blocks_) {
    std::vector<int> kept;
    for (int c : b)
      if (c <= p) kept.push_back(c);
    if (!kept.empty()) cut.push_back(std::move(kept));
  }
  if (cut.empty()) throw DimensionMismatch("no d-regular block meets {1.." + std::to_string(p) + "}");
  return Schedule(kind_, lambda_, std::move(cut));
}

std::vector<std::vector<int>> Schedule::blocks_for(int p) const {
  std::vector<std::vector<int>> out;
  switch (kind_) {
    case ScheduleKind::Cube:
    case ScheduleKind::Regular: {
      std::vector<int> all(p);
      for (int j = 0; j < p; ++j) all[j] = j + 1;
      out.push_back(std::move(all));
      break;
    }
    case ScheduleKind::Pringsheim:
      for (int j = 1; j <= p; ++j) out.push_back({j});
      break;
    case ScheduleKind::DRegular: {
      std::set<int> seen;
      for (const auto& b : blocks_)
        for (int c : b) {
          if (c < 1 || c > p || !seen.insert(c).second)
            throw DimensionMismatch("d-regular blocks do not partition {1.." +
                                    std::to_string(p) + "}");
        }
      if (static_cast<int>(seen.size()) != p)
        throw DimensionMismatch("d-regular blocks do not partition {1.." +
                                std::to_string(p) + "}");
      out = blocks_;
      break;
    }
  }
  return out;
}

bool ratio_bounded(const RectIndex& rect, std::span<const int> coords, double lambda) {
  if (coords.empty()) return true;
  int lo = rect.degree(coords[0] - 1), hi = lo;
  for (int c : coords) {
    lo = std::min(lo, rect.degree(c - 1));
    hi = std::max(hi, rect.degree(c - 1));
  }
  return static_cast<double>(hi + 1) <= lambda * static_cast<double>(lo + 1);
}

bool Schedule::admits(const RectIndex& rect) const {
  switch (kind_) {
    case ScheduleKind::Cube:
      return rect.min_degree() == rect.max_degree();
    case ScheduleKind::Pringsheim:
      return true;
    case ScheduleKind::Regular:
    case ScheduleKind::DRegular:
      for (const auto& block : blocks_for(rect.p()))
        if (!ratio_bounded(rect, block, lambda_)) return false;
      return true;
  }
  return false;
}

std::string Schedule::name() const {
  switch (kind_) {
    case ScheduleKind::Cube:
      return "cube";
    case ScheduleKind::Regular:
      return "regular";
    case ScheduleKind::Pringsheim:
      return "pringsheim";
    case ScheduleKind::DRegular:
      return "dregular";
  }
  return "?";
}

bool schedule_admits(const Schedule& s, std::span<const RectIndex> path) {
  for (std::size_t i = 1; i < path.size(); ++i) {
    require_same_p(path[i], path[i - 1]);
    if (!dominates(path[i], path[i - 1]))
      throw NonMonotonePath("path step " + std::to_string(i) + " " + path[i].to_string() +
                            " does not dominate " + path[i - 1].to_string());
  }
  for (const auto& r : path)
    if (!s.admits(r)) return false;
  return true;
}

std::vector<RectIndex> enumerate_net(const Schedule& s, int p, int n_max,
                                     std::uint64_t seed) {
  if (p < 1) throw Error("enumerate_net: p must be >= 1");
  if (n_max < 1) throw Error("enumerate_net: n_max must be >= 1");

  std::vector<RectIndex> path;
  if (s.kind() == ScheduleKind::Cube) {
    for (int n = 0; n <= n_max; ++n) path.push_back(RectIndex::cube(p, n));
    return path;
  }
  s.blocks_for(p);  // validates the partition

  Rng rng(seed);
  std::vector<double> rate(p);
  for (auto& r : rate) r = rng.uniform(0.05, 1.0);

  constexpr int kAttempts = 8;
  std::vector<int> cur(p, 0);
  path.emplace_back(cur);
  while (*std::min_element(cur.begin(), cur.end()) < n_max) {
    std::vector<int> next;
    for (int attempt = 0; attempt < kAttempts && next.empty(); ++attempt) {
      std::vector<int> cand = cur;
      bool moved = false;
      for (int j = 0; j < p; ++j) {
        if (cand[j] < n_max && rng.uniform() < rate[j]) {
          ++cand[j];
          moved = true;
        }
      }
      if (moved && s.admits(RectIndex(cand))) next = std::move(cand);
    }
    if (next.empty()) {
      // Advancing every unfinished coordinate never increases a block ratio.
      next = cur;
      for (int j = 0; j < p; ++j)
        if (next[j] < n_max) ++next[j];
    }
    cur = next;
    path.emplace_back(cur);
  }
  return path;
}

}  // namespace fejer
