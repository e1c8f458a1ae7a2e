#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "fejer/funcspace.hpp"
#include "fejer/index_core.hpp"

namespace fejer {

enum class Quantile { Max, Median };

// Convergence experiment, usually read from a JSON file:
// {
//   "function": {...}, "schedule": {...},
//   "p_min": 1, "p_max": 2, "n_max": 64,
//   "checkpoints": [8, 16, 32],          // optional: record only these levels
//   "points": {"count": 50, "seed": 7},  // or [[x1, x2, ...], ...]
//   "seed": 42, "tolerance": 1e-3, "verdict": "max" | "median",
//   "output": "out.csv", "format": "csv" | "json"
// }
struct ExperimentConfig {
  nlohmann::json raw;
  Function function;
  Schedule schedule = Schedule::cube();
  int p_min = 1;
  int p_max = 1;
  int n_max = 1;
  std::vector<int> checkpoints;
  std::vector<Point> points;
  std::uint64_t seed = 0;
  double tolerance = 1e-3;
  Quantile verdict_on = Quantile::Max;
  std::string output;
  std::string format = "csv";
};

ExperimentConfig parse_experiment(const nlohmann::json& j,
                                  const std::filesystem::path& base_dir = {});
ExperimentConfig load_experiment(const std::filesystem::path& path);
// Replaces the seed (and the echoed config) and regenerates seeded points.
ExperimentConfig with_seed(const ExperimentConfig& cfg, std::uint64_t seed,
                           const std::filesystem::path& base_dir = {});

// n points uniform on [0,1)^dim.
std::vector<Point> seeded_points(std::size_t n, int dim, std::uint64_t seed);

struct StepRecord {
  std::size_t step = 0;
  int p = 0;
  std::vector<int> degrees;
  double err_max = 0.0;
  double err_median = 0.0;

  friend bool operator==(const StepRecord&, const StepRecord&) = default;
};

struct ConvergenceReport {
  std::string version;
  std::uint64_t seed = 0;
  nlohmann::json config;
  int p_max = 0;
  // Orlicz functional int |f| ln^d(|f|+1) for the d where it was computable.
  std::map<int, double> orlicz;
  double tolerance = 0.0;
  Quantile verdict_on = Quantile::Max;
  bool converged = false;
  std::vector<StepRecord> steps;

  friend bool operator==(const ConvergenceReport&, const ConvergenceReport&) = default;
};

// For p = p_min..p_max walks enumerate_net(schedule, p, n_max) and records
// max and median of |sigma - f| over the sample points at each step.
ConvergenceReport run_convergence(const ExperimentConfig& cfg);

void emit_csv(const ConvergenceReport& report, std::ostream& os);
nlohmann::json report_to_json(const ConvergenceReport& report);
ConvergenceReport report_from_json(const nlohmann::json& j);
// format: "csv" or "json".
void emit(const ConvergenceReport& report, const std::string& format, std::ostream& os);
void emit(const ConvergenceReport& report, const std::string& format,
          const std::filesystem::path& path);

struct AdversarialOptions {
  // Scan rectangles with n_min <= N_j <= n_max.
  int n_min = 0;
  // Rectangles examined per point before the report is flagged partial.
  std::size_t budget = std::size_t{1} << 22;
};

struct PointSearch {
  Point x;
  std::vector<int> worst;
  double worst_error = 0.0;
  std::vector<int> best;
  double best_error = 0.0;
  // Error at the cube (n_max, ..., n_max).
  double cube_error = 0.0;
};

struct AdversarialReport {
  int p = 0;
  int n_min = 0;
  int n_max = 0;
  std::size_t scanned = 0;
  std::size_t total = 0;
  bool partial = false;
  std::vector<PointSearch> points;
};

// Exhaustive scan of the rectangles (N_1..N_p) for the worst and best
// |sigma - f| at each point, with the cube error for contrast.
AdversarialReport adversarial_search(const Function& f, int p, int n_max,
                                     const std::vector<Point>& points,
                                     const AdversarialOptions& opts = {});

nlohmann::json adversarial_to_json(const AdversarialReport& report);
void emit_csv(const AdversarialReport& report, std::ostream& os);

// "%.17g"
std::string format_double(double v);

}  // namespace fejer
