#include "fejer/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdio>
#include <fstream>
#include <memory>
#include <ostream>
#include <set>

#include "fejer/config.hpp"
#include "fejer/errors.hpp"
#include "fejer/random.hpp"
#include "fejer/summation.hpp"
#include "fejer/version.hpp"

namespace fejer {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<Point> seeded_points(std::size_t n, int dim, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Point> pts(n, Point(dim));
  for (auto& x : pts)
    for (auto& c : x) c = rng.uniform();
  return pts;
}

namespace {

const char* quantile_name(Quantile q) { return q == Quantile::Max ? "max" : "median"; }

Quantile quantile_from(const std::string& s) {
  if (s == "max") return Quantile::Max;
  if (s == "median") return Quantile::Median;
  throw ConfigError("verdict must be 'max' or 'median', got '" + s + "'");
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

// ---------------------------------------------------------------------------
// Config

ExperimentConfig parse_experiment(const json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw ConfigError("experiment config must be a JSON object");
  ExperimentConfig cfg;
  cfg.raw = j;
  try {
    if (!j.contains("function")) throw ConfigError("missing field 'function'");
    cfg.function = function_from_json(j.at("function"), base_dir);
    cfg.schedule = schedule_from_json(j.value("schedule", json("cube")));
    cfg.p_max = j.value("p_max", 1);
    cfg.p_min = j.value("p_min", 1);
    cfg.n_max = j.value("n_max", 1);
    cfg.checkpoints = j.value("checkpoints", std::vector<int>{});
    cfg.seed = j.value("seed", std::uint64_t{0});
    cfg.tolerance = j.value("tolerance", 1e-3);
    cfg.verdict_on = quantile_from(j.value("verdict", std::string("max")));
    cfg.output = j.value("output", std::string());
    cfg.format = j.value("format", std::string("csv"));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("experiment config: ") + e.what());
  }
  if (cfg.p_min < 1 || cfg.p_max < cfg.p_min) throw ConfigError("need 1 <= p_min <= p_max");
  if (cfg.n_max < 1) throw ConfigError("n_max must be positive");
  if (!(cfg.tolerance >= 0.0)) throw ConfigError("tolerance must be nonnegative");
  if (cfg.format != "csv" && cfg.format != "json")
    throw ConfigError("format must be csv or json");

  try {
    cfg.schedule.blocks_for(cfg.p_max);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }

  const int dim = std::max(cfg.p_max, active_dim(cfg.function));
  const json pts = j.value("points", json{{"count", 16}});
  if (pts.is_array()) {
    for (const auto& row : pts) cfg.points.push_back(row.get<Point>());
  } else {
    const auto count = pts.value("count", std::size_t{16});
    if (count == 0) throw ConfigError("points.count must be positive");
    cfg.points = seeded_points(count, dim, pts.value("seed", cfg.seed));
  }
  if (cfg.points.empty()) throw ConfigError("no sample points");
  for (const auto& x : cfg.points)
    if (x.size() < static_cast<std::size_t>(dim))
      throw ConfigError("sample point has " + std::to_string(x.size()) +
                        " coordinates, experiment needs " + std::to_string(dim));
  return cfg;
}

ExperimentConfig load_experiment(const std::filesystem::path& path) {
  return parse_experiment(load_json(path), path.parent_path());
}

ExperimentConfig with_seed(const ExperimentConfig& cfg, std::uint64_t seed,
                           const std::filesystem::path& base_dir) {
  json j = cfg.raw;
  j["seed"] = seed;
  if (j.contains("points") && j["points"].is_object()) j["points"]["seed"] = seed;
  return parse_experiment(j, base_dir);
}

// ---------------------------------------------------------------------------
// Convergence runs

ConvergenceReport run_convergence(const ExperimentConfig& cfg) {
  ConvergenceReport report;
  report.version = kVersion;
  report.seed = cfg.seed;
  report.config = cfg.raw;
  report.p_max = cfg.p_max;
  report.tolerance = cfg.tolerance;
  report.verdict_on = cfg.verdict_on;
  for (int d = 0; d <= 3; ++d) {
    try {
      report.orlicz[d] = orlicz_functional(cfg.function, d);
    } catch (const Error&) {
      // not computable at the default resolution; left out of the tags
    }
  }

  const std::set<int> checkpoints(cfg.checkpoints.begin(), cfg.checkpoints.end());
  std::vector<Complex> target(cfg.points.size());
  for (std::size_t i = 0; i < cfg.points.size(); ++i) target[i] = eval(cfg.function, cfg.points[i]);

  std::size_t step = 0;
  std::vector<double> errors(cfg.points.size());
  for (int p = cfg.p_min; p <= cfg.p_max; ++p) {
    const auto path = enumerate_net(cfg.schedule.restricted(p), p, cfg.n_max, cfg.seed + static_cast<std::uint64_t>(p));

    std::vector<MeanEvaluator> evaluators;
    if (std::holds_alternative<CylinderGrid>(cfg.function)) {
      auto table = std::make_shared<const FourierTable>(
          FourierTable::build(cfg.function, RectIndex::cube(p, cfg.n_max)));
      for (const auto& x : cfg.points) evaluators.emplace_back(table, x);
    } else {
      for (const auto& x : cfg.points) evaluators.emplace_back(cfg.function, x, p, cfg.n_max);
    }

    std::set<int> seen;
    for (const auto& rect : path) {
      if (!checkpoints.empty()) {
        const int level = rect.min_degree();
        if (!checkpoints.count(level) || !seen.insert(level).second) continue;
      }
      for (std::size_t i = 0; i < evaluators.size(); ++i)
        errors[i] = std::abs(evaluators[i](rect) - target[i]);
      StepRecord rec;
      rec.step = step++;
      rec.p = p;
      rec.degrees = rect.degrees();
      rec.err_max = *std::max_element(errors.begin(), errors.end());
      rec.err_median = median(errors);
      report.steps.push_back(std::move(rec));
    }
  }
  if (!report.steps.empty()) {
    const auto& last = report.steps.back();
    const double v = cfg.verdict_on == Quantile::Max ? last.err_max : last.err_median;
    report.converged = v <= cfg.tolerance;
  }
  return report;
}

// ---------------------------------------------------------------------------
// Emission

void emit_csv(const ConvergenceReport& r, std::ostream& os) {
  os << "# " << kName << ' ' << r.version << '\n';
  os << "# seed: " << r.seed << '\n';
  os << "# config: " << r.config.dump() << '\n';
  os << "# orlicz:";
  for (const auto& [d, v] : r.orlicz) os << " d" << d << '=' << format_double(v);
  os << '\n';
  os << "# verdict: " << (r.converged ? "converged" : "not-converged") << " ("
     << quantile_name(r.verdict_on) << " <= " << format_double(r.tolerance) << ")\n";
  os << "step,p";
  for (int j = 1; j <= r.p_max; ++j) os << ",N_" << j;
  os << ",err_max,err_median\n";
  for (const auto& s : r.steps) {
    os << s.step << ',' << s.p;
    for (int j = 0; j < r.p_max; ++j)
      os << ',' << (j < static_cast<int>(s.degrees.size()) ? s.degrees[j] : -1);
    os << ',' << format_double(s.err_max) << ',' << format_double(s.err_median) << '\n';
  }
}

json report_to_json(const ConvergenceReport& r) {
  json orlicz = json::object();
  for (const auto& [d, v] : r.orlicz) orlicz[std::to_string(d)] = v;
  json steps = json::array();
  for (const auto& s : r.steps)
    steps.push_back({{"step", s.step},
                     {"p", s.p},
                     {"degrees", s.degrees},
                     {"err_max", s.err_max},
                     {"err_median", s.err_median}});
  return {{"name", kName},
          {"version", r.version},
          {"seed", r.seed},
          {"config", r.config},
          {"p_max", r.p_max},
          {"orlicz", orlicz},
          {"tolerance", r.tolerance},
          {"verdict", quantile_name(r.verdict_on)},
          {"converged", r.converged},
          {"steps", steps}};
}

ConvergenceReport report_from_json(const json& j) {
  ConvergenceReport r;
  try {
    r.version = j.at("version").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.config = j.at("config");
    r.p_max = j.at("p_max").get<int>();
    for (const auto& [key, value] : j.at("orlicz").items())
      r.orlicz[std::stoi(key)] = value.get<double>();
    r.tolerance = j.at("tolerance").get<double>();
    r.verdict_on = quantile_from(j.at("verdict").get<std::string>());
    r.converged = j.at("converged").get<bool>();
    for (const auto& s : j.at("steps")) {
      StepRecord rec;
      rec.step = s.at("step").get<std::size_t>();
      rec.p = s.at("p").get<int>();
      rec.degrees = s.at("degrees").get<std::vector<int>>();
      rec.err_max = s.at("err_max").get<double>();
      rec.err_median = s.at("err_median").get<double>();
      r.steps.push_back(std::move(rec));
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("report: ") + e.what());
  }
  return r;
}

void emit(const ConvergenceReport& report, const std::string& format, std::ostream& os) {
  if (format == "csv")
    emit_csv(report, os);
  else if (format == "json")
    os << report_to_json(report).dump(2) << '\n';
  else
    throw ConfigError("unknown output format '" + format + "'");
}

void emit(const ConvergenceReport& report, const std::string& format,
          const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  emit(report, format, out);
  if (!out) throw Error("write failed for " + path.string());
}

// ---------------------------------------------------------------------------
// Adversarial search

AdversarialReport adversarial_search(const Function& f, int p, int n_max,
                                     const std::vector<Point>& points,
                                     const AdversarialOptions& opts) {
  if (p < 1 || n_max < 0 || opts.n_min < 0 || opts.n_min > n_max)
    throw Error("adversarial_search: need p >= 1 and 0 <= n_min <= n_max");
  AdversarialReport report;
  report.p = p;
  report.n_min = opts.n_min;
  report.n_max = n_max;
  const double side = n_max - opts.n_min + 1;
  const double total = std::pow(side, p);
  report.total = total > 1e18 ? std::size_t(-1) : static_cast<std::size_t>(total);
  report.scanned = std::min(report.total, opts.budget);
  report.partial = report.scanned < report.total;

  std::shared_ptr<const FourierTable> table;
  if (std::holds_alternative<CylinderGrid>(f))
    table = std::make_shared<const FourierTable>(FourierTable::build(f, RectIndex::cube(p, n_max)));

  for (const auto& x : points) {
    const MeanEvaluator mean = table ? MeanEvaluator(table, x) : MeanEvaluator(f, x, p, n_max);
    const Complex fx = eval(f, x);
    PointSearch ps;
    ps.x = x;
    ps.cube_error = std::abs(mean(RectIndex::cube(p, n_max)) - fx);
    ps.best_error = std::numeric_limits<double>::infinity();
    ps.worst_error = -1.0;

    std::vector<int> deg(p, opts.n_min);
    for (std::size_t k = 0; k < report.scanned; ++k) {
      const double err = std::abs(mean(RectIndex(deg)) - fx);
      if (err > ps.worst_error) {
        ps.worst_error = err;
        ps.worst = deg;
      }
      if (err < ps.best_error) {
        ps.best_error = err;
        ps.best = deg;
      }
      for (int j = p; j-- > 0;) {
        if (++deg[j] <= n_max) break;
        deg[j] = opts.n_min;
      }
    }
    report.points.push_back(std::move(ps));
  }
  return report;
}

json adversarial_to_json(const AdversarialReport& r) {
  json pts = json::array();
  for (const auto& ps : r.points)
    pts.push_back({{"x", ps.x},
                   {"worst", ps.worst},
                   {"worst_error", ps.worst_error},
                   {"best", ps.best},
                   {"best_error", ps.best_error},
                   {"cube_error", ps.cube_error}});
  return {{"name", kName},     {"version", kVersion},   {"p", r.p},
          {"n_min", r.n_min},  {"n_max", r.n_max},      {"scanned", r.scanned},
          {"total", r.total},  {"partial", r.partial},  {"points", pts}};
}

void emit_csv(const AdversarialReport& r, std::ostream& os) {
  os << "# " << kName << ' ' << kVersion << '\n';
  os << "# p=" << r.p << " n_min=" << r.n_min << " n_max=" << r.n_max
     << " scanned=" << r.scanned << '/' << r.total << (r.partial ? " PARTIAL" : "") << '\n';
  os << "point";
  for (int j = 1; j <= r.p; ++j) os << ",x_" << j;
  for (int j = 1; j <= r.p; ++j) os << ",worst_N_" << j;
  os << ",worst_error";
  for (int j = 1; j <= r.p; ++j) os << ",best_N_" << j;
  os << ",best_error,cube_error\n";
  for (std::size_t i = 0; i < r.points.size(); ++i) {
    const auto& ps = r.points[i];
    os << i;
    for (int j = 0; j < r.p; ++j) os << ',' << format_double(ps.x.at(j));
    for (int j = 0; j < r.p; ++j) os << ',' << (ps.worst.empty() ? -1 : ps.worst[j]);
    os << ',' << format_double(ps.worst_error);
    for (int j = 0; j < r.p; ++j) os << ',' << (ps.best.empty() ? -1 : ps.best[j]);
    os << ',' << format_double(ps.best_error) << ',' << format_double(ps.cube_error) << '\n';
  }
}

}  // namespace fejer
