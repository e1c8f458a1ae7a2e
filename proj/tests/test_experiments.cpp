#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "fejer/errors.hpp"
#include "fejer/experiments.hpp"
#include "fejer/summation.hpp"
#include "oracles.hpp"

using namespace fejer;
using nlohmann::json;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::string body_of(const std::string& text) {
  std::string out;
  for (const auto& l : lines_of(text))
    if (l.rfind("#", 0) != 0) out += l + "\n";
  return out;
}

std::string csv(const ConvergenceReport& r) {
  std::ostringstream os;
  emit_csv(r, os);
  return os.str();
}

json spike_config() {
  return json::parse(R"({
    "function": {"type": "spike", "eps": {"1": 0.2, "2": 0.2}},
    "schedule": {"kind": "regular", "lambda": 2.0},
    "p_max": 2, "n_max": 16,
    "points": {"count": 9},
    "seed": 5, "tolerance": 0.5
  })");
}

}  // namespace

TEST_CASE("emit on an empty report writes only the header") {
  ConvergenceReport r;
  r.version = "0.1.0";
  r.p_max = 2;
  const auto lines = lines_of(csv(r));
  REQUIRE(!lines.empty());
  CHECK(lines.back() == "step,p,N_1,N_2,err_max,err_median");
  for (std::size_t i = 0; i + 1 < lines.size(); ++i) CHECK(lines[i].rfind("# ", 0) == 0);
}

TEST_CASE("emit writes one row per step plus metadata") {
  ConvergenceReport r;
  r.version = "0.1.0";
  r.seed = 17;
  r.config = json{{"n_max", 4}};
  r.p_max = 2;
  r.orlicz = {{1, 0.5}};
  r.tolerance = 0.25;
  r.converged = true;
  r.steps = {{0, 1, {1}, 0.5, 0.25}, {1, 2, {1, 1}, 0.125, 0.0625}, {2, 2, {2, 2}, 0.1, 0.05}};
  const auto text = csv(r);
  const auto lines = lines_of(text);
  CHECK(text.find("# seed: 17") != std::string::npos);
  CHECK(text.find("# config: {\"n_max\":4}") != std::string::npos);
  CHECK(text.find("d1=0.5") != std::string::npos);
  CHECK(text.find("converged") != std::string::npos);
  const auto body = lines_of(body_of(text));
  REQUIRE(body.size() == 4);
  CHECK(body[1] == "0,1,1,-1,0.5,0.25");
  CHECK(body[2] == "1,2,1,1,0.125,0.0625");
  CHECK(body[3] == "2,2,2,2,0.10000000000000001,0.050000000000000003");
}

TEST_CASE("JSON emission round-trips") {
  const auto cfg = parse_experiment(spike_config());
  const auto r = run_convergence(cfg);
  REQUIRE(!r.steps.empty());
  std::ostringstream os;
  emit(r, "json", os);
  CHECK(report_from_json(json::parse(os.str())) == r);
  CHECK_THROWS_AS(emit(r, "xml", os), ConfigError);
}

TEST_CASE("convergence runs are deterministic in the seed") {
  const auto cfg = parse_experiment(spike_config());
  const auto a = run_convergence(cfg);
  const auto b = run_convergence(cfg);
  CHECK(body_of(csv(a)) == body_of(csv(b)));
  CHECK(csv(a) == csv(b));
  const auto c = run_convergence(with_seed(cfg, 6));
  CHECK(c.seed == 6);
  CHECK(body_of(csv(a)) != body_of(csv(c)));
}

TEST_CASE("run_convergence reports the errors of the Fejer means") {
  const auto cfg = parse_experiment(spike_config());
  const auto r = run_convergence(cfg);
  std::size_t step = 0;
  for (int p = 1; p <= 2; ++p) {
    const auto path = enumerate_net(cfg.schedule, p, cfg.n_max, cfg.seed + p);
    for (const auto& rect : path) {
      REQUIRE(step < r.steps.size());
      const auto& s = r.steps[step];
      CHECK(s.step == step);
      CHECK(s.p == p);
      CHECK(s.degrees == rect.degrees());
      std::vector<double> errs;
      for (const auto& x : cfg.points)
        errs.push_back(std::abs(fejer_mean_weights(cfg.function, rect, x) - eval(cfg.function, x)));
      std::sort(errs.begin(), errs.end());
      CHECK(std::abs(s.err_max - errs.back()) < 1e-10);
      CHECK(std::abs(s.err_median - errs[errs.size() / 2]) < 1e-10);
      ++step;
    }
  }
  CHECK(step == r.steps.size());
  CHECK(r.orlicz.count(1) == 1);
  CHECK(std::abs(r.orlicz.at(1) - std::log(26.0)) < 1e-12);
}

TEST_CASE("checkpoints filter steps by level") {
  auto j = spike_config();
  j["schedule"] = "cube";
  j["checkpoints"] = {4, 8, 16};
  const auto r = run_convergence(parse_experiment(j));
  REQUIRE(r.steps.size() == 6);
  for (std::size_t i = 0; i < 6; ++i) CHECK(r.steps[i].degrees.front() == (4 << (i % 3)));
}

TEST_CASE("the cube path ends no worse than the best rectangle along the other schedules") {
  auto j = spike_config();
  j["p_min"] = 2;
  const auto regular = run_convergence(parse_experiment(j));
  j["schedule"] = "cube";
  const auto cube = run_convergence(parse_experiment(j));
  double best = 1e300;
  for (const auto& s : regular.steps) best = std::min(best, s.err_max);
  CHECK(cube.steps.back().err_max <= best + 1e-12);
}

TEST_CASE("a function of fewer variables gives the same report as its marginal") {
  TrigPoly f;
  f.add(MultiIndex{{1, 1}}, Complex(0.5, 0.25)).add(MultiIndex{{1, -2}, {2, 1}}, 1.0).add(MultiIndex{}, 2.0);
  json j = json::parse(R"({"schedule": "pringsheim", "p_max": 3, "n_max": 6,
                          "points": {"count": 7}, "seed": 3})");
  j["function"] = {{"type", "trigpoly"},
                   {"terms", json::array({{{"index", {{"1", 1}}}, {"re", 0.5}, {"im", 0.25}},
                                          {{"index", {{"1", -2}, {"2", 1}}}, {"re", 1.0}},
                                          {{"index", json::object()}, {"re", 2.0}}})}};
  auto a_cfg = parse_experiment(j);
  auto b_cfg = a_cfg;
  b_cfg.function = marginalize(f, 2);
  const auto a = run_convergence(a_cfg);
  const auto b = run_convergence(b_cfg);
  REQUIRE(a.steps.size() == b.steps.size());
  for (std::size_t i = 0; i < a.steps.size(); ++i) {
    CHECK(a.steps[i].degrees == b.steps[i].degrees);
    CHECK(std::abs(a.steps[i].err_max - b.steps[i].err_max) < 1e-12);
  }
}

TEST_CASE("experiment configs are validated") {
  auto j = spike_config();
  j.erase("function");
  CHECK_THROWS_AS(parse_experiment(j), ConfigError);
  j = spike_config();
  j["p_max"] = 0;
  CHECK_THROWS_AS(parse_experiment(j), ConfigError);
  j = spike_config();
  j["points"] = json::array({{0.1}});
  CHECK_THROWS_AS(parse_experiment(j), ConfigError);
  j = spike_config();
  j["schedule"] = "spiral";
  CHECK_THROWS_AS(parse_experiment(j), ConfigError);
  CHECK_THROWS_AS(parse_experiment(json::array()), ConfigError);
}

TEST_CASE("seeded points are reproducible and in range") {
  const auto a = seeded_points(20, 3, 9);
  CHECK(a == seeded_points(20, 3, 9));
  CHECK(a != seeded_points(20, 3, 10));
  for (const auto& x : a) {
    REQUIRE(x.size() == 3);
    for (double v : x) CHECK((v >= 0.0 && v < 1.0));
  }
}

TEST_CASE("adversarial search examples") {
  const Function th = TrigPoly::character(MultiIndex{{1, 1}, {2, 1}});
  const auto pts = seeded_points(4, 2, 1);
  const auto rep = adversarial_search(th, 2, 8, pts);
  CHECK(rep.total == 81);
  CHECK(!rep.partial);
  for (const auto& s : rep.points) {
    CHECK(std::abs(s.worst_error - 1.0) < 1e-12);
    CHECK(std::find(s.worst.begin(), s.worst.end(), 0) != s.worst.end());
    const double w = fejer_weight(1, 8);
    CHECK(std::abs(s.cube_error - (1.0 - w * w)) < 1e-12);
    CHECK(s.best == std::vector<int>{8, 8});
    CHECK(std::abs(s.best_error - s.cube_error) < 1e-15);
  }

  const auto flat = adversarial_search(TrigPoly::constant(Complex(1.5, -2.0)), 2, 5, pts);
  for (const auto& s : flat.points) {
    CHECK(s.worst_error < 1e-14);
    CHECK(s.cube_error < 1e-14);
  }

  AdversarialOptions opts;
  opts.n_min = 1;
  const auto positive = adversarial_search(th, 2, 8, pts, opts);
  CHECK(positive.total == 64);
  const double w1 = fejer_weight(1, 1);
  for (const auto& s : positive.points) {
    CHECK(std::abs(s.worst_error - (1.0 - w1 * w1)) < 1e-12);
    CHECK(s.worst == std::vector<int>{1, 1});
  }

  opts.n_min = 0;
  opts.budget = 10;
  const auto cut = adversarial_search(th, 2, 8, pts, opts);
  CHECK(cut.partial);
  CHECK(cut.scanned <= 10 * pts.size());
}

TEST_CASE("adversarial search agrees with direct evaluation") {
  const Function spike = SpikeTensor({{1, 0.05}, {2, 0.05}});
  const auto pts = seeded_points(3, 2, 4);
  const auto rep = adversarial_search(spike, 2, 6, pts);
  for (const auto& s : rep.points) {
    double worst = 0.0, best = 1e300;
    const Complex target = eval(spike, s.x);
    for (int a = 0; a <= 6; ++a)
      for (int b = 0; b <= 6; ++b) {
        const double e = std::abs(fejer_mean_weights(spike, RectIndex{a, b}, s.x) - target);
        worst = std::max(worst, e);
        best = std::min(best, e);
      }
    CHECK(std::abs(s.worst_error - worst) < 1e-10);
    CHECK(std::abs(s.best_error - best) < 1e-10);
    CHECK(std::abs(s.cube_error -
                   std::abs(fejer_mean_weights(spike, RectIndex{6, 6}, s.x) - target)) < 1e-10);
  }
  std::ostringstream os;
  emit_csv(rep, os);
  CHECK(lines_of(os.str()).size() >= 1 + pts.size());
  const auto j = adversarial_to_json(rep);
  CHECK(j.at("points").size() == pts.size());
}

TEST_CASE("format_double round-trips") {
  Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    const double v = rng.uniform(-1e6, 1e6) * std::pow(10.0, rng.between(-20, 20));
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(0.5) == "0.5");
}
