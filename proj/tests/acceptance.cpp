// Acceptance checks. One PASS/FAIL line per criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "fejer/errors.hpp"
#include "fejer/experiments.hpp"
#include "fejer/funcspace.hpp"
#include "fejer/index_core.hpp"
#include "fejer/kernels.hpp"
#include "fejer/random.hpp"
#include "fejer/summation.hpp"
#include "fejer/tensor_net.hpp"
#include "oracles.hpp"

using namespace fejer;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) { return format_double(v); }

Outcome kernels_criterion() {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  const int nodes = 1024;
  double worst_diff = 0.0, most_negative = 0.0, worst_mass = 0.0;
  std::vector<double> mass(65, 0.0);
  for (int j = 0; j < nodes; ++j) {
    const double t = static_cast<double>(j) / nodes;
    // Running sum of D_0..D_l from the direct cosine series.
    double partial = 0.0;
    for (int l = 0; l <= 64; ++l) {
      partial += oracle::dirichlet_direct(l, t);
      const double k = fejer::fejer(l, t);
      worst_diff = std::max(worst_diff, std::abs(k - partial / (l + 1)));
      most_negative = std::min(most_negative, k);
      mass[l] += k;
    }
  }
  for (int l = 0; l <= 64; ++l) {
    worst_mass = std::max(worst_mass, std::abs(mass[l] / nodes - 1.0));
    out.require(dirichlet(l, 0.0) == 2.0 * l + 1.0, "D_l(0) != 2l+1 at l=" + std::to_string(l));
  }
  const double secs = seconds_since(t0);
  out.require(worst_diff <= 1e-10, "kernel vs average of Dirichlet kernels: " + fmt(worst_diff));
  out.require(most_negative >= -1e-12, "negative kernel value " + fmt(most_negative));
  out.require(worst_mass <= 1e-10, "kernel mass defect " + fmt(worst_mass));
  out.require(secs < 5.0, "runtime " + fmt(secs) + " s");
  if (out.ok)
    out.detail = "max diff " + fmt(worst_diff) + ", min " + fmt(most_negative) + ", mass defect " +
                 fmt(worst_mass) + ", " + fmt(secs) + " s";
  return out;
}

Outcome dual_form_criterion() {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(20240601);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int p = rng.between(1, 3);
    const int degree = rng.between(0, 16);
    const TrigPoly f = oracle::random_trigpoly(rng, p, degree, rng.between(1, 6));
    std::vector<int> n(p);
    for (auto& v : n) v = rng.between(0, 16);
    const RectIndex rect(n);
    // 64 nodes resolve f * K exactly (degree <= 32) and satisfy G >= 2N+2.
    const auto grid = CylinderGrid::sample(f, std::vector<std::size_t>(p, 64));
    Point x(p);
    for (auto& v : x) v = rng.uniform();
    const double diff = std::abs(fejer_mean_weights(f, rect, x) - fejer_mean_conv(grid, rect, x));
    worst = std::max(worst, diff);
  }
  const double secs = seconds_since(t0);
  out.require(worst <= 1e-9, "weights vs convolution: " + fmt(worst));
  out.require(secs < 30.0, "runtime " + fmt(secs) + " s");
  if (out.ok) out.detail = "max diff " + fmt(worst) + ", " + fmt(secs) + " s";
  return out;
}

Outcome projection_criterion() {
  Outcome out;
  Rng rng(77);
  int checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int dims = rng.between(1, 5);
    const TrigPoly f = oracle::random_trigpoly(rng, dims, rng.between(0, 4), rng.between(1, 8));
    for (int m = 0; m <= 4; ++m) {
      const Function fm = marginalize(Function(f), m);
      for (const auto& [n, c] : f.terms()) {
        const Complex want = n.supported_within(m) ? c : Complex(0.0);
        out.require(fourier_coeff(fm, n) == want,
                    "coefficient " + n.to_string() + " of marginal m=" + std::to_string(m));
        ++checked;
      }
      // Indices absent from f stay absent.
      const MultiIndex probe{{1, 7}, {2, -7}};
      out.require(fourier_coeff(fm, probe) == Complex(0.0), "spurious coefficient");
    }
  }
  if (out.ok) out.detail = std::to_string(checked) + " coefficients exact";
  return out;
}

Outcome lemma_criterion() {
  Outcome out;
  int checked = 0;
  double slack = 1e300;
  for (double e1 : {0.05, 0.1, 0.2})
    for (double e2 : {0.05, 0.1, 0.2}) {
      const Function f = SpikeTensor({{1, e1}, {2, e2}});
      for (int d : {1, 2, 3})
        for (int m : {0, 1, 2}) {
          const auto r = lemma_check(f, m, d);
          out.require(r.lhs <= r.rhs + 1e-8, "spike inequality fails at eps=(" + fmt(e1) + "," +
                                                 fmt(e2) + ") d=" + std::to_string(d));
          slack = std::min(slack, r.rhs - r.lhs);
          ++checked;
        }
    }
  Rng rng(4242);
  for (int trial = 0; trial < 100; ++trial) {
    const int dims = rng.between(1, 3);
    const TrigPoly g = oracle::random_trigpoly(rng, dims, rng.between(0, 2), rng.between(1, 4));
    const Function f = oracle::squared_magnitude(g);
    for (int d : {1, 2, 3})
      for (int m = 0; m < dims; ++m) {
        const auto r = lemma_check(f, m, d);
        out.require(r.lhs <= r.rhs + 1e-8, "polynomial inequality fails at trial " +
                                               std::to_string(trial) + " d=" + std::to_string(d));
        slack = std::min(slack, r.rhs - r.lhs);
        ++checked;
      }
  }
  const double spike = orlicz_functional(SpikeTensor({{1, 0.1}}), 1);
  out.require(std::abs(spike - std::log(11.0)) <= 1e-12, "spike functional " + fmt(spike));
  if (out.ok) out.detail = std::to_string(checked) + " cases, min slack " + fmt(slack);
  return out;
}

Outcome schedule_error_criterion() {
  Outcome out;
  const Function th = TrigPoly::character(MultiIndex{{1, 1}});
  const Point origin{0.0};
  for (int n : {1, 3, 7, 15, 63}) {
    const auto path = enumerate_net(Schedule::cube(), 1, n, 0);
    const auto& last = path.back();
    out.require(last.degrees() == std::vector<int>{n}, "cube path does not end at N");
    const double err = std::abs(fejer_mean_weights(th, last, origin) - eval(th, origin));
    out.require(err == 1.0 / (n + 1), "error at N=" + std::to_string(n) + " is " + fmt(err));
  }

  const Function spike = SpikeTensor({{1, 0.2}, {2, 0.2}});
  const auto points = seeded_points(50, 2, 11);
  std::vector<double> medians;
  const auto path = enumerate_net(Schedule::cube(), 2, 256, 0);
  for (int n : {8, 16, 32, 64, 128, 256}) {
    const RectIndex rect{n, n};
    out.require(std::find(path.begin(), path.end(), rect) != path.end(), "cube path misses N");
    std::vector<double> errs;
    for (const auto& x : points)
      errs.push_back(std::abs(fejer_mean_weights(spike, rect, x) - eval(spike, x)));
    std::sort(errs.begin(), errs.end());
    medians.push_back(0.5 * (errs[24] + errs[25]));
  }
  for (std::size_t i = 1; i < medians.size(); ++i)
    out.require(medians[i] < medians[i - 1], "median error not decreasing at step " +
                                                 std::to_string(i) + ": " + fmt(medians[i]));
  if (out.ok) out.detail = "spike medians " + fmt(medians.front()) + " -> " + fmt(medians.back());
  return out;
}

Outcome adversarial_criterion() {
  Outcome out;
  const Function spike = SpikeTensor({{1, 0.05}, {2, 0.05}});
  const auto points = seeded_points(25, 2, 2026);
  const auto rep = adversarial_search(spike, 2, 64, points);
  out.require(!rep.partial, "search was cut short");
  std::size_t hits = 0;
  for (const auto& s : rep.points)
    if (s.worst_error >= 2.0 * s.cube_error) ++hits;
  const double share = static_cast<double>(hits) / static_cast<double>(rep.points.size());
  out.require(share >= 0.8, "worst >= 2x cube at only " + fmt(share) + " of points");

  for (double lambda : {1.0, 1.5, 2.0, 4.0})
    for (int p : {1, 2, 3, 5})
      for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto a = enumerate_net(Schedule::regular(lambda), p, 40, seed);
        std::vector<int> block(p);
        for (int j = 0; j < p; ++j) block[j] = j + 1;
        const auto b = enumerate_net(Schedule::dregular({block}, lambda), p, 40, seed);
        out.require(a == b, "one-block d-regular path differs from regular at p=" +
                                std::to_string(p) + " lambda=" + fmt(lambda));
      }
  if (out.ok) out.detail = std::to_string(hits) + "/" + std::to_string(rep.points.size()) +
                           " points with worst >= 2x cube";
  return out;
}

Outcome tensor_criterion() {
  Outcome out;
  const std::vector<int> degrees{0, 1, 2, 4, 8};
  const std::vector<OperatorNet> nets{OperatorNet::fejer(32, degrees), OperatorNet::fejer(32, degrees)};
  const Function th = TrigPoly::character(MultiIndex{{1, 1}, {2, 1}});
  const auto f = sample_product(nets, [&](std::span<const double> x) { return eval(th, x); });
  const auto path = growing_path(nets);
  const auto rep = theorem4_harness(nets, f, path, 1e-3);
  double worst = 0.0;
  for (std::size_t s = 0; s < path.size(); ++s) {
    std::vector<int> rect(2);
    for (std::size_t k = 0; k < 2; ++k) rect[k] = degrees[path[s][k]];
    const auto tf = tensor_apply(nets, path[s], f);
    double step_err = 0.0;
    for (int a = 0; a < 32; ++a)
      for (int b = 0; b < 32; ++b) {
        const Point x{a / 32.0, b / 32.0};
        const Complex sigma = fejer_mean_weights(th, RectIndex(rect), x);
        worst = std::max(worst, std::abs(tf[a * 32 + b] - sigma));
        step_err = std::max(step_err, std::abs(sigma - eval(th, x)));
      }
    out.require(std::abs(rep.steps[s].max_error - step_err) <= 1e-9, "harness error differs");
  }
  out.require(worst <= 1e-9, "product net vs summation: " + fmt(worst));

  Rng rng(8);
  const std::vector<OperatorNet> mixed{OperatorNet::fejer(8, {0, 1, 3}), OperatorNet::fejer(12, {0, 2, 5}),
                                       OperatorNet::fejer(6, {0, 1, 2})};
  std::vector<Complex> g(8 * 12 * 6);
  Complex mean(0.0);
  for (auto& v : g) {
    v = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
    mean += v;
  }
  mean /= static_cast<double>(g.size());
  double mean_err = 0.0;
  for (const auto& v : tensor_apply(mixed, ProductNetIndex{}, g)) mean_err = std::max(mean_err, std::abs(v - mean));
  out.require(mean_err <= 1e-12, "zero index vs global mean: " + fmt(mean_err));

  double commute = 0.0;
  const std::vector<std::vector<std::size_t>> orders{{0, 1, 2}, {2, 1, 0}, {1, 0, 2}, {2, 0, 1}};
  for (const auto& idx : {ProductNetIndex({2, 1, 2}), ProductNetIndex({1, 0, 2}), ProductNetIndex({0, 2})}) {
    const auto ref = tensor_apply(mixed, idx, g);
    for (const auto& order : orders) {
      const auto other = tensor_apply(mixed, idx, g, order);
      for (std::size_t i = 0; i < g.size(); ++i) commute = std::max(commute, std::abs(ref[i] - other[i]));
    }
  }
  out.require(commute <= 1e-12, "axis order changes result by " + fmt(commute));
  if (out.ok)
    out.detail = "summation diff " + fmt(worst) + ", mean diff " + fmt(mean_err) + ", order diff " +
                 fmt(commute);
  return out;
}

Outcome determinism_criterion() {
  Outcome out;
  const auto j = nlohmann::json::parse(R"({
    "function": {"type": "spike", "eps": {"1": 0.1, "2": 0.2, "3": 0.3}},
    "schedule": {"kind": "dregular", "blocks": [[1, 2], [3]], "lambda": 2.0},
    "p_max": 3, "n_max": 24, "points": {"count": 12}, "seed": 99
  })");
  const auto body = [&]() {
    std::ostringstream os;
    emit_csv(run_convergence(parse_experiment(j)), os);
    std::istringstream in(os.str());
    std::string text;
    for (std::string line; std::getline(in, line);)
      if (line.rfind("#", 0) != 0) text += line + "\n";
    return text;
  };
  const auto a = body();
  const auto b = body();
  out.require(a.size() > 100, "empty report");
  out.require(a == b, "CSV bodies differ");
  if (out.ok) out.detail = std::to_string(a.size()) + " identical bytes";
  return out;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {"kernel identities", kernels_criterion},
      {"weight and convolution forms agree", dual_form_criterion},
      {"marginals project the spectrum", projection_criterion},
      {"marginal Orlicz inequality", lemma_criterion},
      {"cube path errors", schedule_error_criterion},
      {"adversarial rectangles and d-regular reduction", adversarial_criterion},
      {"product operator nets", tensor_criterion},
      {"seeded runs are reproducible", determinism_criterion},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.ok) ++failures;
    std::printf("%s %zu %s: %s\n", o.ok ? "PASS" : "FAIL", i + 1, criteria[i].name, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
