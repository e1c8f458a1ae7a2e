// Command-line front end: kernel tables, Fourier coefficients, Fejer means,
// convergence experiments, adversarial rectangle search and tensor-net runs.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "fejer/config.hpp"
#include "fejer/errors.hpp"
#include "fejer/experiments.hpp"
#include "fejer/kernels.hpp"
#include "fejer/summation.hpp"
#include "fejer/tensor_net.hpp"
#include "fejer/version.hpp"

namespace {

using fejer::Complex;
using fejer::format_double;
using fejer::Point;
using nlohmann::json;

constexpr int kToleranceNotMet = 2;

// Writes to --out when given, stdout otherwise.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw fejer::Error("cannot write " + path);
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

fejer::Function load_function(const std::string& path) {
  const auto j = fejer::load_json(path);
  const auto base = std::filesystem::path(path).parent_path();
  return fejer::function_from_json(j.contains("function") ? j.at("function") : j, base);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::vector<Point> read_points(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw fejer::ConfigError("cannot open points file " + path);
  std::vector<Point> pts;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    Point x;
    try {
      for (const auto& tok : split(line, ',')) x.push_back(std::stod(tok));
    } catch (const std::exception&) {
      if (pts.empty()) continue;  // header row
      throw fejer::ConfigError("bad points row: " + line);
    }
    if (!x.empty()) pts.push_back(std::move(x));
  }
  return pts;
}

fejer::Schedule make_schedule(const std::string& kind, double lambda, const std::string& blocks) {
  json j{{"kind", kind}, {"lambda", lambda}};
  if (kind == "dregular") {
    std::vector<std::vector<int>> b;
    for (const auto& block : split(blocks, ';')) {
      std::vector<int> coords;
      for (const auto& c : split(block, ',')) coords.push_back(std::stoi(c));
      b.push_back(std::move(coords));
    }
    j["blocks"] = b;
  }
  return fejer::schedule_from_json(j);
}

fejer::MultiIndex parse_index(const std::string& s) {
  fejer::MultiIndex n;
  for (const auto& entry : split(s, ',')) {
    const auto kv = split(entry, ':');
    if (kv.size() != 2) throw fejer::ConfigError("index entries look like coord:value");
    n.set(std::stoi(kv[0]), std::stoi(kv[1]));
  }
  return n;
}

std::vector<Point> points_or_seeded(const std::string& file, std::size_t count, int dim,
                                    std::uint64_t seed) {
  if (!file.empty()) return read_points(file);
  return fejer::seeded_points(count, dim, seed);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fejer summation of Fourier series on the infinite-dimensional torus"};
  app.set_version_flag("--version", std::string(fejer::kName) + " " + fejer::kVersion);
  app.require_subcommand(1);

  std::string out;
  std::uint64_t seed = 0;
  std::string format = "csv";

  // kernel-table
  auto* kt = app.add_subcommand("kernel-table", "Tabulate D_l or K_l on a uniform grid");
  std::string kind = "fejer";
  int l = 0;
  std::size_t grid = 64;
  kt->add_option("--kind", kind)->check(CLI::IsMember({"dirichlet", "fejer"}));
  kt->add_option("--l", l, "Kernel degree")->required()->check(CLI::NonNegativeNumber);
  kt->add_option("--grid", grid, "Number of nodes t = j/G")->check(CLI::PositiveNumber);
  kt->add_option("--out", out);

  // fourier
  auto* fo = app.add_subcommand("fourier", "Fourier coefficients of a function spec");
  std::string function_file, index_str, box_str;
  fo->add_option("--function", function_file)->required()->check(CLI::ExistingFile);
  auto* idx_opt = fo->add_option("--index", index_str, "Single index, e.g. 1:1,2:-1");
  fo->add_option("--box", box_str, "Coefficient box degrees, e.g. 2,2")->excludes(idx_opt);
  fo->add_option("--out", out);

  // fejer
  auto* fe = app.add_subcommand("fejer", "Fejer means along a schedule path");
  std::string schedule = "cube", blocks, points_file;
  double lambda = 1.0;
  int p = 1, n_max = 8, n_min = 0;
  std::size_t npoints = 16;
  fe->add_option("--function", function_file)->required()->check(CLI::ExistingFile);
  fe->add_option("--schedule", schedule)
      ->check(CLI::IsMember({"cube", "regular", "pringsheim", "dregular"}));
  fe->add_option("--lambda", lambda);
  fe->add_option("--blocks", blocks, "D-regular blocks, e.g. 1,2;3");
  fe->add_option("--p", p)->check(CLI::PositiveNumber);
  fe->add_option("--nmax", n_max)->check(CLI::PositiveNumber);
  fe->add_option("--points", points_file)->check(CLI::ExistingFile);
  fe->add_option("--npoints", npoints);
  fe->add_option("--seed", seed);
  fe->add_option("--out", out);

  // converge
  auto* cv = app.add_subcommand("converge", "Run a convergence experiment from a config");
  std::string config_file;
  cv->add_option("--config", config_file)->required()->check(CLI::ExistingFile);
  auto* seed_opt = cv->add_option("--seed", seed);
  cv->add_option("--out", out);
  auto* fmt_opt = cv->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));

  // adversarial
  auto* ad = app.add_subcommand("adversarial", "Exhaustive worst-rectangle search");
  std::size_t budget = std::size_t{1} << 22;
  ad->add_option("--function", function_file)->required()->check(CLI::ExistingFile);
  ad->add_option("--p", p)->check(CLI::Range(1, 3));
  ad->add_option("--nmax", n_max)->check(CLI::PositiveNumber);
  ad->add_option("--nmin", n_min)->check(CLI::NonNegativeNumber);
  ad->add_option("--budget", budget);
  ad->add_option("--points", points_file)->check(CLI::ExistingFile);
  ad->add_option("--npoints", npoints);
  ad->add_option("--seed", seed);
  ad->add_option("--out", out);
  ad->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));

  // tensor-sim
  auto* ts = app.add_subcommand("tensor-sim", "Product operator net convergence run");
  ts->add_option("--config", config_file)->required()->check(CLI::ExistingFile);
  ts->add_option("--out", out);

  CLI11_PARSE(app, argc, argv);

  try {
    if (kt->parsed()) {
      Output o(out);
      o.stream() << "t,value\n";
      for (std::size_t j = 0; j < grid; ++j) {
        const double t = static_cast<double>(j) / static_cast<double>(grid);
        const double v = kind == "fejer" ? fejer::fejer(l, t) : fejer::dirichlet(l, t);
        o.stream() << format_double(t) << ',' << format_double(v) << '\n';
      }
      return 0;
    }

    if (fo->parsed()) {
      const auto f = load_function(function_file);
      Output o(out);
      if (!index_str.empty()) {
        const Complex c = fejer::fourier_coeff(f, parse_index(index_str));
        o.stream() << "index,re,im\n"
                   << parse_index(index_str).to_string() << ',' << format_double(c.real())
                   << ',' << format_double(c.imag()) << '\n';
        return 0;
      }
      std::vector<int> degrees;
      for (const auto& tok : split(box_str.empty() ? "4" : box_str, ','))
        degrees.push_back(std::stoi(tok));
      const fejer::RectIndex box(degrees);
      const auto table = fejer::FourierTable::build(f, box);
      for (int j = 1; j <= box.p(); ++j) o.stream() << "n_" << j << ',';
      o.stream() << "re,im\n";
      std::vector<int> n(box.p());
      for (int j = 0; j < box.p(); ++j) n[j] = -box.degree(j);
      while (true) {
        const Complex c = table(fejer::MultiIndex::dense(n));
        for (int v : n) o.stream() << v << ',';
        o.stream() << format_double(c.real()) << ',' << format_double(c.imag()) << '\n';
        int j = box.p() - 1;
        for (; j >= 0; --j) {
          if (++n[j] <= box.degree(j)) break;
          n[j] = -box.degree(j);
        }
        if (j < 0) break;
      }
      return 0;
    }

    if (fe->parsed()) {
      const auto f = load_function(function_file);
      const auto sched = make_schedule(schedule, lambda, blocks);
      const int dim = std::max(p, fejer::active_dim(f));
      const auto pts = points_or_seeded(points_file, npoints, dim, seed);
      const auto path = fejer::enumerate_net(sched, p, n_max, seed);
      std::vector<fejer::MeanEvaluator> evals;
      for (const auto& x : pts) evals.emplace_back(f, x, p, n_max);
      Output o(out);
      o.stream() << "p";
      for (int j = 1; j <= p; ++j) o.stream() << ",N_" << j;
      for (int j = 1; j <= dim; ++j) o.stream() << ",x_" << j;
      o.stream() << ",re,im,abs_err\n";
      for (const auto& rect : path)
        for (std::size_t i = 0; i < pts.size(); ++i) {
          const Complex s = evals[i](rect);
          const double err = std::abs(s - fejer::eval(f, pts[i]));
          o.stream() << p;
          for (int v : rect.degrees()) o.stream() << ',' << v;
          for (int j = 0; j < dim; ++j) o.stream() << ',' << format_double(pts[i].at(j));
          o.stream() << ',' << format_double(s.real()) << ',' << format_double(s.imag()) << ','
                     << format_double(err) << '\n';
        }
      return 0;
    }

    if (cv->parsed()) {
      auto cfg = fejer::load_experiment(config_file);
      if (*seed_opt)
        cfg = fejer::with_seed(cfg, seed, std::filesystem::path(config_file).parent_path());
      const auto report = fejer::run_convergence(cfg);
      const std::string fmt = *fmt_opt ? format : cfg.format;
      const std::string dest = !out.empty() ? out : cfg.output;
      if (dest.empty())
        fejer::emit(report, fmt, std::cout);
      else
        fejer::emit(report, fmt, std::filesystem::path(dest));
      return report.converged ? 0 : kToleranceNotMet;
    }

    if (ad->parsed()) {
      const auto f = load_function(function_file);
      const int dim = std::max(p, fejer::active_dim(f));
      const auto pts = points_or_seeded(points_file, npoints, dim, seed);
      fejer::AdversarialOptions opts;
      opts.n_min = n_min;
      opts.budget = budget;
      const auto report = fejer::adversarial_search(f, p, n_max, pts, opts);
      Output o(out);
      if (format == "json")
        o.stream() << fejer::adversarial_to_json(report).dump(2) << '\n';
      else
        fejer::emit_csv(report, o.stream());
      return 0;
    }

    if (ts->parsed()) {
      const auto j = fejer::load_json(config_file);
      const auto nets = fejer::nets_from_json(j.at("factors"));
      const auto f = fejer::function_from_json(
          j.at("function"), std::filesystem::path(config_file).parent_path());
      const auto values = fejer::sample_product(
          nets, [&](std::span<const double> x) { return fejer::eval(f, x); });
      std::vector<fejer::ProductNetIndex> path;
      if (j.contains("path"))
        for (const auto& row : j.at("path"))
          path.emplace_back(row.get<std::vector<std::size_t>>());
      else
        path = fejer::growing_path(nets);
      const auto report =
          fejer::theorem4_harness(nets, values, path, j.value("tolerance", 1e-6));
      Output o(out);
      for (const auto& s : report.steps) {
        std::vector<std::string> labels;
        for (std::size_t k = 0; k < s.positions.size(); ++k)
          labels.push_back(nets[k].label(s.positions[k]));
        o.stream() << json{{"step", s.step},
                           {"support", s.support},
                           {"indices", labels},
                           {"max_error", s.max_error}}
                          .dump()
                   << '\n';
      }
      return report.converged ? 0 : kToleranceNotMet;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
