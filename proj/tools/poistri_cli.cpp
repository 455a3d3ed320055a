// poistri: command-line front end over the C API in libpoistri.
#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include "poistri/poistri.h"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct Globals {
  std::uint64_t seed = 20171221;
  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  std::string format = "csv";
  std::string out;
  double alpha = 0.001;
  double tol = 1e-10;
  std::string inject_fault;
};

// A failed library call, carrying the exit code it maps to.
struct CommandError {
  int code;
  std::string message;
};

void check(poistri_status status) {
  if (status == POISTRI_OK) return;
  const int code = status == POISTRI_ERR_ARGUMENT ? kExitUsage : kExitFailure;
  throw CommandError{code, std::string(poistri_status_name(status)) + ": " + poistri_last_error()};
}

using ConfigPtr = std::unique_ptr<poistri_config, decltype(&poistri_config_free)>;
using TextPtr = std::unique_ptr<poistri_text, decltype(&poistri_text_free)>;

ConfigPtr make_config(const Globals& g) {
  poistri_config* raw = nullptr;
  check(poistri_config_new(&raw));
  ConfigPtr config(raw, &poistri_config_free);
  check(poistri_config_set_seed(raw, g.seed));
  check(poistri_config_set_workers(raw, g.workers));
  check(poistri_config_set_format_name(raw, g.format.c_str()));
  check(poistri_config_set_alpha(raw, g.alpha));
  check(poistri_config_set_tol(raw, g.tol));
  if (!g.inject_fault.empty()) check(poistri_config_set_inject_fault(raw, g.inject_fault.c_str()));
  return config;
}

TextPtr take(poistri_text* raw) { return TextPtr(raw, &poistri_text_free); }

void emit(const Globals& g, const poistri_text* text) {
  if (g.out.empty() || g.out == "-") {
    std::fwrite(poistri_text_data(text), 1, poistri_text_size(text), stdout);
    std::fflush(stdout);
    return;
  }
  std::ofstream file(g.out, std::ios::binary);
  if (!file) throw CommandError{kExitFailure, "cannot open '" + g.out + "' for writing"};
  file.write(poistri_text_data(text), static_cast<std::streamsize>(poistri_text_size(text)));
  file.close();
  if (!file) throw CommandError{kExitFailure, "write to '" + g.out + "' failed"};
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t at = s.find(sep, start);
    parts.push_back(s.substr(start, at - start));
    if (at == std::string::npos) return parts;
    start = at + 1;
  }
}

int run_sample(const Globals& g, const std::string& family, std::size_t n) {
  const ConfigPtr config = make_config(g);
  check(poistri_sample_write(config.get(), family.c_str(), n, g.out.empty() ? "-" : g.out.c_str()));
  return kExitPass;
}

int run_pdf(const Globals& g, const std::string& kind, const std::vector<std::string>& grids,
            const std::vector<std::string>& points) {
  if (grids.empty() == points.empty()) throw CommandError{kExitUsage, "pdf: give either --grid or --at"};
  const ConfigPtr config = make_config(g);
  poistri_text* raw = nullptr;
  if (!grids.empty()) {
    std::vector<const char*> specs;
    for (const auto& s : grids) specs.push_back(s.c_str());
    check(poistri_pdf_grid_table(config.get(), kind.c_str(), specs.data(), specs.size(), &raw));
  } else {
    int dimension = 0;
    check(poistri_density_support(kind.c_str(), &dimension, nullptr, nullptr));
    std::vector<double> flat;
    for (const auto& p : points) {
      const auto coords = split(p, ',');
      if (coords.size() != static_cast<std::size_t>(dimension))
        throw CommandError{kExitUsage, "pdf: " + kind + " takes " + std::to_string(dimension) +
                                           " coordinate(s) per --at, got '" + p + "'"};
      for (const auto& c : coords) {
        double v = 0.0;
        check(poistri_parse_number(c.c_str(), &v));
        flat.push_back(v);
      }
    }
    check(poistri_pdf_table(config.get(), kind.c_str(), flat.data(), points.size(), &raw));
  }
  const TextPtr text = take(raw);
  emit(g, text.get());
  return kExitPass;
}

int run_moments(const Globals& g, const std::string& family, std::size_t n) {
  const ConfigPtr config = make_config(g);
  check(poistri_config_set_sample_size(config.get(), n));
  poistri_text* raw = nullptr;
  int all_pass = 0;
  check(poistri_moments_table(config.get(), family.c_str(), &raw, &all_pass));
  const TextPtr text = take(raw);
  emit(g, text.get());
  if (!all_pass) std::cerr << "moments: at least one cell disagrees with its reference\n";
  return all_pass ? kExitPass : kExitFailure;
}

int run_tables(const Globals& g) {
  const ConfigPtr config = make_config(g);
  poistri_text* raw = nullptr;
  check(poistri_reference_tables(config.get(), &raw));
  const TextPtr text = take(raw);
  emit(g, text.get());
  return kExitPass;
}

struct VerifyOptions {
  std::size_t n_moments = 1000000;
  std::size_t n_ac = 10000000;
  std::size_t n_ks = 100000;
  std::vector<int> criteria;
  bool quiet = false;
};

int run_verify(const Globals& g, const VerifyOptions& v) {
  const ConfigPtr config = make_config(g);
  check(poistri_config_set_verify_sizes(config.get(), v.n_moments, v.n_ac, v.n_ks));
  check(poistri_config_set_criteria(config.get(), v.criteria.data(), v.criteria.size()));
  if (!v.quiet)
    check(poistri_config_set_progress(
        config.get(), [](int criterion, void*) { std::cerr << "verify: criterion " << criterion << "\n"; }, nullptr));
  poistri_report* raw_report = nullptr;
  check(poistri_verify(config.get(), &raw_report));
  const std::unique_ptr<poistri_report, decltype(&poistri_report_free)> report(raw_report, &poistri_report_free);
  poistri_text* raw = nullptr;
  check(poistri_report_render(report.get(), &raw));
  const TextPtr text = take(raw);
  emit(g, text.get());

  const std::size_t count = poistri_report_count(report.get());
  std::size_t failed = 0;
  for (std::size_t i = 0; i < count; ++i) {
    poistri_check_view view{};
    check(poistri_report_check(report.get(), i, &view));
    if (view.pass) continue;
    ++failed;
    std::cerr << "FAIL " << view.name << " actual=" << view.actual << " expected=";
    if (view.expected_is_text)
      std::cerr << view.expected_text;
    else
      std::cerr << view.expected;
    std::cerr << " tolerance=" << view.tolerance << "\n";
  }
  std::cerr << "verify: " << count - failed << "/" << count << " checks passed\n";
  return poistri_report_passed(report.get()) ? kExitPass : kExitFailure;
}

struct PlotOptions {
  std::string kind;
  std::size_t n = 100000;
  int bins = 0;
  double x_min = std::numeric_limits<double>::quiet_NaN();
  double x_max = std::numeric_limits<double>::quiet_NaN();
};

int run_plot(const Globals& g, const PlotOptions& p) {
  if (p.n == 0) throw CommandError{kExitUsage, "plot: -n must be at least 1"};
  const ConfigPtr config = make_config(g);
  poistri_text* raw = nullptr;
  check(poistri_plot_svg(config.get(), p.kind.c_str(), p.n, p.bins, p.x_min, p.x_max, &raw));
  const TextPtr text = take(raw);
  emit(g, text.get());
  return kExitPass;
}

std::string kind_list() {
  std::string s;
  for (std::size_t i = 0; i < poistri_density_kind_count(); ++i) {
    if (i) s += ", ";
    s += poistri_density_kind_name(i);
  }
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random triangles from Poisson nearest neighbours: sampling, densities, moments, verification"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", poistri_version());

  Globals g;
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("--workers", g.workers, "Worker threads (results do not depend on it)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  app.add_option("--out", g.out, "Output path (default: stdout)");
  app.add_option("--alpha", g.alpha, "Significance level of the goodness-of-fit tests")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  app.add_option("--tol", g.tol, "Quadrature tolerance")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--inject-fault", g.inject_fault)->group("");

  std::string family;
  std::size_t n = 1000;
  auto* sample = app.add_subcommand("sample", "Dump sampled triangles");
  sample->add_option("--family", family, "pinned, staked, anchored or uniformT")->required();
  sample->add_option("-n", n, "Number of triangles")->capture_default_str();

  std::string kind;
  std::vector<std::string> grids, points;
  auto* pdf = app.add_subcommand("pdf", "Evaluate a catalog density");
  pdf->add_option("--kind", kind, "Density kind: " + kind_list())->required();
  pdf->add_option("--grid", grids, "start:stop:count, once per coordinate (pi allowed: 0:pi/2:50)");
  pdf->add_option("--at", points, "Point x[,y[,z]]; repeatable");

  std::size_t moments_n = 1000000;
  auto* moments = app.add_subcommand("moments", "Reproduce a moment table by quadrature and Monte Carlo");
  moments->add_option("--family", family, "pinned, staked or anchored")->required();
  moments->add_option("-n", moments_n, "Monte Carlo sample size")->capture_default_str();

  VerifyOptions vo;
  auto* verify = app.add_subcommand("verify", "Run the acceptance suite");
  verify->add_option("--n-moments", vo.n_moments, "Monte Carlo size for moments, correlation and acuteness")
      ->capture_default_str();
  verify->add_option("--n-ac", vo.n_ac, "Monte Carlo size for E(ac)")->capture_default_str();
  verify->add_option("--n-ks", vo.n_ks, "Sample size per KS test")->capture_default_str();
  verify->add_option("--criteria", vo.criteria, "Run only these criteria (1-11)")->delimiter(',');
  verify->add_flag("--quiet", vo.quiet, "No progress on stderr");

  PlotOptions po;
  auto* plot = app.add_subcommand("plot", "SVG histogram of samples against the density");
  plot->add_option("--kind", po.kind, "Density kind (joint kinds plot their first coordinate)")->required();
  plot->add_option("-n", po.n, "Number of samples")->capture_default_str();
  plot->add_option("--bins", po.bins, "Histogram bins (0: Freedman-Diaconis, at least 20)")->capture_default_str();
  plot->add_option("--xmin", po.x_min, "Left end of the x range");
  plot->add_option("--xmax", po.x_max, "Right end of the x range");

  auto* tables = app.add_subcommand("tables", "Print the reference moment tables");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (sample->parsed()) {
      if (n == 0) throw CommandError{kExitUsage, "sample: -n must be at least 1"};
      return run_sample(g, family, n);
    }
    if (pdf->parsed()) return run_pdf(g, kind, grids, points);
    if (moments->parsed()) return run_moments(g, family, moments_n);
    if (verify->parsed()) return run_verify(g, vo);
    if (plot->parsed()) return run_plot(g, po);
    if (tables->parsed()) return run_tables(g);
  } catch (const CommandError& e) {
    std::cerr << "poistri: " << e.message << "\n";
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "poistri: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}
