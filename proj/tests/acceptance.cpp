// Acceptance gate: the full verification suite at its stated sample sizes,
// one PASS/FAIL line per criterion. Exit 0 iff every criterion passes.
//
//   poistri_acceptance [workers]
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "poistri/poistri.h"

namespace {

const char* const kTitles[] = {
    "",
    "normalization of the univariate, pair and trivariate densities",
    "pinned moment table by quadrature and Monte Carlo",
    "E(ac) by nested quadrature and Monte Carlo",
    "correlation of a and b",
    "acuteness probabilities",
    "staked and anchored moment tables by 2-D quadrature",
    "direct sampler against the Poisson-process oracle",
    "KS matrix with negative controls",
    "marginal consistency of the joint densities",
    "uniform-triangle ratio, max and min laws",
    "divergence flags and truncated b/c second moment",
    "determinism of the verification report",
};

struct Run {
  std::unique_ptr<poistri_report, decltype(&poistri_report_free)> report{nullptr, &poistri_report_free};
  std::string json;
  double seconds = 0.0;
};

bool run_suite(poistri_config* config, Run& out) {
  const auto start = std::chrono::steady_clock::now();
  poistri_report* raw = nullptr;
  if (poistri_verify(config, &raw) != POISTRI_OK) {
    std::fprintf(stderr, "verify failed: %s\n", poistri_last_error());
    return false;
  }
  out.report.reset(raw);
  poistri_text* text = nullptr;
  if (poistri_report_render(raw, &text) != POISTRI_OK) return false;
  out.json.assign(poistri_text_data(text), poistri_text_size(text));
  poistri_text_free(text);
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  const unsigned workers = argc > 1 ? static_cast<unsigned>(std::strtoul(argv[1], nullptr, 10)) : 1;
  poistri_config* config = nullptr;
  if (poistri_config_new(&config) != POISTRI_OK || poistri_config_set_workers(config, workers) != POISTRI_OK ||
      poistri_config_set_format(config, POISTRI_FORMAT_JSON) != POISTRI_OK) {
    std::fprintf(stderr, "configuration failed: %s\n", poistri_last_error());
    return 2;
  }
  std::unique_ptr<poistri_config, decltype(&poistri_config_free)> owner(config, &poistri_config_free);

  Run first, second;
  if (!run_suite(config, first) || !run_suite(config, second)) return 1;

  struct Tally {
    int total = 0;
    int failed = 0;
    std::vector<std::string> failures;
  };
  std::map<int, Tally> by_criterion;
  const std::size_t n = poistri_report_count(first.report.get());
  for (std::size_t i = 0; i < n; ++i) {
    poistri_check_view v{};
    poistri_report_check(first.report.get(), i, &v);
    Tally& t = by_criterion[v.criterion];
    ++t.total;
    if (!v.pass) {
      ++t.failed;
      t.failures.emplace_back(v.name);
    }
  }

  int failed_criteria = 0;
  for (int c = 1; c <= 11; ++c) {
    const Tally& t = by_criterion[c];
    const bool pass = t.total > 0 && t.failed == 0;
    failed_criteria += !pass;
    std::printf("criterion %2d %s  %s (%d/%d checks)\n", c, pass ? "PASS" : "FAIL", kTitles[c], t.total - t.failed,
                t.total);
    for (const auto& name : t.failures) std::printf("             failed: %s\n", name.c_str());
  }
  const bool same = first.json == second.json;
  failed_criteria += !same;
  std::printf("criterion 12 %s  %s (%zu bytes, %s)\n", same ? "PASS" : "FAIL", kTitles[12], first.json.size(),
              same ? "identical" : "differ");

  std::printf("\n%zu checks, %d of 12 criteria failed; suite time %.1f s and %.1f s with %u worker(s)\n", n,
              failed_criteria, first.seconds, second.seconds, workers);
  return failed_criteria == 0 ? 0 : 1;
}
