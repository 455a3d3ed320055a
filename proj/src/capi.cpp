#include "poistri/poistri.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <new>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "poistri/density.hpp"
#include "poistri/errors.hpp"
#include "poistri/io.hpp"
#include "poistri/moments.hpp"
#include "poistri/plot.hpp"
#include "poistri/sampler.hpp"
#include "poistri/verify.hpp"

struct poistri_config {
  poistri::VerifyConfig verify;
  poistri::Format format = poistri::Format::csv;
  std::size_t n = 1000000;
  poistri_progress_fn progress = nullptr;
  void* progress_user = nullptr;
};

struct poistri_samples {
  std::vector<poistri::TriangleSample> rows;
};

struct poistri_report {
  poistri::VerifyReport report;
  poistri::VerifyConfig config;
  poistri::Format format;
};

struct poistri_text {
  std::string data;
};

namespace {

thread_local std::string last_error;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

poistri_status fail(poistri_status status, const std::string& message) {
  last_error = message;
  return status;
}

// Runs `body`, mapping exceptions to status codes.
template <class F>
poistri_status guarded(F&& body) noexcept {
  try {
    body();
    last_error.clear();
    return POISTRI_OK;
  } catch (const std::invalid_argument& e) {
    return fail(POISTRI_ERR_ARGUMENT, e.what());
  } catch (const poistri::DomainError& e) {
    return fail(POISTRI_ERR_DOMAIN, e.what());
  } catch (const poistri::DivergentError& e) {
    return fail(POISTRI_ERR_DIVERGENT, e.what());
  } catch (const poistri::QuadratureError& e) {
    return fail(POISTRI_ERR_NUMERIC, e.what());
  } catch (const poistri::IntegrandError& e) {
    return fail(POISTRI_ERR_NUMERIC, e.what());
  } catch (const IoError& e) {
    return fail(POISTRI_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(POISTRI_ERR_MEMORY, "out of memory");
  } catch (const std::exception& e) {
    return fail(POISTRI_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(POISTRI_ERR_INTERNAL, "unknown error");
  }
}

void require(bool ok, const char* message) {
  if (!ok) throw std::invalid_argument(message);
}

poistri::Family family_arg(const char* name) {
  require(name != nullptr, "family is NULL");
  const auto f = poistri::parse_family(name);
  if (!f) throw std::invalid_argument(std::string("unknown family '") + name + "' (pinned, staked, anchored, uniformT)");
  return *f;
}

poistri::DensityKind kind_arg(const char* name) {
  require(name != nullptr, "density kind is NULL");
  const auto k = poistri::parse_density_kind(name);
  if (!k) throw std::invalid_argument(std::string("unknown density kind '") + name + "'");
  return *k;
}

poistri::Format format_arg(poistri_format f) {
  switch (f) {
    case POISTRI_FORMAT_CSV: return poistri::Format::csv;
    case POISTRI_FORMAT_JSON: return poistri::Format::json;
  }
  throw std::invalid_argument("unknown format");
}

poistri_text* new_text(std::string s) { return new poistri_text{std::move(s)}; }

const poistri_config& defaults() {
  static const poistri_config config;
  return config;
}

const poistri_config& or_defaults(const poistri_config* config) { return config ? *config : defaults(); }

}  // namespace

extern "C" {

const char* poistri_version(void) { return "1.0.0"; }

const char* poistri_status_name(poistri_status status) {
  switch (status) {
    case POISTRI_OK: return "ok";
    case POISTRI_ERR_ARGUMENT: return "invalid argument";
    case POISTRI_ERR_DOMAIN: return "domain error";
    case POISTRI_ERR_NUMERIC: return "numerical failure";
    case POISTRI_ERR_DIVERGENT: return "divergent";
    case POISTRI_ERR_IO: return "i/o error";
    case POISTRI_ERR_MEMORY: return "out of memory";
    case POISTRI_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* poistri_last_error(void) { return last_error.c_str(); }

const char* poistri_text_data(const poistri_text* text) { return text ? text->data.c_str() : ""; }
size_t poistri_text_size(const poistri_text* text) { return text ? text->data.size() : 0; }
void poistri_text_free(poistri_text* text) { delete text; }

poistri_status poistri_config_new(poistri_config** out) {
  return guarded([&] {
    require(out != nullptr, "out is NULL");
    *out = new poistri_config();
  });
}

void poistri_config_free(poistri_config* config) { delete config; }

poistri_status poistri_config_set_seed(poistri_config* config, uint64_t seed) {
  return guarded([&] {
    require(config != nullptr, "config is NULL");
    config->verify.seed = seed;
  });
}

poistri_status poistri_config_set_workers(poistri_config* config, unsigned workers) {
  return guarded([&] {
    require(config != nullptr, "config is NULL");
    require(workers >= 1, "workers must be at least 1");
    config->verify.workers = workers;
  });
}

poistri_status poistri_config_set_format(poistri_config* config, poistri_format format) {
  return guarded([&] {
    require(config != nullptr, "config is NULL");
    config->format = format_arg(format);
  });
}

poistri_status poistri_config_set_format_name(poistri_config* config, const char* name) {
  return guarded([&] {
    require(config != nullptr && name != nullptr, "config or name is NULL");
    const auto f = poistri::parse_format(name);
    if (!f) throw std::invalid_argument(std::string("unknown format '") + name + "' (csv, json)");
    config->format = *f;
  });
}

poistri_status poistri_config_set_sample_size(poistri_config* config, size_t n) {
  return guarded([&] {
    require(config != nullptr, "config is NULL");
    require(n >= 2 * poistri::kBatches, "sample size must be at least 200");
    config->n = n;
  });
}

poistri_status poistri_config_set_alpha(poistri_config* config, double alpha) {
  return guarded([&] {
    require(config != nullptr, "config is NULL");
    require(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0, 1)");
    config->verify.alpha = alpha;
  });
}

poistri_status poistri_config_set_tol(poistri_config* config, double tol) {
  return guarded([&] {
    require(config != nullptr, "config is NULL");
    require(tol > 0.0 && tol < 1.0, "tol must lie in (0, 1)");
    config->verify.tol = tol;
  });
}

poistri_status poistri_config_set_verify_sizes(poistri_config* config, size_t n_moments, size_t n_ac, size_t n_ks) {
  return guarded([&] {
    require(config != nullptr, "config is NULL");
    require(n_moments >= 2 * poistri::kBatches && n_ac >= 2 * poistri::kBatches && n_ks >= 100,
            "verify sizes too small");
    config->verify.n_moments = n_moments;
    config->verify.n_ac = n_ac;
    config->verify.n_ks = n_ks;
  });
}

poistri_status poistri_config_set_criteria(poistri_config* config, const int* criteria, size_t count) {
  return guarded([&] {
    require(config != nullptr, "config is NULL");
    require(count == 0 || criteria != nullptr, "criteria is NULL");
    std::vector<int> list(criteria, criteria + count);
    for (int c : list) require(c >= 1 && c <= 11, "criteria are numbered 1 to 11");
    config->verify.criteria = std::move(list);
  });
}

poistri_status poistri_config_set_inject_fault(poistri_config* config, const char* check) {
  return guarded([&] {
    require(config != nullptr, "config is NULL");
    config->verify.inject_fault = check ? check : "";
  });
}

poistri_status poistri_config_set_progress(poistri_config* config, poistri_progress_fn fn, void* user) {
  return guarded([&] {
    require(config != nullptr, "config is NULL");
    config->progress = fn;
    config->progress_user = user;
  });
}

poistri_status poistri_sample(const poistri_config* config, const char* family, size_t n, poistri_samples** out) {
  return guarded([&] {
    require(out != nullptr, "out is NULL");
    require(n >= 1, "sample size must be at least 1");
    const poistri_config& c = or_defaults(config);
    auto rows = poistri::sample_many(family_arg(family), n, poistri::RandomStream(c.verify.seed, 0), c.verify.workers);
    *out = new poistri_samples{std::move(rows)};
  });
}

size_t poistri_samples_count(const poistri_samples* samples) { return samples ? samples->rows.size() : 0; }

poistri_status poistri_samples_row(const poistri_samples* samples, size_t index, double row[12]) {
  return guarded([&] {
    require(samples != nullptr && row != nullptr, "samples or row is NULL");
    require(index < samples->rows.size(), "row index out of range");
    const poistri::TriangleSample& s = samples->rows[index];
    const double values[12] = {s.A.x, s.A.y, s.B.x, s.B.y, s.C.x, s.C.y, s.triangle.a(), s.triangle.b(),
                               s.triangle.c(), s.angles.alpha(), s.angles.beta(), s.angles.gamma()};
    std::copy(values, values + 12, row);
  });
}

poistri_status poistri_samples_render(const poistri_samples* samples, poistri_format format, poistri_text** out) {
  return guarded([&] {
    require(samples != nullptr && out != nullptr, "samples or out is NULL");
    std::ostringstream s;
    poistri::SampleWriter writer(s, format_arg(format));
    writer.write(samples->rows);
    writer.finish();
    *out = new_text(s.str());
  });
}

void poistri_samples_free(poistri_samples* samples) { delete samples; }

poistri_status poistri_sample_write(const poistri_config* config, const char* family, size_t n, const char* path) {
  return guarded([&] {
    require(path != nullptr, "path is NULL");
    require(n >= 1, "sample size must be at least 1");
    const poistri_config& c = or_defaults(config);
    const poistri::Family f = family_arg(family);
    std::ofstream file;
    const bool to_stdout = std::string(path) == "-";
    if (!to_stdout) {
      file.open(path, std::ios::binary);
      if (!file) throw IoError(std::string("cannot open '") + path + "' for writing");
    }
    std::ostream& out = to_stdout ? std::cout : file;
    poistri::SampleWriter writer(out, c.format);
    poistri::sample_blocks(f, n, poistri::RandomStream(c.verify.seed, 0), c.verify.workers,
                           [&](std::span<const poistri::TriangleSample> block) { writer.write(block); });
    writer.finish();
    out.flush();
    if (!out) throw IoError(std::string("write to '") + path + "' failed");
  });
}

size_t poistri_density_kind_count(void) { return poistri::kAllDensityKinds.size(); }

const char* poistri_density_kind_name(size_t index) {
  if (index >= poistri::kAllDensityKinds.size()) return nullptr;
  // to_string returns views into static literals
  return poistri::to_string(poistri::kAllDensityKinds[index]).data();
}

poistri_status poistri_density_support(const char* kind, int* dimension, double* lower, double* upper) {
  return guarded([&] {
    const poistri::Support& s = poistri::support(kind_arg(kind));
    if (dimension) *dimension = s.dimension;
    if (lower) *lower = s.lower;
    if (upper) *upper = s.upper;
  });
}

poistri_status poistri_pdf(const char* kind, const double* args, size_t nargs, double tol, double* value,
                           int* singular) {
  return guarded([&] {
    require(value != nullptr, "value is NULL");
    require(nargs == 0 || args != nullptr, "args is NULL");
    require(tol > 0.0, "tol must be positive");
    const poistri::DensityValue v = poistri::evaluate(kind_arg(kind), std::span<const double>(args, nargs), tol);
    *value = v.singular ? std::numeric_limits<double>::infinity() : v.value;
    if (singular) *singular = v.singular ? 1 : 0;
  });
}

poistri_status poistri_parse_number(const char* text, double* value) {
  return guarded([&] {
    require(text != nullptr && value != nullptr, "text or value is NULL");
    *value = poistri::parse_number(text);
  });
}

poistri_status poistri_pdf_table(const poistri_config* config, const char* kind, const double* points, size_t rows,
                                 poistri_text** out) {
  return guarded([&] {
    require(out != nullptr, "out is NULL");
    require(rows == 0 || points != nullptr, "points is NULL");
    const poistri_config& c = or_defaults(config);
    const poistri::DensityKind k = kind_arg(kind);
    const std::size_t dim = static_cast<std::size_t>(poistri::support(k).dimension);
    std::vector<std::vector<double>> table(rows);
    for (std::size_t r = 0; r < rows; ++r) table[r].assign(points + r * dim, points + (r + 1) * dim);
    *out = new_text(poistri::pdf_table(k, table, c.format, c.verify.tol));
  });
}

poistri_status poistri_pdf_grid_table(const poistri_config* config, const char* kind, const char* const* grids,
                                      size_t ngrids, poistri_text** out) {
  return guarded([&] {
    require(out != nullptr, "out is NULL");
    require(ngrids == 0 || grids != nullptr, "grids is NULL");
    const poistri_config& c = or_defaults(config);
    const poistri::DensityKind k = kind_arg(kind);
    std::vector<poistri::GridSpec> specs;
    for (std::size_t i = 0; i < ngrids; ++i) {
      require(grids[i] != nullptr, "grid is NULL");
      specs.push_back(poistri::parse_grid(grids[i]));
    }
    *out = new_text(poistri::pdf_table(k, poistri::grid_points(k, specs), c.format, c.verify.tol));
  });
}

poistri_status poistri_moments_table(const poistri_config* config, const char* family, poistri_text** out,
                                     int* all_pass) {
  return guarded([&] {
    require(out != nullptr, "out is NULL");
    const poistri_config& c = or_defaults(config);
    const poistri::Family f = family_arg(family);
    if (poistri::table_targets(f).empty())
      throw std::invalid_argument(std::string("family '") + family + "' has no moment table");
    poistri::McOptions mc;
    mc.n = c.n;
    mc.seed = c.verify.seed;
    mc.stream_id = 0;
    mc.workers = c.verify.workers;
    const auto reports = poistri::moment_table(f, mc, c.verify.tol);
    if (all_pass) {
      *all_pass = 1;
      for (const auto& r : reports)
        if (!r.pass) *all_pass = 0;
    }
    *out = new_text(poistri::moment_table_text(f, reports, c.format));
  });
}

poistri_status poistri_reference_tables(const poistri_config* config, poistri_text** out) {
  return guarded([&] {
    require(out != nullptr, "out is NULL");
    *out = new_text(poistri::reference_tables_text(or_defaults(config).format));
  });
}

poistri_status poistri_verify(const poistri_config* config, poistri_report** out) {
  return guarded([&] {
    require(out != nullptr, "out is NULL");
    const poistri_config& c = or_defaults(config);
    std::function<void(int)> progress;
    if (c.progress) progress = [&c](int criterion) { c.progress(criterion, c.progress_user); };
    auto report = poistri::run_verify(c.verify, progress);
    *out = new poistri_report{std::move(report), c.verify, c.format};
  });
}

void poistri_report_free(poistri_report* report) { delete report; }

int poistri_report_passed(const poistri_report* report) { return report && report->report.pass() ? 1 : 0; }

size_t poistri_report_count(const poistri_report* report) { return report ? report->report.checks.size() : 0; }

poistri_status poistri_report_check(const poistri_report* report, size_t index, poistri_check_view* out) {
  return guarded([&] {
    require(report != nullptr && out != nullptr, "report or out is NULL");
    require(index < report->report.checks.size(), "check index out of range");
    const poistri::Check& c = report->report.checks[index];
    out->name = c.name.c_str();
    out->criterion = c.criterion;
    out->family = c.family.c_str();
    out->expected_is_text = std::holds_alternative<std::string>(c.expected) ? 1 : 0;
    out->expected = out->expected_is_text ? std::nan("") : std::get<double>(c.expected);
    out->expected_text = out->expected_is_text ? std::get<std::string>(c.expected).c_str() : nullptr;
    out->actual = c.actual;
    out->tolerance = c.tolerance;
    out->pass = c.pass ? 1 : 0;
  });
}

poistri_status poistri_report_render(const poistri_report* report, poistri_text** out) {
  return guarded([&] {
    require(report != nullptr && out != nullptr, "report or out is NULL");
    *out = new_text(poistri::verify_report_text(report->report, report->config, report->format));
  });
}

poistri_status poistri_plot_svg(const poistri_config* config, const char* kind, size_t n, int bins, double x_min,
                                double x_max, poistri_text** out) {
  return guarded([&] {
    require(out != nullptr, "out is NULL");
    const poistri_config& c = or_defaults(config);
    poistri::PlotSpec spec;
    spec.kind = kind_arg(kind);
    spec.n = n;
    spec.bins = bins;
    if (!std::isnan(x_min)) spec.x_min = x_min;
    if (!std::isnan(x_max)) spec.x_max = x_max;
    spec.seed = c.verify.seed;
    spec.workers = c.verify.workers;
    *out = new_text(poistri::render_svg(poistri::prepare_plot(spec), spec.width, spec.height));
  });
}

}  // extern "C"
