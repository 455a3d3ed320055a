#include "poistri/io.hpp"

#include <charconv>
#include <cmath>
#include <json.hpp>
#include <sstream>
#include <stdexcept>
#include <variant>

#include "poistri/numerics.hpp"

namespace poistri {

namespace {

using json = nlohmann::ordered_json;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

double parse_plain(std::string_view text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  return v;
}

// A finite number as JSON, anything else as its text tag.
json number_or_tag(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

}  // namespace

std::optional<Format> parse_format(std::string_view name) noexcept {
  if (name == "csv") return Format::csv;
  if (name == "json") return Format::json;
  return std::nullopt;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

double parse_number(std::string_view raw) {
  const std::string text = trim(raw);
  const auto at = text.find("pi");
  if (at == std::string::npos) return parse_plain(text);
  // [sign][coefficient][*]pi[/denominator]
  std::string head = text.substr(0, at);
  if (!head.empty() && head.back() == '*') head.pop_back();
  double coefficient = 1.0;
  if (head == "-")
    coefficient = -1.0;
  else if (!head.empty() && head != "+")
    coefficient = parse_plain(head[0] == '+' ? std::string_view(head).substr(1) : std::string_view(head));
  const std::string tail = text.substr(at + 2);
  double denominator = 1.0;
  if (!tail.empty()) {
    if (tail[0] != '/') throw std::invalid_argument("not a number: '" + text + "'");
    denominator = parse_plain(std::string_view(tail).substr(1));
  }
  return coefficient * kPi / denominator;
}

GridSpec parse_grid(std::string_view text) {
  const auto first = text.find(':');
  const auto second = first == std::string_view::npos ? first : text.find(':', first + 1);
  if (second == std::string_view::npos || text.find(':', second + 1) != std::string_view::npos)
    throw std::invalid_argument("grid must be start:stop:count, got '" + std::string(text) + "'");
  GridSpec g;
  g.start = parse_number(text.substr(0, first));
  g.stop = parse_number(text.substr(first + 1, second - first - 1));
  const std::string count = trim(text.substr(second + 1));
  const auto [ptr, ec] = std::from_chars(count.data(), count.data() + count.size(), g.count);
  if (ec != std::errc() || ptr != count.data() + count.size() || count.empty())
    throw std::invalid_argument("grid count must be a non-negative integer, got '" + count + "'");
  if (!std::isfinite(g.start) || !std::isfinite(g.stop)) throw std::invalid_argument("grid ends must be finite");
  return g;
}

std::vector<std::vector<double>> grid_points(DensityKind kind, const std::vector<GridSpec>& grids) {
  const std::size_t dim = static_cast<std::size_t>(support(kind).dimension);
  if (grids.size() != dim)
    throw std::invalid_argument(std::string(to_string(kind)) + " needs " + std::to_string(dim) + " grid(s)");
  std::size_t total = 1;
  for (const GridSpec& g : grids) total *= g.count;
  std::vector<std::vector<double>> out;
  out.reserve(total);
  if (total == 0) return out;

  auto step = [](const GridSpec& g) { return g.count > 1 ? (g.stop - g.start) / static_cast<double>(g.count - 1) : 0.0; };
  std::vector<std::size_t> index(dim, 0);
  for (std::size_t n = 0; n < total; ++n) {
    std::vector<double> p(dim);
    for (std::size_t k = 0; k < dim; ++k)
      p[k] = index[k] + 1 == grids[k].count ? grids[k].stop : grids[k].start + step(grids[k]) * index[k];
    if (evaluate(kind, p).singular) {
      for (std::size_t k = 0; k < dim; ++k) {
        if (grids[k].count < 2) continue;
        if (index[k] == 0) p[k] += 0.5 * step(grids[k]);
        if (index[k] + 1 == grids[k].count) p[k] -= 0.5 * step(grids[k]);
      }
    }
    out.push_back(std::move(p));
    for (std::size_t k = dim; k-- > 0;) {
      if (++index[k] < grids[k].count) break;
      index[k] = 0;
    }
  }
  return out;
}

SampleWriter::SampleWriter(std::ostream& out, Format format) : out_(out), format_(format) {
  if (format_ == Format::csv)
    out_ << kSampleHeader << '\n';
  else
    out_ << "[";
}

void SampleWriter::write(std::span<const TriangleSample> samples) {
  for (const TriangleSample& s : samples) {
    const double row[12] = {s.A.x,          s.A.y,          s.B.x,          s.B.y,
                            s.C.x,          s.C.y,          s.triangle.a(), s.triangle.b(),
                            s.triangle.c(), s.angles.alpha(), s.angles.beta(), s.angles.gamma()};
    if (format_ == Format::csv) {
      out_ << to_string(s.family);
      for (double v : row) out_ << ',' << format_number(v);
      out_ << '\n';
    } else {
      static constexpr const char* keys[12] = {"ax", "ay", "bx", "by", "cx", "cy",
                                               "a",  "b",  "c",  "alpha", "beta", "gamma"};
      out_ << (first_ ? "\n" : ",\n") << "{\"family\":\"" << to_string(s.family) << '"';
      for (int k = 0; k < 12; ++k) out_ << ",\"" << keys[k] << "\":" << format_number(row[k]);
      out_ << '}';
    }
    first_ = false;
  }
}

void SampleWriter::finish() {
  if (finished_) return;
  finished_ = true;
  if (format_ == Format::json) out_ << (first_ ? "]\n" : "\n]\n");
}

std::string pdf_table(DensityKind kind, const std::vector<std::vector<double>>& points, Format format, double tol) {
  static constexpr const char* coords[3] = {"x", "y", "z"};
  const std::size_t dim = static_cast<std::size_t>(support(kind).dimension);
  std::ostringstream out;
  json rows = json::array();
  if (format == Format::csv) {
    for (std::size_t k = 0; k < dim; ++k) out << coords[k] << ',';
    out << "pdf\n";
  }
  for (const auto& p : points) {
    const DensityValue v = evaluate(kind, p, tol);
    const double value = v.singular ? kInf : v.value;
    if (format == Format::csv) {
      for (double x : p) out << format_number(x) << ',';
      out << format_number(value) << '\n';
    } else {
      json row;
      for (std::size_t k = 0; k < dim; ++k) row[coords[k]] = p[k];
      row["pdf"] = number_or_tag(value);
      rows.push_back(std::move(row));
    }
  }
  if (format == Format::json) {
    json doc;
    doc["kind"] = to_string(kind);
    doc["rows"] = std::move(rows);
    out << doc.dump(1) << '\n';
  }
  return out.str();
}

namespace {

struct CellText {
  json closed, quadrature, quadrature_error, mc, mc_se;
  std::string expression;
  bool pass;
};

CellText cell_text(const MomentReport& r) {
  CellText c;
  c.expression = r.closed.expression;
  c.pass = r.pass;
  const json dash = "-";
  switch (r.closed.kind) {
    case ClosedForm::Kind::infinite:
      // a diverging moment is never shown as a number
      c.closed = c.quadrature = c.mc = "inf";
      c.quadrature_error = c.mc_se = dash;
      return c;
    case ClosedForm::Kind::value: c.closed = r.closed.value; break;
    case ClosedForm::Kind::unavailable:
      c.closed = r.closed.reference ? json(*r.closed.reference) : dash;
      break;
  }
  c.quadrature = r.quadrature ? json(r.quadrature->value) : dash;
  c.quadrature_error = r.quadrature ? json(r.quadrature->error) : dash;
  c.mc = r.monte_carlo ? json(r.monte_carlo->value) : dash;
  c.mc_se = r.monte_carlo ? json(r.monte_carlo->standard_error) : dash;
  return c;
}

std::string csv_field(const json& j) {
  if (j.is_number()) return format_number(j.get<double>());
  return j.get<std::string>();
}

}  // namespace

std::string moment_table_text(Family family, const std::vector<MomentReport>& reports, Format format) {
  if (reports.size() % 2 != 0) throw std::invalid_argument("moment_table_text: cells come in mean/mean-square pairs");
  std::ostringstream out;
  json rows = json::array();
  if (format == Format::csv) {
    out << "family,quantity";
    for (const char* s : {"mean", "mean_square"})
      for (const char* f : {"closed", "expression", "quadrature", "quadrature_error", "mc", "mc_se", "verdict"})
        out << ',' << s << '_' << f;
    out << '\n';
  }
  for (std::size_t k = 0; k < reports.size(); k += 2) {
    const CellText cells[2] = {cell_text(reports[k]), cell_text(reports[k + 1])};
    const std::string quantity(to_string(reports[k].target.quantity));
    if (format == Format::csv) {
      out << to_string(family) << ',' << quantity;
      for (const CellText& c : cells)
        out << ',' << csv_field(c.closed) << ',' << c.expression << ',' << csv_field(c.quadrature) << ','
            << csv_field(c.quadrature_error) << ',' << csv_field(c.mc) << ',' << csv_field(c.mc_se) << ','
            << (c.pass ? "pass" : "fail");
      out << '\n';
    } else {
      json row;
      row["quantity"] = quantity;
      const char* names[2] = {"mean", "mean_square"};
      for (int s = 0; s < 2; ++s) {
        const CellText& c = cells[s];
        row[names[s]] = {{"closed", c.closed},         {"expression", c.expression}, {"quadrature", c.quadrature},
                         {"quadrature_error", c.quadrature_error}, {"mc", c.mc}, {"mc_se", c.mc_se},
                         {"pass", c.pass}};
      }
      rows.push_back(std::move(row));
    }
  }
  if (format == Format::json) {
    json doc;
    doc["family"] = to_string(family);
    doc["rows"] = std::move(rows);
    out << doc.dump(1) << '\n';
  }
  return out.str();
}

std::string reference_tables_text(Format format) {
  std::ostringstream out;
  json tables = json::array();
  if (format == Format::csv) out << "family,quantity,mean,mean_expression,mean_square,mean_square_expression\n";
  for (Family family : {Family::pinned, Family::staked, Family::anchored}) {
    const std::vector<MomentTarget> targets = table_targets(family);
    json rows = json::array();
    for (std::size_t k = 0; k < targets.size(); k += 2) {
      json cells[2];
      std::string expressions[2];
      for (int s = 0; s < 2; ++s) {
        const ClosedForm f = closed_form(targets[k + s]);
        expressions[s] = f.expression;
        switch (f.kind) {
          case ClosedForm::Kind::value: cells[s] = f.value; break;
          case ClosedForm::Kind::infinite: cells[s] = "inf"; break;
          case ClosedForm::Kind::unavailable: cells[s] = f.reference ? json(*f.reference) : json("-"); break;
        }
      }
      const std::string quantity(to_string(targets[k].quantity));
      if (format == Format::csv) {
        out << to_string(family) << ',' << quantity << ',' << csv_field(cells[0]) << ',' << expressions[0] << ','
            << csv_field(cells[1]) << ',' << expressions[1] << '\n';
      } else {
        rows.push_back({{"quantity", quantity},
                        {"mean", cells[0]},
                        {"mean_expression", expressions[0]},
                        {"mean_square", cells[1]},
                        {"mean_square_expression", expressions[1]}});
      }
    }
    if (format == Format::json) tables.push_back({{"family", to_string(family)}, {"rows", std::move(rows)}});
  }
  if (format == Format::json) out << tables.dump(1) << '\n';
  return out.str();
}

std::string verify_report_text(const VerifyReport& report, const VerifyConfig& config, Format format) {
  std::ostringstream out;
  if (format == Format::csv) {
    out << "check,family,expected,actual,tolerance,pass\n";
    for (const Check& c : report.checks) {
      const std::string expected = std::holds_alternative<double>(c.expected)
                                       ? format_number(std::get<double>(c.expected))
                                       : std::get<std::string>(c.expected);
      out << c.name << ',' << c.family << ',' << expected << ',' << format_number(c.actual) << ','
          << format_number(c.tolerance) << ',' << (c.pass ? "true" : "false") << '\n';
    }
    return out.str();
  }
  json checks = json::array();
  std::size_t failed = 0;
  for (const Check& c : report.checks) {
    json j;
    j["check"] = c.name;
    j["family"] = c.family;
    if (std::holds_alternative<double>(c.expected))
      j["expected"] = std::get<double>(c.expected);
    else
      j["expected"] = std::get<std::string>(c.expected);
    // non-finite only when the computation itself failed
    j["actual"] = std::isfinite(c.actual) ? json(c.actual) : json(nullptr);
    j["tolerance"] = c.tolerance;
    j["pass"] = c.pass;
    checks.push_back(std::move(j));
    if (!c.pass) ++failed;
  }
  json doc;
  doc["seed"] = config.seed;
  doc["workers"] = config.workers;
  doc["alpha"] = config.alpha;
  doc["tol"] = config.tol;
  doc["sizes"] = {{"moments", config.n_moments}, {"expected_ac", config.n_ac}, {"ks", config.n_ks}};
  doc["pass"] = failed == 0;
  doc["total"] = report.checks.size();
  doc["failed"] = failed;
  doc["checks"] = std::move(checks);
  out << doc.dump(1) << '\n';
  return out.str();
}

}  // namespace poistri
