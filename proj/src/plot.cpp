#include "poistri/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "poistri/gof.hpp"
#include "poistri/numerics.hpp"
#include "poistri/sampler.hpp"

namespace poistri {

namespace {

constexpr int kMinBins = 20;
constexpr int kMaxBins = 400;
constexpr double kCoverage = 0.995;

double nice_step(double range, int target) {
  const double raw = range / target;
  const double magnitude = std::pow(10.0, std::floor(std::log10(raw)));
  const double r = raw / magnitude;
  return (r < 1.5 ? 1.0 : r < 3.0 ? 2.0 : r < 7.0 ? 5.0 : 10.0) * magnitude;
}

std::string fixed(double v, int digits = 2) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string tick_label(double v, double step) {
  if (std::abs(v) < 1e-9 * step) v = 0.0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

int freedman_diaconis_bins(const std::vector<double>& sorted, double lo, double hi) {
  const auto first = std::lower_bound(sorted.begin(), sorted.end(), lo);
  const auto last = std::upper_bound(sorted.begin(), sorted.end(), hi);
  const std::size_t m = static_cast<std::size_t>(last - first);
  if (m < 4 || !(hi > lo)) return kMinBins;
  auto quartile = [&](double q) { return *(first + static_cast<std::ptrdiff_t>(q * static_cast<double>(m - 1))); };
  const double iqr = quartile(0.75) - quartile(0.25);
  if (!(iqr > 0.0)) return kMinBins;
  const double width = 2.0 * iqr / std::cbrt(static_cast<double>(m));
  const double bins = std::ceil((hi - lo) / width);
  return static_cast<int>(std::clamp(bins, static_cast<double>(kMinBins), static_cast<double>(kMaxBins)));
}

PlotData prepare_plot(const PlotSpec& spec) {
  if (spec.n == 0) throw std::invalid_argument("plot: sample size must be at least 1");
  if (spec.bins != 0 && spec.bins < 5) throw std::invalid_argument("plot: bins must be at least 5");
  if (spec.workers < 1) throw std::invalid_argument("plot: workers must be at least 1");

  const SampledStatistic stat = statistic_for(spec.kind);
  const TabulatedCdf cdf(stat.law);
  PlotData d;
  d.n = spec.n;
  d.x_min = spec.x_min.value_or(stat.law.lower);
  d.x_max = spec.x_max.value_or(std::isfinite(stat.law.upper) ? stat.law.upper : cdf.quantile(kCoverage));
  if (!(std::isfinite(d.x_min) && std::isfinite(d.x_max) && d.x_max > d.x_min))
    throw std::invalid_argument("plot: x range must be finite with x_min < x_max");
  d.coverage = cdf.exact(d.x_max) - cdf.exact(d.x_min);
  if (d.coverage < kCoverage - 1e-9)
    throw std::invalid_argument("plot: x range holds " + std::to_string(d.coverage) +
                                " of the mass, at least 0.995 is required");
  d.title = std::string(to_string(spec.kind)) + ": " + stat.name + " (" + std::string(to_string(stat.family)) +
            "), n = " + std::to_string(spec.n);

  const auto draws = sample_many(stat.family, spec.n, RandomStream(spec.seed, spec.stream_id), spec.workers);
  std::vector<double> values;
  values.reserve(draws.size());
  for (const auto& t : draws) values.push_back(stat.value(t));
  std::sort(values.begin(), values.end());

  const int bins = spec.bins > 0 ? spec.bins : freedman_diaconis_bins(values, d.x_min, d.x_max);
  const double width = (d.x_max - d.x_min) / bins;
  d.edges.resize(static_cast<std::size_t>(bins) + 1);
  for (int i = 0; i <= bins; ++i) d.edges[static_cast<std::size_t>(i)] = d.x_min + width * i;
  d.edges.back() = d.x_max;
  std::vector<double> counts(static_cast<std::size_t>(bins), 0.0);
  for (double v : values) {
    if (v < d.x_min || v > d.x_max) continue;
    const int i = std::min(bins - 1, static_cast<int>((v - d.x_min) / width));
    counts[static_cast<std::size_t>(i)] += 1.0;
  }
  d.heights.resize(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) d.heights[i] = counts[i] / (static_cast<double>(spec.n) * width);

  const bool univariate = support(spec.kind).dimension == 1;
  d.curve_x.resize(kCurvePoints);
  d.curve_y.resize(kCurvePoints);
  for (int i = 0; i < kCurvePoints; ++i) {
    // midpoints: never on a support end
    const double x = d.x_min + (d.x_max - d.x_min) * (i + 0.5) / kCurvePoints;
    double y;
    if (univariate) {
      const double arg[1] = {x};
      const DensityValue v = evaluate(spec.kind, arg);
      y = v.singular ? kInf : v.value;
    } else {
      y = stat.law.pdf(x);
    }
    d.curve_x[static_cast<std::size_t>(i)] = x;
    d.curve_y[static_cast<std::size_t>(i)] = y;
  }
  return d;
}

std::string render_svg(const PlotData& d, int width, int height) {
  if (width < 200 || height < 150) throw std::invalid_argument("render_svg: canvas too small");
  if (d.edges.size() < 2 || d.heights.size() + 1 != d.edges.size())
    throw std::invalid_argument("render_svg: malformed histogram");
  const double left = 70.0, right = 20.0, top = 40.0, bottom = 50.0;
  const double plot_w = width - left - right, plot_h = height - top - bottom;

  double hist_max = 0.0;
  for (double h : d.heights) hist_max = std::max(hist_max, h);
  double curve_max = 0.0;
  for (double y : d.curve_y)
    if (std::isfinite(y)) curve_max = std::max(curve_max, y);
  // singular spikes are cut, not allowed to flatten the histogram
  double y_top = hist_max > 0.0 ? std::max(hist_max, std::min(curve_max, 1.5 * hist_max)) : curve_max;
  if (!(y_top > 0.0)) y_top = 1.0;
  y_top *= 1.05;

  auto px = [&](double x) { return left + (x - d.x_min) / (d.x_max - d.x_min) * plot_w; };
  auto py = [&](double y) { return top + plot_h * (1.0 - std::min(y, y_top) / y_top); };

  std::ostringstream s;
  s << "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"yes\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width << "px\" height=\"" << height
    << "px\" viewBox=\"0 0 " << width << ' ' << height << "\">\n"
    << "<title>" << d.title << "</title>\n"
    << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";

  s << "<g id=\"histogram\" class=\"histogram\">\n<polygon fill=\"blue\" fill-opacity=\"0.5\" stroke=\"blue\" "
       "stroke-width=\"0.5\" points=\"";
  s << fixed(px(d.edges.front())) << ',' << fixed(py(0.0));
  for (std::size_t i = 0; i < d.heights.size(); ++i) {
    s << ' ' << fixed(px(d.edges[i])) << ',' << fixed(py(d.heights[i]));
    s << ' ' << fixed(px(d.edges[i + 1])) << ',' << fixed(py(d.heights[i]));
  }
  s << ' ' << fixed(px(d.edges.back())) << ',' << fixed(py(0.0)) << "\"/>\n</g>\n";

  s << "<path id=\"density\" fill=\"none\" stroke=\"red\" stroke-width=\"1.5\" d=\"";
  for (std::size_t i = 0; i < d.curve_x.size(); ++i)
    s << (i == 0 ? "M" : " L") << fixed(px(d.curve_x[i])) << ',' << fixed(py(d.curve_y[i]));
  s << "\"/>\n";

  s << "<g id=\"axes\" stroke=\"black\" stroke-width=\"1\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s << "<line x1=\"" << fixed(left) << "\" y1=\"" << fixed(top + plot_h) << "\" x2=\"" << fixed(left + plot_w)
    << "\" y2=\"" << fixed(top + plot_h) << "\"/>\n";
  s << "<line x1=\"" << fixed(left) << "\" y1=\"" << fixed(top) << "\" x2=\"" << fixed(left) << "\" y2=\""
    << fixed(top + plot_h) << "\"/>\n";
  const double x_step = nice_step(d.x_max - d.x_min, 6);
  for (double x = std::ceil(d.x_min / x_step - 1e-9) * x_step; x <= d.x_max + 1e-9 * x_step; x += x_step) {
    const double X = px(x);
    s << "<line x1=\"" << fixed(X) << "\" y1=\"" << fixed(top + plot_h) << "\" x2=\"" << fixed(X) << "\" y2=\""
      << fixed(top + plot_h + 5) << "\"/>\n";
    s << "<text stroke=\"none\" x=\"" << fixed(X) << "\" y=\"" << fixed(top + plot_h + 18)
      << "\" text-anchor=\"middle\">" << tick_label(x, x_step) << "</text>\n";
  }
  const double y_step = nice_step(y_top, 5);
  for (double y = 0.0; y <= y_top + 1e-9 * y_step; y += y_step) {
    const double Y = py(y);
    s << "<line x1=\"" << fixed(left - 5) << "\" y1=\"" << fixed(Y) << "\" x2=\"" << fixed(left) << "\" y2=\""
      << fixed(Y) << "\"/>\n";
    s << "<text stroke=\"none\" x=\"" << fixed(left - 8) << "\" y=\"" << fixed(Y + 4) << "\" text-anchor=\"end\">"
      << tick_label(y, y_step) << "</text>\n";
  }
  s << "<text stroke=\"none\" x=\"" << fixed(left + plot_w / 2) << "\" y=\"" << fixed(top - 15)
    << "\" text-anchor=\"middle\" font-size=\"14\">" << d.title << "</text>\n";
  s << "</g>\n</svg>\n";
  return s.str();
}

}  // namespace poistri
