#ifndef POISTRI_PLOT_HPP
#define POISTRI_PLOT_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "poistri/density.hpp"

namespace poistri {

struct PlotSpec {
  DensityKind kind = DensityKind::pinned_b;
  std::size_t n = 100000;
  // 0 picks the Freedman-Diaconis count (at least 20).
  int bins = 0;
  // Default range: the support, cut at the 99.5% quantile when unbounded.
  std::optional<double> x_min;
  std::optional<double> x_max;
  int width = 800;
  int height = 500;
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
  unsigned workers = 1;
};

inline constexpr int kCurvePoints = 512;

struct PlotData {
  std::string title;
  double x_min = 0.0;
  double x_max = 1.0;
  // Catalog mass inside [x_min, x_max].
  double coverage = 0.0;
  std::vector<double> edges;    // bins + 1 edges
  std::vector<double> heights;  // count / (n width): same scale as the density
  std::vector<double> curve_x;
  std::vector<double> curve_y;  // +inf at singular points
  std::size_t n = 0;
};

// Draws the sample and evaluates the density. Joint kinds plot their first
// coordinate against its marginal. Throws std::invalid_argument for n = 0,
// bins in 1..4, an empty range, or a range holding under 99.5% of the mass.
PlotData prepare_plot(const PlotSpec& spec);

// Standalone SVG 1.1: a blue histogram polygon, one red density path, axes with tick labels.
std::string render_svg(const PlotData& data, int width = 800, int height = 500);

// Freedman-Diaconis bin count over [lo, hi] for sorted values, floored at 20.
int freedman_diaconis_bins(const std::vector<double>& sorted, double lo, double hi);

}  // namespace poistri

#endif  // POISTRI_PLOT_HPP
