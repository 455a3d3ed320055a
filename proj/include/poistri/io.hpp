#ifndef POISTRI_IO_HPP
#define POISTRI_IO_HPP

#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "poistri/density.hpp"
#include "poistri/moments.hpp"
#include "poistri/sampler.hpp"
#include "poistri/verify.hpp"

namespace poistri {

enum class Format { csv, json };

std::optional<Format> parse_format(std::string_view name) noexcept;

// 17 significant digits; "inf", "-inf" and "nan" for non-finite values.
std::string format_number(double v);

// Number with an optional multiple of pi: "1.5", "pi", "-pi/2", "3pi/4", "2*pi".
// Throws std::invalid_argument on anything else.
double parse_number(std::string_view text);

// start:stop:count, evenly spaced with both ends included; count 0 gives no points.
struct GridSpec {
  double start = 0.0;
  double stop = 0.0;
  std::size_t count = 0;
};
GridSpec parse_grid(std::string_view text);

// Cartesian product of one grid per coordinate, first coordinate slowest.
// An end of a grid where the density is singular is pulled half a step inward.
std::vector<std::vector<double>> grid_points(DensityKind kind, const std::vector<GridSpec>& grids);

// Streams samples in the sample-dump schema.
class SampleWriter {
 public:
  SampleWriter(std::ostream& out, Format format);
  void write(std::span<const TriangleSample> samples);
  // Closes the JSON array; a no-op for CSV.
  void finish();

 private:
  std::ostream& out_;
  Format format_;
  bool first_ = true;
  bool finished_ = false;
};

inline constexpr std::string_view kSampleHeader = "family,ax,ay,bx,by,cx,cy,a,b,c,alpha,beta,gamma";

// Density values at the given points; singular points print as "inf".
std::string pdf_table(DensityKind kind, const std::vector<std::vector<double>>& points, Format format,
                      double tol = 1e-10);

// One row per table row (quantity), mean and mean-square cells side by side.
std::string moment_table_text(Family family, const std::vector<MomentReport>& reports, Format format);

// Reference moment tables for pinned, staked and anchored: closed forms and decimals, no computation.
std::string reference_tables_text(Format format);

std::string verify_report_text(const VerifyReport& report, const VerifyConfig& config, Format format);

}  // namespace poistri

#endif  // POISTRI_IO_HPP
