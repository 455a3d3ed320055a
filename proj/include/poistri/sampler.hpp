#ifndef POISTRI_SAMPLER_HPP
#define POISTRI_SAMPLER_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "poistri/geom.hpp"
#include "poistri/random.hpp"

namespace poistri {

enum class Family { pinned, staked, anchored, uniform_t };

std::string_view to_string(Family family) noexcept;
std::optional<Family> parse_family(std::string_view name) noexcept;

struct PlanarPoint {
  double x = 0.0;
  double y = 0.0;
};

// One realised triangle. Sides and angles follow the usual labelling: a = |BC|
// is opposite the angle alpha at A, b = |CA| opposite beta at B, c = |AB|
// opposite gamma at C.
struct TriangleSample {
  Family family;
  PlanarPoint A;
  PlanarPoint B;
  PlanarPoint C;
  Triangle triangle;
  TriangleAngles angles;
};

// Counts draws thrown away because they landed on a probability-zero degeneracy.
struct SamplerDiagnostics {
  std::uint64_t resamples = 0;
};

// Builds the sample (sides, angles) from vertices. Throws DomainError if degenerate.
TriangleSample triangle_from_vertices(Family family, PlanarPoint A, PlanarPoint B, PlanarPoint C);

// Deterministic constructions behind the samplers.
// Pinned: B at squared radius r1 and polar angle theta1, C at squared radius r1 + r2 and angle theta2.
TriangleSample pinned_from_polar(double r1, double r2, double theta1, double theta2);
TriangleSample staked_from_point(PlanarPoint c);
TriangleSample anchored_from_point(PlanarPoint c);
// Uniform triangle from the two Uniform[0, pi] variables (phi, psi) via the folding rule.
TriangleSample uniform_t_from_uniforms(double phi, double psi);
// Apex of the triangle on base A=(0,0), B=(1,0) with base angles alpha, beta.
PlanarPoint apex_from_base_angles(double alpha, double beta);

TriangleSample sample_pinned(RandomStream& rng, SamplerDiagnostics* diagnostics = nullptr);
TriangleSample sample_staked(RandomStream& rng, SamplerDiagnostics* diagnostics = nullptr);
TriangleSample sample_anchored(RandomStream& rng, SamplerDiagnostics* diagnostics = nullptr);
TriangleSample sample_uniform_t(RandomStream& rng, SamplerDiagnostics* diagnostics = nullptr);

// Literal simulation of a unit-intensity Poisson process on a growing disk
// (radius 2, doubling) until the second-nearest point lies inside half the
// radius; returns the pinned triangle on the two nearest points.
TriangleSample sample_pinned_oracle(RandomStream& rng, SamplerDiagnostics* diagnostics = nullptr);

TriangleSample sample(Family family, RandomStream& rng, SamplerDiagnostics* diagnostics = nullptr);

using SamplerFn = TriangleSample (*)(RandomStream&, SamplerDiagnostics*);

SamplerFn sampler_for(Family family) noexcept;

// Draws n samples in chunks of kChunkSize; chunk i uses base.substream(i), so the
// result depends only on (base, n), never on the worker count.
inline constexpr std::size_t kChunkSize = 4096;

std::vector<TriangleSample> sample_many(SamplerFn sampler, std::size_t n, const RandomStream& base,
                                        unsigned workers = 1, SamplerDiagnostics* diagnostics = nullptr);
std::vector<TriangleSample> sample_many(Family family, std::size_t n, const RandomStream& base,
                                        unsigned workers = 1, SamplerDiagnostics* diagnostics = nullptr);

// The draws of sample_many delivered in order, `block_chunks` chunks at a time,
// so that long runs never hold more than one block in memory.
void sample_blocks(Family family, std::size_t n, const RandomStream& base, unsigned workers,
                   const std::function<void(std::span<const TriangleSample>)>& sink, std::size_t block_chunks = 64,
                   SamplerDiagnostics* diagnostics = nullptr);

}  // namespace poistri

#endif  // POISTRI_SAMPLER_HPP
