#include "poistri/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "parallel.hpp"
#include "poistri/errors.hpp"
#include "poistri/numerics.hpp"

namespace poistri {

std::string_view to_string(Family family) noexcept {
  switch (family) {
    case Family::pinned: return "pinned";
    case Family::staked: return "staked";
    case Family::anchored: return "anchored";
    case Family::uniform_t: return "uniformT";
  }
  return "unknown";
}

std::optional<Family> parse_family(std::string_view name) noexcept {
  for (Family f : {Family::pinned, Family::staked, Family::anchored, Family::uniform_t})
    if (name == to_string(f)) return f;
  if (name == "uniform_t" || name == "uniform") return Family::uniform_t;
  return std::nullopt;
}

namespace {

double distance(PlanarPoint p, PlanarPoint q) { return std::hypot(p.x - q.x, p.y - q.y); }

// Interior angle at p of the triangle (p, q, r).
double vertex_angle(PlanarPoint p, PlanarPoint q, PlanarPoint r) {
  const double ux = q.x - p.x, uy = q.y - p.y;
  const double vx = r.x - p.x, vy = r.y - p.y;
  return std::atan2(std::abs(ux * vy - uy * vx), ux * vx + uy * vy);
}

constexpr double kTwoPi = 2.0 * kPi;

}  // namespace

TriangleSample triangle_from_vertices(Family family, PlanarPoint A, PlanarPoint B, PlanarPoint C) {
  Triangle t(distance(B, C), distance(C, A), distance(A, B));
  TriangleAngles angles(vertex_angle(A, B, C), vertex_angle(B, C, A), vertex_angle(C, A, B));
  return TriangleSample{family, A, B, C, t, angles};
}

TriangleSample pinned_from_polar(double r1, double r2, double theta1, double theta2) {
  if (!(r1 > 0.0 && r2 > 0.0)) throw DomainError("pinned_from_polar: squared radii must be positive");
  const double near = std::sqrt(r1);
  const double far = std::sqrt(r1 + r2);
  const PlanarPoint B{near * std::cos(theta1), near * std::sin(theta1)};
  const PlanarPoint C{far * std::cos(theta2), far * std::sin(theta2)};
  TriangleSample s = triangle_from_vertices(Family::pinned, {0.0, 0.0}, B, C);
  if (!(s.triangle.c() < s.triangle.b() && s.triangle.a() < 2.0 * s.triangle.b()))
    throw DomainError("pinned_from_polar: rounding broke c < b < a/2 ordering");
  return s;
}

TriangleSample staked_from_point(PlanarPoint c) {
  if (!(c.y > 0.0)) throw DomainError("staked_from_point: apex must lie above the base");
  return triangle_from_vertices(Family::staked, {0.0, 0.0}, {1.0, 0.0}, c);
}

TriangleSample anchored_from_point(PlanarPoint c) {
  if (!(c.y > 0.0)) throw DomainError("anchored_from_point: apex must lie above the base");
  return triangle_from_vertices(Family::anchored, {-0.5, 0.0}, {0.5, 0.0}, c);
}

PlanarPoint apex_from_base_angles(double alpha, double beta) {
  // L_A: y = x tan(alpha), L_B: y = (1 - x) tan(beta), written with sines so
  // that a right angle at either base vertex needs no special case.
  const double s = std::sin(alpha + beta);
  return {std::sin(beta) * std::cos(alpha) / s, std::sin(alpha) * std::sin(beta) / s};
}

TriangleSample uniform_t_from_uniforms(double phi, double psi) {
  if (!(phi > 0.0 && phi < kPi && psi > 0.0 && psi < kPi))
    throw DomainError("uniform_t_from_uniforms: phi and psi must lie in (0, pi)");
  double alpha = phi, beta = psi;
  if (phi + psi > kPi) {
    alpha = kPi - psi;
    beta = kPi - phi;
  } else if (!(phi + psi < kPi)) {
    throw DomainError("uniform_t_from_uniforms: phi + psi == pi");
  }
  return triangle_from_vertices(Family::uniform_t, {0.0, 0.0}, {1.0, 0.0}, apex_from_base_angles(alpha, beta));
}

namespace {

template <class Draw>
TriangleSample retry(Draw&& draw, SamplerDiagnostics* diagnostics) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    try {
      return draw();
    } catch (const DomainError&) {
      if (diagnostics) ++diagnostics->resamples;
    }
  }
  throw std::logic_error("sampler: 1000 consecutive degenerate draws");
}

// Squared radius Exponential(pi), uniform direction, folded into v > 0.
PlanarPoint nearest_neighbour_apex(RandomStream& rng) {
  const double radius = std::sqrt(rng.exponential(kPi));
  const double theta = kTwoPi * rng.uniform();
  return {radius * std::cos(theta), std::abs(radius * std::sin(theta))};
}

}  // namespace

TriangleSample sample_pinned(RandomStream& rng, SamplerDiagnostics* diagnostics) {
  return retry(
      [&] {
        const double r1 = rng.exponential(kPi);
        const double r2 = rng.exponential(kPi);
        const double theta1 = kTwoPi * rng.uniform();
        const double theta2 = kTwoPi * rng.uniform();
        return pinned_from_polar(r1, r2, theta1, theta2);
      },
      diagnostics);
}

TriangleSample sample_staked(RandomStream& rng, SamplerDiagnostics* diagnostics) {
  return retry([&] { return staked_from_point(nearest_neighbour_apex(rng)); }, diagnostics);
}

TriangleSample sample_anchored(RandomStream& rng, SamplerDiagnostics* diagnostics) {
  return retry([&] { return anchored_from_point(nearest_neighbour_apex(rng)); }, diagnostics);
}

TriangleSample sample_uniform_t(RandomStream& rng, SamplerDiagnostics* diagnostics) {
  return retry(
      [&] {
        const double phi = kPi * rng.uniform();
        const double psi = kPi * rng.uniform();
        return uniform_t_from_uniforms(phi, psi);
      },
      diagnostics);
}

TriangleSample sample_pinned_oracle(RandomStream& rng, SamplerDiagnostics* diagnostics) {
  struct Point {
    double r2;
    double theta;
  };
  return retry(
      [&] {
        std::vector<Point> points;
        double inner = 0.0;
        for (double radius = 2.0;; radius *= 2.0) {
          if (radius > 10.0) throw std::logic_error("sample_pinned_oracle: disk radius cap exceeded");
          // Poisson process on the annulus inner < r < radius.
          const double lo = inner * inner, hi = radius * radius;
          const std::uint64_t count = rng.poisson(kPi * (hi - lo));
          for (std::uint64_t i = 0; i < count; ++i) {
            const double r2 = lo + (hi - lo) * rng.uniform();
            points.push_back({r2, kTwoPi * rng.uniform()});
          }
          inner = radius;
          if (points.size() < 2) continue;
          // stable: an exact distance tie keeps the lower index first
          std::stable_sort(points.begin(), points.end(),
                           [](const Point& p, const Point& q) { return p.r2 < q.r2; });
          if (std::sqrt(points[1].r2) < 0.5 * radius) break;
        }
        const Point& b = points[0];
        const Point& c = points[1];
        const double nb = std::sqrt(b.r2), nc = std::sqrt(c.r2);
        TriangleSample s = triangle_from_vertices(
            Family::pinned, {0.0, 0.0}, {nb * std::cos(b.theta), nb * std::sin(b.theta)},
            {nc * std::cos(c.theta), nc * std::sin(c.theta)});
        if (!(s.triangle.c() < s.triangle.b())) throw DomainError("oracle: equidistant neighbours");
        return s;
      },
      diagnostics);
}

SamplerFn sampler_for(Family family) noexcept {
  switch (family) {
    case Family::pinned: return &sample_pinned;
    case Family::staked: return &sample_staked;
    case Family::anchored: return &sample_anchored;
    case Family::uniform_t: return &sample_uniform_t;
  }
  return &sample_pinned;
}

TriangleSample sample(Family family, RandomStream& rng, SamplerDiagnostics* diagnostics) {
  return sampler_for(family)(rng, diagnostics);
}

namespace {

// Chunks [first, last) of the chunked layout, concatenated in order.
std::vector<TriangleSample> draw_chunks(SamplerFn sampler, std::size_t n, const RandomStream& base, std::size_t first,
                                        std::size_t last, unsigned workers, SamplerDiagnostics* diagnostics) {
  const std::size_t count = last - first;
  std::vector<std::vector<TriangleSample>> parts(count);
  std::vector<SamplerDiagnostics> part_diagnostics(count);
  detail::parallel_for(count, workers, [&](std::size_t k) {
    const std::size_t i = first + k;
    RandomStream rng = base.substream(i);
    const std::size_t size = std::min(kChunkSize, n - i * kChunkSize);
    parts[k].reserve(size);
    for (std::size_t j = 0; j < size; ++j) parts[k].push_back(sampler(rng, &part_diagnostics[k]));
  });
  std::vector<TriangleSample> out;
  out.reserve(std::min(n - first * kChunkSize, count * kChunkSize));
  for (std::size_t k = 0; k < count; ++k) {
    out.insert(out.end(), parts[k].begin(), parts[k].end());
    if (diagnostics) diagnostics->resamples += part_diagnostics[k].resamples;
  }
  return out;
}

}  // namespace

std::vector<TriangleSample> sample_many(SamplerFn sampler, std::size_t n, const RandomStream& base,
                                        unsigned workers, SamplerDiagnostics* diagnostics) {
  const std::size_t chunks = (n + kChunkSize - 1) / kChunkSize;
  return draw_chunks(sampler, n, base, 0, chunks, workers, diagnostics);
}

std::vector<TriangleSample> sample_many(Family family, std::size_t n, const RandomStream& base,
                                        unsigned workers, SamplerDiagnostics* diagnostics) {
  return sample_many(sampler_for(family), n, base, workers, diagnostics);
}

void sample_blocks(Family family, std::size_t n, const RandomStream& base, unsigned workers,
                   const std::function<void(std::span<const TriangleSample>)>& sink, std::size_t block_chunks,
                   SamplerDiagnostics* diagnostics) {
  if (block_chunks == 0) throw std::invalid_argument("sample_blocks: block_chunks must be positive");
  const std::size_t chunks = (n + kChunkSize - 1) / kChunkSize;
  for (std::size_t first = 0; first < chunks; first += block_chunks) {
    const std::size_t last = std::min(chunks, first + block_chunks);
    const auto block = draw_chunks(sampler_for(family), n, base, first, last, workers, diagnostics);
    sink(block);
  }
}

}  // namespace poistri
