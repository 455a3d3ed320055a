#ifndef POISTRI_RANDOM_HPP
#define POISTRI_RANDOM_HPP

#include <array>
#include <cstdint>

namespace poistri {

// Philox4x64-10 block function (Salmon et al., Random123).
std::array<std::uint64_t, 4> philox4x64(std::array<std::uint64_t, 4> counter,
                                        std::array<std::uint64_t, 2> key) noexcept;

// Counter-based stream keyed by (seed, stream_id). Counter word 0 is the block
// index and word 1 the substream index, so every (seed, stream_id) owns 2^64
// substreams of 2^66 outputs each. Not safe for concurrent use; give each
// worker its own stream or substream.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream_id, std::uint64_t substream = 0) noexcept;

  std::uint64_t seed() const noexcept { return key_[0]; }
  std::uint64_t stream_id() const noexcept { return key_[1]; }
  std::uint64_t substream_index() const noexcept { return substream_; }

  RandomStream substream(std::uint64_t index) const noexcept { return {key_[0], key_[1], index}; }

  std::uint64_t next_u64() noexcept;
  // [0, 1) with 53 random bits
  double uniform() noexcept;
  // (0, 1)
  double uniform_open() noexcept;
  double exponential(double rate) noexcept;
  // Inversion of the Poisson CDF; intended for mean <= ~500.
  std::uint64_t poisson(double mean) noexcept;

 private:
  std::array<std::uint64_t, 2> key_;
  std::uint64_t substream_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 4> buffer_{};
  int used_ = 4;
};

}  // namespace poistri

#endif  // POISTRI_RANDOM_HPP
