#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace empirica {

/// Philox4x32-10 block function (Salmon et al., SC'11). Pure; exposed for
/// known-answer tests.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t fnv1a64(std::string_view bytes);

/// Counter-based random stream. The 128-bit counter is split into a stream
/// word (high 64 bits, fixed per stream) and a position word (low 64 bits),
/// so two streams with different stream words never overlap.
///
/// Streams are cheap values; copying one duplicates its state.
class Stream {
 public:
  Stream(std::uint64_t key, std::uint64_t stream_word);

  /// Per-replication stream derived from (master seed, experiment id,
  /// replication index). Independent of scheduling order.
  static Stream derive(std::uint64_t master_seed, std::string_view experiment,
                       std::uint64_t replication);

  /// Disjoint child stream named by `tag` (e.g. "bridge", "poisson").
  Stream substream(std::string_view tag) const;

  std::uint64_t next_u64();
  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform();
  double exponential(double rate);
  double normal();

  std::uint64_t key() const { return key_; }
  std::uint64_t stream_word() const { return stream_word_; }

 private:
  void refill();

  std::uint64_t key_;
  std::uint64_t stream_word_;
  std::uint64_t position_ = 0;
  std::array<std::uint32_t, 4> block_{};
  int used_ = 4;
};

}  // namespace empirica
