#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "minimax/errors.hpp"

namespace minimax {

// Philox4x32-10 keyed counter permutation (constants from the published
// algorithm). Chosen over the standard-library engines because the contract
// here is a counter-based stream: same (seed, stream_id, counter) gives the
// same block on every platform, and distinct stream_ids are independent
// without any shared state.
inline std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                                  std::array<std::uint32_t, 2> key) {
  constexpr std::uint32_t kMul0 = 0xD2511F53u;
  constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    const std::uint64_t p0 = std::uint64_t(kMul0) * ctr[0];
    const std::uint64_t p1 = std::uint64_t(kMul1) * ctr[2];
    const std::uint32_t hi0 = std::uint32_t(p0 >> 32);
    const std::uint32_t lo0 = std::uint32_t(p0);
    const std::uint32_t hi1 = std::uint32_t(p1 >> 32);
    const std::uint32_t lo1 = std::uint32_t(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

// Value-type stream. Copying the struct snapshots the stream; replaying from
// the same (seed, stream_id, counter) reproduces the draw sequence exactly.
// Every primitive draw below consumes exactly one counter tick.
struct RngStream {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
  std::uint64_t counter = 0;

  // one 128-bit block; the stream id occupies the high counter words
  std::array<std::uint32_t, 4> next_block() {
    const std::array<std::uint32_t, 4> c = {
        std::uint32_t(counter), std::uint32_t(counter >> 32),
        std::uint32_t(stream_id), std::uint32_t(stream_id >> 32)};
    const std::array<std::uint32_t, 2> k = {std::uint32_t(seed),
                                            std::uint32_t(seed >> 32)};
    ++counter;
    return philox4x32_10(c, k);
  }

  std::uint64_t next_u64() {
    const auto b = next_block();
    return (std::uint64_t(b[1]) << 32) | b[0];
  }

  // uniform on [0, 1), 53 random bits
  double uniform01() { return double(next_u64() >> 11) * 0x1.0p-53; }

  // Box-Muller pair from one block. u1 is shifted into (0, 1] so the log is
  // finite; trig/log come from libm, so cross-libm bit-identity is limited to
  // the integer stream (documented in the README).
  void normal_pair(double& z0, double& z1) {
    const auto b = next_block();
    const std::uint64_t w0 = (std::uint64_t(b[1]) << 32) | b[0];
    const std::uint64_t w1 = (std::uint64_t(b[3]) << 32) | b[2];
    const double u1 = double((w0 >> 11) + 1) * 0x1.0p-53;  // (0, 1]
    const double u2 = double(w1 >> 11) * 0x1.0p-53;        // [0, 1)
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    z0 = r * std::cos(a);
    z1 = r * std::sin(a);
  }

  double normal() {
    double z0, z1;
    normal_pair(z0, z1);
    return z0;
  }

  // uniform index in [0, n); modulo bias is ~n/2^64, negligible at desk scale
  std::uint64_t next_index(std::uint64_t n) {
    MM_CHECK(n > 0, "next_index: empty range");
    return next_u64() % n;
  }
};

// One batch of q i.i.d. samples. Finite-sum problems fill `indices`,
// expectation problems fill `draws`; the per-sample layout is owned by the
// problem that draws the batch.
struct MiniBatch {
  std::size_t size = 0;
  std::vector<std::uint64_t> indices;
  std::vector<double> draws;
};

// n standard normals appended pairwise; odd n discards the trailing half pair
// so the counter advance is ceil(n/2) regardless of prior state
inline void draw_normals(RngStream& rng, std::size_t n, std::vector<double>& out) {
  out.resize(n);
  std::size_t i = 0;
  while (i + 1 < n) {
    rng.normal_pair(out[i], out[i + 1]);
    i += 2;
  }
  if (i < n) {
    double z0, z1;
    rng.normal_pair(z0, z1);
    out[i] = z0;
  }
}

// q standard-normal draws; the generic batch used by tests and by problems
// whose per-sample noise is a single scalar
inline MiniBatch draw_batch(RngStream& rng, std::size_t q) {
  MM_CHECK(q >= 1, "draw_batch: q must be >= 1");
  MiniBatch b;
  b.size = q;
  draw_normals(rng, q, b.draws);
  return b;
}

}  // namespace minimax
