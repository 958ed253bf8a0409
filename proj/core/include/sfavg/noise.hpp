#pragma once

#include <array>
#include <cstdint>

namespace sfavg {

/// Identifies one deterministic Gaussian stream. Identical (seed, sample_index)
/// reproduce the identical trajectory bit-for-bit on one platform.
struct NoisePlan {
  std::uint64_t seed = 0;
  std::uint64_t sample_index = 0;

  NoisePlan with_sample(std::uint64_t i) const { return NoisePlan{seed, i}; }
};

std::uint64_t splitmix64(std::uint64_t z);

/// Derive an independent sub-seed for a named purpose (tag) under one master seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag);

/// Philox 4x32-10 counter-based generator (Salmon et al., SC 2011).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key);

/// Counter-keyed standard normal draws: one N(0,1) value per (event, mode) pair,
/// independent across pairs and across (seed, sample_index). `event` is the
/// global fast-substep index of the trajectory; modes are 1-indexed.
class GaussianStream {
 public:
  explicit GaussianStream(const NoisePlan& plan);
  double operator()(std::uint64_t event, std::uint32_t mode) const;

 private:
  std::uint32_t k0_, k1_;
};

}  // namespace sfavg
