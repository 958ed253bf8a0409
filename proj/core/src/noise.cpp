#include "sfavg/noise.hpp"

#include <cmath>
#include <numbers>

namespace sfavg {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
  return splitmix64(splitmix64(seed) ^ tag);
}

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = std::uint64_t(a) * std::uint64_t(b);
  hi = std::uint32_t(p >> 32);
  lo = std::uint32_t(p);
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> c,
                                        std::array<std::uint32_t, 2> k) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kPhiloxM0, c[0], hi0, lo0);
    mulhilo(kPhiloxM1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    k[0] += kPhiloxW0;
    k[1] += kPhiloxW1;
  }
  return c;
}

GaussianStream::GaussianStream(const NoisePlan& plan) {
  const std::uint64_t skey = splitmix64(splitmix64(plan.seed) ^ plan.sample_index);
  k0_ = std::uint32_t(skey);
  k1_ = std::uint32_t(skey >> 32);
}

double GaussianStream::operator()(std::uint64_t event, std::uint32_t mode) const {
  const std::array<std::uint32_t, 4> ctr = {mode, std::uint32_t(event),
                                            std::uint32_t(event >> 32), 0u};
  const auto r = philox4x32(ctr, {k0_, k1_});
  // Box-Muller; u1 in (0,1] keeps the log finite.
  const double u1 = (double(r[0]) + 1.0) * 0x1p-32;
  const double u2 = double(r[1]) * 0x1p-32;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace sfavg
