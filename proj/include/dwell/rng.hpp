#pragma once

// Counter-based random numbers: every draw is a pure function of
// (seed, stream, hi, lo), so Monte Carlo results are bit-identical for any
// particle ordering, chunking or thread count.

#include <cmath>
#include <cstdint>

namespace dwell::rng {

inline constexpr std::uint64_t golden_gamma = 0x9E3779B97F4A7C15ull;

// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ull;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBull;
  x ^= x >> 31;
  return x;
}

constexpr std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t stream,
                                     std::uint64_t hi, std::uint64_t lo) {
  std::uint64_t h = seed;
  h = mix64(h + golden_gamma * (stream + 1));
  h = mix64(h + golden_gamma * (hi + 1));
  h = mix64(h + golden_gamma * (lo + 1));
  return h;
}

// Uniform on [0, 1), 53-bit resolution.
constexpr double to_unit(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Uniform on the open interval (0, 1); safe under log().
constexpr double to_unit_open(std::uint64_t bits) {
  return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

inline double uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t hi,
                      std::uint64_t lo) {
  return to_unit(counter_hash(seed, stream, hi, lo));
}

// Exponential waiting time with the given rate, strictly positive.
inline double exponential(std::uint64_t seed, std::uint64_t stream,
                          std::uint64_t hi, std::uint64_t lo, double rate) {
  return -std::log(to_unit_open(counter_hash(seed, stream, hi, lo))) / rate;
}

inline bool bernoulli(std::uint64_t seed, std::uint64_t stream, std::uint64_t hi,
                      std::uint64_t lo, double p) {
  return uniform(seed, stream, hi, lo) < p;
}

// Stream tags. Event timing is global per run; outcomes are per particle.
inline constexpr std::uint64_t stream_timing = 0;
inline constexpr std::uint64_t stream_outcome = 1;

}  // namespace dwell::rng
