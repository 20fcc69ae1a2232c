#pragma once

#include "phg/torus.hpp"

#include <array>
#include <cstdint>

namespace phg {

/// Identifies one deterministic Gaussian stream.
struct NoiseKey {
  std::uint64_t seed = 0;
  std::uint32_t draw_index = 0;
};

/// The standard normal xi_z attached to frequency z. Pure function of
/// (seed, z, draw_index): the same z yields the same value for every lattice
/// size, which is what couples fields across L in convergence experiments.
double gaussian_coefficient(std::uint64_t seed, const FreqVector& z, std::uint32_t draw_index = 0);

/// Standard normal attached to a lattice site index; a separate stream,
/// independent of the frequency-indexed one.
double gaussian_site(std::uint64_t seed, std::uint64_t site, std::uint32_t draw_index = 0);

/// Quantile of the standard normal distribution (Wichura's AS 241, PPND16).
/// Absolute error below 1e-15 on (1e-300, 1 - 1e-16).
double inverse_normal_cdf(double p);

namespace detail {

/// Philox4x32-10 keyed counter-based generator (Salmon et al. constants).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key);

/// 64 uniform bits from (seed, input words): the words are absorbed into a
/// 128-bit counter by two splitmix64 lanes, then run through Philox with the
/// seed as key.
std::uint64_t keyed_bits(std::uint64_t seed, const std::uint64_t* words, int count);

/// Map 64 bits to a uniform double in the open interval (0,1).
double bits_to_unit(std::uint64_t bits);

/// Zig-zag encoding of a signed integer.
std::uint64_t zigzag(std::int64_t v);

}  // namespace detail

}  // namespace phg
