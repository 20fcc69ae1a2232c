#include "phg/noise.hpp"

#include <cmath>
#include <stdexcept>

namespace phg {

namespace detail {

std::uint64_t zigzag(std::int64_t v) {
  return (static_cast<std::uint64_t>(v) << 1) ^ static_cast<std::uint64_t>(v >> 63);
}

namespace {

std::uint64_t splitmix_step(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t absorb(std::uint64_t state, const std::uint64_t* words, int count) {
  for (int i = 0; i < count; ++i)
    state = splitmix_step(state ^ (words[i] + kGolden * static_cast<std::uint64_t>(i + 1)));
  return state;
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key) {
  constexpr std::uint32_t kM0 = 0xD2511F53u, kM1 = 0xCD9E8D57u;
  constexpr std::uint32_t kW0 = 0x9E3779B9u, kW1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * ctr[2];
    const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
    const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kW0;
    key[1] += kW1;
  }
  return ctr;
}

std::uint64_t keyed_bits(std::uint64_t seed, const std::uint64_t* words, int count) {
  const std::uint64_t lane0 = absorb(0x243F6A8885A308D3ULL, words, count);
  const std::uint64_t lane1 = absorb(0x452821E638D01377ULL, words, count);
  const std::array<std::uint32_t, 4> ctr = {
      static_cast<std::uint32_t>(lane0), static_cast<std::uint32_t>(lane0 >> 32),
      static_cast<std::uint32_t>(lane1), static_cast<std::uint32_t>(lane1 >> 32)};
  const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed),
                                            static_cast<std::uint32_t>(seed >> 32)};
  const auto out = philox4x32(ctr, key);
  return static_cast<std::uint64_t>(out[0]) | (static_cast<std::uint64_t>(out[1]) << 32);
}

double bits_to_unit(std::uint64_t bits) {
  // 52 significant bits; both endpoints land on representable values
  // strictly inside (0,1): [2^-53, 1 - 2^-53]
  return static_cast<double>(bits >> 12) * 0x1.0p-52 + 0x1.0p-53;
}

}  // namespace detail

double inverse_normal_cdf(double p) {
  // Wichura (1988), algorithm AS 241, routine PPND16.
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("inverse_normal_cdf: p must be in (0,1)");
  const double q = p - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    const double num =
        (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
              6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
            1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
          1.3314166789178437745e2) * r + 3.3871328727963666080e0);
    const double den =
        (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
              3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
            5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
          4.2313330701600911252e1) * r + 1.0);
    return q * num / den;
  }
  double r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double val;
  if (r <= 5.0) {
    r -= 1.6;
    const double num =
        (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
              2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
            3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
          4.63033784615654529590e0) * r + 1.42343711074968357734e0);
    const double den =
        (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
              1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
            6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
          2.05319162663775882187e0) * r + 1.0);
    val = num / den;
  } else {
    r -= 5.0;
    const double num =
        (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
              1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
            2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
          5.46378491116411436990e0) * r + 6.65790464350110377720e0);
    const double den =
        (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
              1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
            1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
          5.99832206555887937690e-1) * r + 1.0);
    val = num / den;
  }
  return q < 0.0 ? -val : val;
}

namespace {

// stream domains keep frequency-indexed and site-indexed draws disjoint
constexpr std::uint64_t kDomainFrequency = 0;
constexpr std::uint64_t kDomainSite = 1;

double normal_from_words(std::uint64_t seed, const std::uint64_t* words, int count) {
  return inverse_normal_cdf(detail::bits_to_unit(detail::keyed_bits(seed, words, count)));
}

}  // namespace

double gaussian_coefficient(std::uint64_t seed, const FreqVector& z, std::uint32_t draw_index) {
  const int n = static_cast<int>(z.size());
  std::uint64_t words[2 + 16];
  if (n > 16) throw std::invalid_argument("gaussian_coefficient: dimension too large");
  words[0] = kDomainFrequency | (static_cast<std::uint64_t>(draw_index) << 8);
  words[1] = static_cast<std::uint64_t>(n);
  for (int k = 0; k < n; ++k) words[2 + k] = detail::zigzag(z[k]);
  return normal_from_words(seed, words, 2 + n);
}

double gaussian_site(std::uint64_t seed, std::uint64_t site, std::uint32_t draw_index) {
  const std::uint64_t words[2] = {kDomainSite | (static_cast<std::uint64_t>(draw_index) << 8),
                                  site};
  return normal_from_words(seed, words, 2);
}

}  // namespace phg
