#include "doctest.h"

#include "phg/noise.hpp"

#include <cmath>
#include <set>

using namespace phg;

TEST_SUITE("noise") {
  TEST_CASE("inverse normal cdf reference quantiles") {
    CHECK(inverse_normal_cdf(0.5) == 0.0);
    CHECK(inverse_normal_cdf(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
    CHECK(inverse_normal_cdf(0.025) == doctest::Approx(-1.9599639845400545).epsilon(1e-12));
    CHECK(inverse_normal_cdf(0.999) == doctest::Approx(3.090232306167813).epsilon(1e-12));
    CHECK(inverse_normal_cdf(1e-9) == doctest::Approx(-5.9978070150076865).epsilon(1e-12));
    CHECK(inverse_normal_cdf(1e-12) == doctest::Approx(-7.034483825301131).epsilon(1e-12));
    CHECK(inverse_normal_cdf(0.3) == doctest::Approx(-0.5244005127080409).epsilon(1e-12));
    CHECK_THROWS(inverse_normal_cdf(0.0));
    CHECK_THROWS(inverse_normal_cdf(1.0));
  }

  TEST_CASE("coefficient stream is a pure function") {
    FreqVector z(2);
    z << 3, -4;
    CHECK(gaussian_coefficient(42, z) == gaussian_coefficient(42, z));
    CHECK(gaussian_coefficient(42, z) != gaussian_coefficient(43, z));
    CHECK(gaussian_coefficient(42, z, 0) != gaussian_coefficient(42, z, 1));
    // dimension is part of the key: (3,-4) in 2d differs from (3,-4,0) in 3d
    FreqVector z3(3);
    z3 << 3, -4, 0;
    CHECK(gaussian_coefficient(42, z) != gaussian_coefficient(42, z3));
  }

  TEST_CASE("distinct seeds give distinct streams") {
    FreqVector z(1);
    bool all_equal = true;
    for (int i = 0; i < 100; ++i) {
      z[0] = i + 1;
      if (gaussian_coefficient(1, z) != gaussian_coefficient(2, z)) all_equal = false;
    }
    CHECK_FALSE(all_equal);
  }

  TEST_CASE("site stream is independent of the frequency stream") {
    FreqVector z(1);
    z << 5;
    CHECK(gaussian_site(7, 5) != gaussian_coefficient(7, z));
  }

  TEST_CASE("moments of the coefficient stream") {
    const int S = 100000;
    double sum = 0.0, sum2 = 0.0;
    FreqVector z(1);
    for (int i = 0; i < S; ++i) {
      z[0] = i + 1;
      const double x = gaussian_coefficient(7, z);
      sum += x;
      sum2 += x * x;
    }
    const double mean = sum / S;
    const double var = sum2 / S - mean * mean;
    CHECK(std::abs(mean) < 4.0 / std::sqrt(double(S)));
    CHECK(std::abs(var - 1.0) < 4.0 * std::sqrt(2.0 / double(S)));
  }

  TEST_CASE("philox avalanche on counter bits") {
    const std::array<std::uint32_t, 2> key = {1, 2};
    const auto a = detail::philox4x32({0, 0, 0, 0}, key);
    const auto b = detail::philox4x32({1, 0, 0, 0}, key);
    int diff_words = 0;
    for (int k = 0; k < 4; ++k)
      if (a[k] != b[k]) diff_words++;
    CHECK(diff_words == 4);
  }

  TEST_CASE("unit interval mapping stays strictly inside (0,1)") {
    CHECK(detail::bits_to_unit(0) > 0.0);
    CHECK(detail::bits_to_unit(~std::uint64_t{0}) < 1.0);
  }

  TEST_CASE("zigzag encoding") {
    CHECK(detail::zigzag(0) == 0);
    CHECK(detail::zigzag(-1) == 1);
    CHECK(detail::zigzag(1) == 2);
    CHECK(detail::zigzag(-2) == 3);
  }
}
