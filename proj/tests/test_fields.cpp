#include "doctest.h"

#include "phg/fields.hpp"
#include "phg/spectrum.hpp"

#include <cmath>
#include <future>
#include <stdexcept>

using namespace phg;

namespace {
FreqVector fv(std::initializer_list<int> vals) {
  FreqVector z(static_cast<int>(vals.size()));
  int k = 0;
  for (int v : vals) z[k++] = v;
  return z;
}
}  // namespace

TEST_SUITE("fields") {
  TEST_CASE("sampling is deterministic and grounded") {
    TorusSpec spec(2, 9);
    const FieldSample a = sample_field(spec, 7, FieldKind::Standard);
    const FieldSample b = sample_field(spec, 7, FieldKind::Standard);
    CHECK((a.grid.values == b.grid.values).all());
    CHECK(std::abs(a.grid.values.mean()) < 1e-12);
    CHECK(a.coeffs.grounded());
    const FieldSample c = sample_field(spec, 8, FieldKind::Standard);
    CHECK_FALSE((a.grid.values == c.grid.values).all());
  }

  TEST_CASE("grid agrees with the coefficient synthesis") {
    TorusSpec spec(1, 27);
    const FieldSample s = sample_field(spec, 3, FieldKind::Reduced);
    const GridFunction direct = synthesize_direct(s.coeffs, spec);
    const double scale = direct.values.abs().maxCoeff();
    CHECK((s.grid.values - direct.values).abs().maxCoeff() / scale < 1e-9);
  }

  TEST_CASE("kind weights share one noise family") {
    TorusSpec spec(2, 9);
    const FieldSample std_f = sample_field(spec, 11, FieldKind::Standard);
    const FieldSample spect = sample_field(spec, 11, FieldKind::SpectrallyReduced);
    const FieldSample red = sample_field(spec, 11, FieldKind::Reduced);
    for (const auto& [z, alpha] : std_f.coeffs.coeff) {
      const double ratio = std::pow(lambda_cont(z) / lambda_disc(spec.L, z), spec.n / 4.0);
      CHECK(alpha == doctest::Approx(spect.coeffs.at(z) * ratio).epsilon(1e-13));
      CHECK(red.coeffs.at(z) ==
            doctest::Approx(theta(spec.L, z) * spect.coeffs.at(z)).epsilon(1e-14));
    }
  }

  TEST_CASE("common-noise coupling: coefficients converge along L") {
    const FreqVector z = fv({1});
    const double target =
        gaussian_coefficient(5, z) * std::pow(lambda_cont(z), -0.25) / std::sqrt(ground_constant(1));
    double prev = 1e300;
    for (int L : {3, 9, 27, 81}) {
      const double c = sample_field(TorusSpec(1, L), 5, FieldKind::Standard).coeffs.at(z);
      const double gap = std::abs(c - target);
      CHECK(gap < prev);
      prev = gap;
    }
    CHECK(prev < 1e-4);
  }

  TEST_CASE("white noise route") {
    TorusSpec spec(1, 9);
    WhiteNoise w = white_noise(spec, 13);
    CHECK_FALSE(w.grounded);
    ground(w);
    CHECK(std::abs(w.values.sum()) < 1e-10);

    const FieldSample s = sample_field_white_noise(spec, 13);
    CHECK(s.kind == FieldKind::Standard);
    CHECK(std::abs(s.grid.values.mean()) < 1e-12);
    CHECK(s.coeffs.grounded());
    // independent stream: same seed, different route, different field
    const FieldSample eig = sample_field(spec, 13, FieldKind::Standard);
    CHECK_FALSE((s.grid.values == eig.grid.values).all());
    // deterministic
    const FieldSample again = sample_field_white_noise(spec, 13);
    CHECK((s.grid.values == again.grid.values).all());
  }

  TEST_CASE("extend_field") {
    TorusSpec spec(1, 3);
    const FieldSample s = sample_field(spec, 21, FieldKind::Standard);
    SUBCASE("fourier with M = L returns the sample grid") {
      const GridFunction g = extend_field(s, ExtendMode::Fourier, 3);
      CHECK((g.values == s.grid.values).all());
    }
    SUBCASE("fourier restriction to the sublattice is exact") {
      const GridFunction fine = extend_field(s, ExtendMode::Fourier, 9);
      for (int j = 0; j < 3; ++j)
        CHECK(fine.values[3 * j] == doctest::Approx(s.grid.values[j]).epsilon(1e-12));
    }
    SUBCASE("pwc replicates cube values") {
      const GridFunction fine = extend_field(s, ExtendMode::Pwc, 9);
      TorusSpec fine_spec(1, 9);
      for (int j = 0; j < 9; ++j) {
        Point x(1);
        x << j / 9.0;
        CHECK(fine.values[j] ==
              s.grid.values[static_cast<Eigen::Index>(cube_index(x, spec).flat_index())]);
      }
    }
  }

  TEST_CASE("pairing error variance closed forms") {
    const SpectralFunction f = SpectralFunction::mode(fv({1}));
    const auto v3 = pairing_error_variance(f, TorusSpec(1, 3), 9);
    CHECK(v3.total == doctest::Approx(4.9636772868048885e-3).epsilon(1e-10));
    CHECK(v3.alias == 0.0);
    CHECK(v3.tail == 0.0);
    const auto v9 = pairing_error_variance(f, TorusSpec(1, 9), 11);
    CHECK(v9.total == doctest::Approx(5.25069370908699e-5).epsilon(1e-9));

    // single out-of-band mode: the fold lands on the excluded zero mode, so
    // the variance is pure tail, lambda_3^{-1/2} / a_1 = 1/6
    const SpectralFunction g = SpectralFunction::mode(fv({3}));
    const auto vg = pairing_error_variance(g, TorusSpec(1, 3), 9);
    CHECK(vg.total == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
    CHECK(vg.inband == 0.0);
    CHECK(vg.alias == 0.0);
    CHECK(vg.tail == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
  }

  TEST_CASE("pairing error variance contracts") {
    const SpectralFunction f = SpectralFunction::mode(fv({1}));
    CHECK_THROWS_AS(pairing_error_variance(f, TorusSpec(1, 3), 1), std::invalid_argument);
    SpectralFunction bad = SpectralFunction::mode(fv({0}), 1.0);
    CHECK_THROWS_AS(pairing_error_variance(bad, TorusSpec(1, 3), 9), std::invalid_argument);
    double prev = 1e300;
    for (int L : {3, 9, 27, 81}) {
      const double v = pairing_error_variance(f, TorusSpec(1, L), 9).total;
      CHECK(v >= 0.0);
      CHECK(v < prev);
      prev = v;
    }
  }

  TEST_CASE("hs error variance: fourier extension closed form") {
    // single-band window by hand at n=1, L=3, K=9, s=1
    TorusSpec spec(1, 3);
    const auto v = hs_error_variance(spec, FieldKind::Standard, ExtendMode::Fourier, 1.0, 9);
    const double an = ground_constant(1);
    double expect_approx = 0.0, expect_tail = 0.0;
    for (int z = -4; z <= 4; ++z) {
      if (z == 0) continue;
      const double sobolev = 1.0 / (static_cast<double>(z) * z);
      const double own = std::pow(lambda_cont(fv({z})), -0.25);
      if (std::abs(z) <= 1) {
        const double d = own - std::pow(lambda_disc(3, fv({z})), -0.25);
        expect_approx += sobolev * d * d / an;
      } else {
        expect_tail += sobolev * own * own / an;
      }
    }
    CHECK(v.approx == doctest::Approx(expect_approx).epsilon(1e-13));
    CHECK(v.tail == doctest::Approx(expect_tail).epsilon(1e-13));
    CHECK(v.total == doctest::Approx(expect_approx + expect_tail).epsilon(1e-13));
  }

  TEST_CASE("hs error variance: monte carlo agreement for the pwc extension") {
    // estimate E sum_z |z|^{-2s} <phi_z, h^(K) - pwc(h_L)>^2 by sampling,
    // reading the extension coefficient off the lattice values directly
    TorusSpec spec(1, 3);
    const int K = 9;
    const double s = 1.0;
    const double an = ground_constant(1);
    const auto exact = hs_error_variance(spec, FieldKind::Standard, ExtendMode::Pwc, s, K);

    const int S = 4000;
    double acc = 0.0, acc2 = 0.0;
    for (int seed = 0; seed < S; ++seed) {
      const FieldSample smp = sample_field(spec, 2000 + static_cast<std::uint64_t>(seed),
                                           FieldKind::Standard);
      double norm2 = 0.0;
      for (int z = -(K - 1) / 2; z <= (K - 1) / 2; ++z) {
        if (z == 0) continue;
        const FreqVector zz = fv({z});
        // continuum coefficient of h^(K)
        const double ch = gaussian_coefficient(2000 + static_cast<std::uint64_t>(seed), zz) *
                          std::pow(lambda_cont(zz), -0.25) / std::sqrt(an);
        // exact coefficient of the pwc extension: cube average of phi_z
        // against the lattice values, evaluated pointwise
        double lattice_pair = 0.0;
        for (int j = 0; j < 3; ++j) {
          Point x(1);
          x << j / 3.0;
          lattice_pair += smp.grid.values[j] * eigenfunction(zz, x);
        }
        lattice_pair /= 3.0;
        const double cext = theta_extended(3, zz) * lattice_pair;
        const double d = ch - cext;
        norm2 += d * d / (static_cast<double>(z) * z);
      }
      acc += norm2;
      acc2 += norm2 * norm2;
    }
    const double mean = acc / S;
    const double se = std::sqrt((acc2 / S - mean * mean) / S);
    CHECK(std::abs(mean - exact.total) < 4.0 * se);
  }

  TEST_CASE("parallel batch sampling is schedule independent") {
    TorusSpec spec(2, 9);
    std::vector<std::future<GridFunction>> jobs;
    for (int s = 0; s < 16; ++s)
      jobs.push_back(std::async(std::launch::async, [&spec, s] {
        return sample_field(spec, static_cast<std::uint64_t>(s), FieldKind::Standard).grid;
      }));
    for (int s = 0; s < 16; ++s) {
      const GridFunction serial = sample_field(spec, static_cast<std::uint64_t>(s),
                                               FieldKind::Standard).grid;
      const GridFunction parallel = jobs[static_cast<std::size_t>(s)].get();
      CHECK((serial.values == parallel.values).all());
    }
  }

  TEST_CASE("empirical covariance on a small lattice") {
    const auto r = empirical_covariance(TorusSpec(1, 3), FieldKind::Standard, 4000, 1);
    CHECK(r.max_abs_z < 4.0);
    CHECK(r.estimate.values[0] == doctest::Approx(1.2091995761561452).epsilon(0.1));
    const auto w = empirical_covariance_white_noise(TorusSpec(1, 3), 4000, 1);
    CHECK(w.max_abs_z < 4.0);
    CHECK_THROWS_AS(empirical_covariance(TorusSpec(1, 3), FieldKind::Standard, 10, 1),
                    std::invalid_argument);
  }
}
