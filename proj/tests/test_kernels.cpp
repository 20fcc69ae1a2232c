#include "doctest.h"

#include "phg/kernels.hpp"
#include "phg/spectrum.hpp"

#include <cmath>
#include <stdexcept>

using namespace phg;

namespace {
const KernelKind kDisc{KernelTag::Disc, 0, 0.0};
const KernelKind kSemiDisc{KernelTag::SemiDisc, 0, 0.0};
const KernelKind kSpectRed{KernelTag::SpectRed, 0, 0.0};
const KernelKind kReduced{KernelTag::Reduced, 0, 0.0};
const KernelKind kEnhanced{KernelTag::Enhanced, 0, 0.0};
const KernelKind kNatural{KernelTag::Natural, 0, 0.0};
}  // namespace

TEST_SUITE("kernels") {
  TEST_CASE("discrete profile closed form at n=1, L=3") {
    TorusSpec spec(1, 3);
    const KernelProfile p = kernel_profile(kDisc, spec, 3);
    // (1/a_1) * 2 * 27^{-1/2} = 2 pi / (3 sqrt(3)) and its cos(2pi/3) halves
    CHECK(p.profile.values[0] == doctest::Approx(1.2091995761561452).epsilon(1e-13));
    CHECK(p.profile.values[1] == doctest::Approx(-0.6045997880780726).epsilon(1e-13));
    CHECK(p.profile.values[2] == doctest::Approx(-0.6045997880780726).epsilon(1e-13));
    CHECK(p.diag == doctest::Approx(1.2091995761561452).epsilon(1e-13));
  }

  TEST_CASE("diagonal values") {
    TorusSpec spec(1, 3);
    CHECK(kernel_diag(kDisc, spec) == doctest::Approx(1.2091995761561452).epsilon(1e-13));
    CHECK(kernel_diag(kSemiDisc, spec) == kernel_diag(kDisc, spec));
    CHECK(kernel_diag(kSpectRed, spec) == doctest::Approx(1.0).epsilon(1e-14));
  }

  TEST_CASE("grid constraints per kind") {
    TorusSpec spec(1, 3);
    CHECK_THROWS_AS(kernel_profile(kDisc, spec, 9), std::invalid_argument);
    CHECK_THROWS_AS(kernel_profile(kSemiDisc, spec, 8), std::invalid_argument);
    CHECK_THROWS_AS(kernel_profile(kEnhanced, spec, 5), std::invalid_argument);
    CHECK_THROWS_AS(kernel_profile({KernelTag::ContTrunc, 9, 0.0}, spec, 5),
                    std::invalid_argument);
    CHECK_THROWS_AS(kernel_profile({KernelTag::GreenPower, 0, -1.0}, spec, 3),
                    std::invalid_argument);
  }

  TEST_CASE("lattice identities across kinds") {
    for (int n : {1, 2}) {
      for (int L : {3, 9}) {
        TorusSpec spec(n, L);
        const auto disc = kernel_profile(kDisc, spec, L);
        const auto enh = kernel_profile(kEnhanced, spec, L);
        CHECK((disc.profile.values - enh.profile.values).abs().maxCoeff() < 1e-10);
        const auto red = kernel_profile(kReduced, spec, L);
        const auto nat = kernel_profile(kNatural, spec, L);
        CHECK((red.profile.values - nat.profile.values).abs().maxCoeff() < 1e-10);
        const auto spect = kernel_profile(kSpectRed, spec, L);
        const auto trunc = kernel_profile({KernelTag::ContTrunc, L, 0.0}, spec, L);
        CHECK((spect.profile.values - trunc.profile.values).abs().maxCoeff() < 1e-13);
      }
    }
  }

  TEST_CASE("profiles are even and grounded") {
    TorusSpec spec(2, 9);
    for (const KernelKind& kind : {kDisc, kSpectRed, kReduced, kEnhanced, kNatural}) {
      const KernelProfile p = kernel_profile(kind, spec, 9);
      CHECK(std::abs(p.profile.values.mean()) < 1e-10);
      for (int i = 0; i < 9; ++i)
        for (int j = 0; j < 9; ++j)
          CHECK(p.profile.values[i * 9 + j] ==
                doctest::Approx(p.profile.values[((9 - i) % 9) * 9 + (9 - j) % 9])
                    .epsilon(1e-12));
    }
  }

  TEST_CASE("semidisc extends disc off-lattice") {
    TorusSpec spec(1, 3);
    const KernelProfile fine = kernel_profile(kSemiDisc, spec, 9);
    const KernelProfile coarse = kernel_profile(kDisc, spec, 3);
    for (int j = 0; j < 3; ++j)
      CHECK(fine.profile.values[3 * j] == doctest::Approx(coarse.profile.values[j]).epsilon(1e-12));
    CHECK(fine.diag == coarse.diag);
  }

  TEST_CASE("green power reuses the eigenvalue path without a_n") {
    TorusSpec spec(1, 3);
    const KernelProfile g1 = kernel_profile({KernelTag::GreenPower, 0, 0.5}, spec, 3);
    // s = n/2 = 1/2 matches Disc up to the a_n factor
    const KernelProfile d = kernel_profile(kDisc, spec, 3);
    const double an = ground_constant(1);
    CHECK((g1.profile.values - an * d.profile.values).abs().maxCoeff() < 1e-14);
  }

  TEST_CASE("flat kernel: grounded fold of the cube-averaged continuum law") {
    TorusSpec spec(2, 3);
    const KernelProfile p = kernel_profile({KernelTag::Flat, 27, 0.0}, spec, 3);
    CHECK(std::abs(p.profile.values.mean()) < 1e-10);
    // tail bound is finite, positive, and shrinks with the cutoff
    const double b27 = flat_tail_bound(2, 3, 27);
    const double b81 = flat_tail_bound(2, 3, 81);
    CHECK(b27 > 0.0);
    CHECK(b81 < b27);
    // replication onto a finer grid keeps the lattice restriction
    const KernelProfile fine = kernel_profile({KernelTag::Flat, 27, 0.0}, spec, 9);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        CHECK(fine.profile.values[(3 * i) * 9 + 3 * j] ==
              doctest::Approx(p.profile.values[i * 3 + j]).epsilon(1e-13));
  }

  TEST_CASE("log divergence estimate") {
    // n=1: at the antipode the truncated kernel approaches log 2 closely
    const auto r = log_divergence_estimate(1, 201, 201, 0.4);
    CHECK(std::isfinite(r.sup));
    CHECK(r.sup >= 0.0);
    std::uint64_t counted = 0;
    for (const auto& row : r.table) counted += row.count;
    CHECK(counted > 0);
    CHECK_THROWS_AS(log_divergence_estimate(1, 9, 5, 0.1), std::invalid_argument);
  }

  TEST_CASE("second moment quadrature") {
    TorusSpec spec(1, 3);
    CHECK(second_moment(kDisc, spec, 0.0, 3) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(second_moment(kDisc, spec, 1.0, 3) ==
          doctest::Approx(1.4811291830620785).epsilon(1e-13));
    double prev = 0.0;
    for (double gamma : {0.0, 0.3, 0.6, 0.9}) {
      const double m = second_moment(kDisc, spec, gamma, 3);
      CHECK(m >= prev);
      prev = m;
    }
  }

  TEST_CASE("ui bound table") {
    const UiBoundTable t = ui_bound_table(2, 0.5, {BoundColumn::SemiDisc, BoundColumn::FlatExt,
                                                   BoundColumn::PlusEnhanced},
                                          {3, 9});
    CHECK(t.gamma_low == doctest::Approx(0.8577638849607068).epsilon(1e-12));
    CHECK(t.gamma_high == doctest::Approx(2.0).epsilon(1e-15));
    CHECK_FALSE(t.beyond_proved_regime);
    // the flat and plus-enhanced integrands coincide (both replicate the
    // lattice kernel over cubes)
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      if (t.rows[i].column != BoundColumn::FlatExt) continue;
      for (const auto& other : t.rows)
        if (other.column == BoundColumn::PlusEnhanced && other.L == t.rows[i].L)
          CHECK(t.rows[i].value_fine == doctest::Approx(other.value_fine).epsilon(1e-12));
    }
    const UiBoundTable hot = ui_bound_table(2, 1.0, {BoundColumn::SemiDisc}, {3});
    CHECK(hot.beyond_proved_regime);
  }
}
