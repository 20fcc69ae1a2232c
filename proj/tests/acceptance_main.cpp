// Acceptance suite: one line per criterion, nonzero exit on any failure.
// argv[1] (optional) is the path to the phg CLI binary, used by the
// determinism criterion; without it that criterion is skipped as failed.

#include "phg/fields.hpp"
#include "phg/gmc.hpp"
#include "phg/kernels.hpp"
#include "phg/noise.hpp"
#include "phg/spectrum.hpp"
#include "phg/transform.hpp"
#include "phg/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using Clock = std::chrono::steady_clock;

int g_failures = 0;

void report(int index, const std::string& name, bool pass, double seconds, double budget,
            const std::string& detail) {
  const bool in_time = seconds < budget;
  if (!pass || !in_time) g_failures++;
  std::printf("[%s] criterion %d: %s (%.2fs of %.0fs budget) %s\n",
              pass && in_time ? "PASS" : "FAIL", index, name.c_str(), seconds, budget,
              detail.c_str());
  std::fflush(stdout);
}

template <typename Fn>
void run(int index, const std::string& name, double budget_seconds, Fn&& fn) {
  const auto t0 = Clock::now();
  bool pass = false;
  std::string detail;
  try {
    pass = fn(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  report(index, name, pass, secs, budget_seconds, detail);
}

phg::FreqVector fv1(int z) {
  phg::FreqVector v(1);
  v << z;
  return v;
}

// deterministic sparse coefficient sets for the sampler-exactness sweep
phg::SpectralFunction random_set(int n, int L, std::uint64_t tag, int max_modes) {
  phg::TorusSpec spec(n, L);
  const auto freqs = phg::frequency_set(spec);
  phg::SpectralFunction f;
  f.n = n;
  const bool full = static_cast<int>(spec.num_sites()) - 1 <= max_modes;
  std::uint64_t i = 0;
  if (full) {
    for (const auto& z : freqs) f.coeff[z] = phg::gaussian_coefficient(tag, z, 1);
    return f;
  }
  for (int m = 0; m < max_modes; ++m) {
    const double u = phg::detail::bits_to_unit(
        phg::detail::keyed_bits(tag, std::array<std::uint64_t, 2>{11, i++}.data(), 2));
    const auto pick = std::min<std::size_t>(static_cast<std::size_t>(u * freqs.size()),
                                            freqs.size() - 1);
    f.coeff[freqs[pick]] = phg::gaussian_coefficient(tag, freqs[pick], 1);
  }
  return f;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";

  run(1, "normalization identity", 1.0, [](std::string& detail) {
    double worst = 0.0;
    for (int n : {1, 2, 3})
      for (int L : {3, 5, 9})
        worst = std::max(worst, phg::normalization_identity_residual(phg::TorusSpec(n, L)));
    detail = "max residual " + std::to_string(worst);
    return worst < 1e-10;
  });

  run(2, "sampler exactness (fft vs direct)", 30.0, [](std::string& detail) {
    double worst = 0.0;
    std::uint64_t tag = 0;
    for (int n : {1, 2, 3})
      for (int L : {3, 9, 27}) {
        phg::TorusSpec spec(n, L);
        for (int rep = 0; rep < 50; ++rep) {
          const phg::SpectralFunction f = random_set(n, L, 7000 + tag++, 64);
          const auto a = phg::synthesize(f, spec);
          const auto b = phg::synthesize_direct(f, spec);
          const double scale = b.values.abs().maxCoeff();
          if (scale > 0.0) worst = std::max(worst, (a.values - b.values).abs().maxCoeff() / scale);
        }
      }
    detail = "max relative difference " + std::to_string(worst);
    return worst < 1e-9;
  });

  run(3, "covariance correctness", 120.0, [](std::string& detail) {
    const auto a =
        phg::empirical_covariance(phg::TorusSpec(1, 3), phg::FieldKind::Standard, 20000, 1);
    const auto b =
        phg::empirical_covariance(phg::TorusSpec(2, 9), phg::FieldKind::Standard, 20000, 1);
    const auto c = phg::empirical_covariance_white_noise(phg::TorusSpec(1, 3), 20000, 1);
    std::ostringstream os;
    os << "max |z|: n1L3 " << a.max_abs_z << ", n2L9 " << b.max_abs_z << ", white-noise "
       << c.max_abs_z;
    detail = os.str();
    return a.max_abs_z < 4.0 && b.max_abs_z < 4.0 && c.max_abs_z < 4.0;
  });

  run(4, "kernel identities", 10.0, [](std::string& detail) {
    double worst_id = 0.0, worst_mean = 0.0;
    for (int n : {1, 2, 3})
      for (int L : {3, 9, 27}) {
        phg::TorusSpec spec(n, L);
        const auto disc = phg::kernel_profile({phg::KernelTag::Disc, 0, 0.0}, spec, L);
        const auto enh = phg::kernel_profile({phg::KernelTag::Enhanced, 0, 0.0}, spec, L);
        const auto red = phg::kernel_profile({phg::KernelTag::Reduced, 0, 0.0}, spec, L);
        const auto nat = phg::kernel_profile({phg::KernelTag::Natural, 0, 0.0}, spec, L);
        const auto spect = phg::kernel_profile({phg::KernelTag::SpectRed, 0, 0.0}, spec, L);
        const auto trunc = phg::kernel_profile({phg::KernelTag::ContTrunc, L, 0.0}, spec, L);
        worst_id = std::max(worst_id,
                            (disc.profile.values - enh.profile.values).abs().maxCoeff());
        worst_id = std::max(worst_id,
                            (red.profile.values - nat.profile.values).abs().maxCoeff());
        worst_id = std::max(worst_id,
                            (spect.profile.values - trunc.profile.values).abs().maxCoeff());
        const auto plus = phg::kernel_profile({phg::KernelTag::Plus, 0, 0.0}, spec, L);
        const auto semi = phg::kernel_profile({phg::KernelTag::SemiDisc, 0, 0.0}, spec, 3 * L);
        const auto flat = phg::kernel_profile({phg::KernelTag::Flat, 0, 0.0}, spec, L);
        const auto green =
            phg::kernel_profile({phg::KernelTag::GreenPower, 0, n / 4.0}, spec, L);
        (void)green;
        for (const auto* p : {&disc, &enh, &red, &nat, &spect, &trunc, &plus, &semi, &flat})
          worst_mean = std::max(worst_mean, std::abs(p->profile.values.mean()));
      }
    std::ostringstream os;
    os << "max identity gap " << worst_id << ", max profile mean " << worst_mean;
    detail = os.str();
    return worst_id < 1e-10 && worst_mean < 1e-10;
  });

  run(5, "field convergence variance", 1.0, [](std::string& detail) {
    const auto f = phg::SpectralFunction::mode(fv1(1));
    const double v3 = phg::pairing_error_variance(f, phg::TorusSpec(1, 3), 243).total;
    const double v9 = phg::pairing_error_variance(f, phg::TorusSpec(1, 9), 243).total;
    bool decreasing = true;
    double prev = 1e300;
    for (int L : {3, 9, 27, 81}) {
      const double v = phg::pairing_error_variance(f, phg::TorusSpec(1, L), 243).total;
      decreasing = decreasing && v < prev;
      prev = v;
    }
    std::ostringstream os;
    os << "v(3) = " << v3 << ", v(9) = " << v9;
    detail = os.str();
    return std::abs(v3 - 4.964e-3) < 1e-6 && std::abs(v9 - 5.25e-5) < 1e-6 && decreasing;
  });

  run(6, "gmc normalization and second moment", 60.0, [](std::string& detail) {
    const auto r = phg::mass_moment_report(phg::TorusSpec(1, 3),
                                           phg::GmcSpec{1.0, phg::GmcKind::Discrete, 0}, 100000, 3);
    std::ostringstream os;
    os << "mean " << r.mc_mean << " (se " << r.se_mean << "), moment2 " << r.mc_moment2 << " (se "
       << r.se_moment2 << ")";
    detail = os.str();
    const bool mean_ok = std::abs(r.mc_mean - 1.0) < 4.0 * r.se_mean;
    const bool m2_ok = std::abs(r.mc_moment2 - 1.481127) < 4.0 * r.se_moment2;
    return mean_ok && m2_ok;
  });

  run(7, "uniform integrability bounds", 60.0, [](std::string& detail) {
    const auto t = phg::ui_bound_table(2, 0.5, {phg::BoundColumn::SemiDisc}, {3, 9, 27});
    const double inc1 = std::abs(t.rows[1].value_fine - t.rows[0].value_fine);
    const double inc2 = std::abs(t.rows[2].value_fine - t.rows[1].value_fine);
    const auto z = phg::ui_bound_table(2, 0.0, {phg::BoundColumn::SemiDisc}, {3, 9, 27});
    double worst_one = 0.0;
    for (const auto& row : z.rows)
      worst_one = std::max({worst_one, std::abs(row.value_coarse - 1.0),
                            std::abs(row.value_fine - 1.0)});
    std::ostringstream os;
    os << "increments " << inc1 << " -> " << inc2 << ", gamma=0 deviation " << worst_one;
    detail = os.str();
    return 2.0 * inc2 <= inc1 && worst_one == 0.0;
  });

  run(8, "measure convergence (hierarchical)", 300.0, [](std::string& detail) {
    const auto f = phg::SpectralFunction::mode(fv1(1));
    const auto t = phg::hierarchical_convergence(
        1, 3, 3, phg::GmcSpec{0.4, phg::GmcKind::Discrete, 0}, f, 0, 256, 1);
    const bool strict =
        t.rows[0].D > t.rows[1].D && t.rows[1].D > t.rows[2].D;
    const auto exact = phg::hierarchical_convergence(
        1, 3, 3, phg::GmcSpec{0.4, phg::GmcKind::SpectrallyReducedSemiDiscrete, 0}, f, 27, 256,
        1);
    std::ostringstream os;
    os << "D = (" << t.rows[0].D << ", " << t.rows[1].D << ", " << t.rows[2].D
       << "), top-level residual " << exact.rows[2].D;
    detail = os.str();
    return strict && exact.rows[2].D == 0.0;
  });

  run(9, "log divergence stability", 60.0, [](std::string& detail) {
    const auto a = phg::log_divergence_estimate(2, 33, 199, 0.05);
    const auto b = phg::log_divergence_estimate(2, 99, 199, 0.05);
    std::ostringstream os;
    os << "C(K=33) = " << a.sup << ", C(K=99) = " << b.sup;
    detail = os.str();
    return std::isfinite(a.sup) && std::isfinite(b.sup) && std::abs(a.sup - b.sup) < 0.1;
  });

  run(10, "cli determinism", 60.0, [&cli](std::string& detail) {
    if (cli.empty()) {
      detail = "no CLI path given";
      return false;
    }
    const std::string dir = "/tmp/phg_acceptance";
    std::system(("rm -rf " + dir + " && mkdir -p " + dir).c_str());
    const std::vector<std::pair<std::string, std::vector<std::string>>> commands = {
        {"sample", {" sample --n 2 --L 27 --seed 7 --out ", ".grid"}},
        {"kernel", {" kernel --kind flat --n 2 --L 3 --K 27 --M 9 --out ", ".grid"}},
        {"gmc", {" gmc --n 1 --L 9 --seed 5 --gamma 0.8 --kind semidiscrete --M 27 --out ",
                 ".grid"}},
        {"converge-field", {" converge-field --n 1 --f phi:1 --Ls 3,9,27 --out-csv ", ".csv"}},
        {"converge-measure",
         {" converge-measure --n 1 --a 3 --lmax 2 --gamma 0.4 --f phi:1 --seeds 32 --out-csv ",
          ".csv"}},
        {"bound", {" bound --n 2 --gamma 0.55 --Ls 3,9 --out-csv ", ".csv"}},
    };
    for (const auto& [name, parts] : commands) {
      for (int rep = 1; rep <= 2; ++rep) {
        const std::string out = dir + "/" + name + std::to_string(rep) + parts[1];
        const std::string cmd = cli + parts[0] + out + " > /dev/null";
        if (std::system(cmd.c_str()) != 0) {
          detail = name + " exited nonzero";
          return false;
        }
      }
      const std::string a = slurp(dir + "/" + name + "1" + parts[1]);
      const std::string b = slurp(dir + "/" + name + "2" + parts[1]);
      if (a.empty() || a != b) {
        detail = name + " outputs differ between reruns";
        return false;
      }
    }
    // grid sidecars from the kernel command must match too
    if (slurp(dir + "/kernel1.grid.json") != slurp(dir + "/kernel2.grid.json")) {
      detail = "kernel sidecars differ";
      return false;
    }
    detail = "6 commands byte-identical across reruns";
    return true;
  });

  if (g_failures == 0) {
    std::printf("acceptance: all criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d criterion(s) FAILED\n", g_failures);
  return 1;
}
