#include "phg/kernels.hpp"

#include "phg/budget.hpp"
#include "phg/fft.hpp"
#include "phg/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace phg {

namespace {

constexpr double kPi = std::numbers::pi;

std::uint64_t pow_u64(int base, int exp) {
  std::uint64_t r = 1;
  for (int k = 0; k < exp; ++k) r *= static_cast<std::uint64_t>(base);
  return r;
}

// kappa(u) = sum_z c_z cos(2 pi z.u) from an even cosine-coefficient map,
// synthesized on the M-grid by placing c_z at z mod M
GridFunction profile_from_cos_coeffs(const std::map<FreqVector, double, FreqLess>& coeffs, int n,
                                     int M) {
  const std::uint64_t total = pow_u64(M, n);
  ensure_budget(total * (sizeof(std::complex<double>) + sizeof(double)));
  detail::CArray spectrum(total, {0.0, 0.0});
  for (const auto& [z, c] : coeffs) {
    std::uint64_t flat = 0;
    for (int k = 0; k < n; ++k) {
      int m = z[k] % M;
      if (m < 0) m += M;
      flat = flat * static_cast<std::uint64_t>(M) + static_cast<std::uint64_t>(m);
    }
    spectrum[flat] += c;
  }
  detail::fft_nd(spectrum, n, M, /*inverse=*/true);
  GridFunction g;
  g.n = n;
  g.side = M;
  g.values.resize(static_cast<Eigen::Index>(total));
  for (std::uint64_t j = 0; j < total; ++j) g.values[static_cast<Eigen::Index>(j)] = spectrum[j].real();
  return g;
}

using CosMap = std::map<FreqVector, double, FreqLess>;

// coefficient maps for the lattice-band kinds; c_z indexed by z in Z^n_L \ {0}
CosMap band_coeffs(KernelTag tag, const TorusSpec& spec, double s) {
  CosMap out;
  const double an = ground_constant(spec.n);
  const double half_n = spec.n / 2.0;
  for (const FreqVector& z : frequency_set(spec)) {
    if (canonical_sign(z) == Sign::zero) continue;
    const double ld = lambda_disc(spec.L, z);
    const double lc = lambda_cont(z);
    const double th = theta(spec.L, z);
    double c;
    switch (tag) {
      case KernelTag::Disc:
      case KernelTag::SemiDisc:
        c = std::pow(ld, -half_n) / an;
        break;
      case KernelTag::SpectRed:
        c = std::pow(lc, -half_n) / an;
        break;
      case KernelTag::Reduced:
        c = th * th * std::pow(lc, -half_n) / an;
        break;
      case KernelTag::Plus:
        c = std::pow(ld, -half_n) / (th * th * an);
        break;
      case KernelTag::GreenPower:
        c = std::pow(ld, -s);
        break;
      default:
        throw std::logic_error("band_coeffs: not a band kind");
    }
    out[z] = c;
  }
  return out;
}

CosMap cont_trunc_coeffs(int n, int K) {
  CosMap out;
  const double an = ground_constant(n);
  const double half_n = n / 2.0;
  TorusSpec window(n, K);
  for (const FreqVector& z : frequency_set(window)) {
    if (canonical_sign(z) == Sign::zero) continue;
    out[z] = std::pow(lambda_cont(z), -half_n) / an;
  }
  return out;
}

// alias-folded coefficients of the cube-averaged continuum kernel, truncated
// at ||z||_inf < K/2: per folded w, sum of theta_ext^2 lambda_z^{-n/2} / a_n
CosMap flat_coeffs(const TorusSpec& spec, int K) {
  CosMap out;
  const double an = ground_constant(spec.n);
  const double half_n = spec.n / 2.0;
  TorusSpec window(spec.n, K);
  for (const FreqVector& z : frequency_set(window)) {
    if (canonical_sign(z) == Sign::zero) continue;
    const double th = theta_extended(spec.L, z);
    if (th == 0.0) continue;
    out[fold_representative(z, spec.L)] += th * th * std::pow(lambda_cont(z), -half_n) / an;
  }
  return out;
}

void validate_grid(const KernelKind& kind, const TorusSpec& spec, int M) {
  if (M % 2 == 0) throw std::invalid_argument("kernel_profile: evaluation grid must be odd");
  switch (kind.tag) {
    case KernelTag::Disc:
    case KernelTag::SpectRed:
    case KernelTag::Reduced:
    case KernelTag::GreenPower:
      if (M != spec.L)
        throw std::invalid_argument("kernel_profile: this kind lives on the lattice (M = L)");
      break;
    case KernelTag::SemiDisc:
    case KernelTag::Plus:
      if (M < spec.L) throw std::invalid_argument("kernel_profile: this kind needs M >= L");
      break;
    case KernelTag::ContTrunc:
      if (kind.cutoff < 3 || kind.cutoff % 2 == 0)
        throw std::invalid_argument("kernel_profile: ContTrunc needs an odd cutoff K >= 3");
      if (M < kind.cutoff) throw std::invalid_argument("kernel_profile: ContTrunc needs M >= K");
      break;
    case KernelTag::Enhanced:
    case KernelTag::Natural:
    case KernelTag::Flat:
      if (M % spec.L != 0)
        throw std::invalid_argument("kernel_profile: piecewise-constant kinds need L | M");
      break;
  }
  if (kind.tag == KernelTag::GreenPower && !(kind.exponent > 0.0))
    throw std::invalid_argument("kernel_profile: GreenPower needs s > 0");
}

std::string law_text(const KernelKind& kind, const TorusSpec& spec) {
  switch (kind.tag) {
    case KernelTag::Disc:
      return "(1/a_n) lambda_{L,z}^{-n/2}, z in Z^n_L \\ {0}";
    case KernelTag::SemiDisc:
      return "(1/a_n) lambda_{L,z}^{-n/2}, z in Z^n_L \\ {0}, evaluated off-lattice";
    case KernelTag::SpectRed:
      return "(1/a_n) lambda_z^{-n/2}, z in Z^n_L \\ {0}";
    case KernelTag::Reduced:
      return "(1/a_n) theta_{L,z}^2 lambda_z^{-n/2}, z in Z^n_L \\ {0}";
    case KernelTag::Plus:
      return "(1/a_n) theta_{L,z}^{-2} lambda_{L,z}^{-n/2}, z in Z^n_L \\ {0}";
    case KernelTag::Enhanced:
      return "cube average in both arguments of the Plus kernel";
    case KernelTag::Natural:
      return "cube average in both arguments of the SpectRed kernel";
    case KernelTag::Flat:
      return "alias fold of (1/a_n) theta_{L,z}^2 lambda_z^{-n/2} over ||z||_inf < " +
             std::to_string(kind.cutoff) + "/2";
    case KernelTag::ContTrunc:
      return "(1/a_n) lambda_z^{-n/2}, z in Z^n_" + std::to_string(kind.cutoff) + " \\ {0}";
    case KernelTag::GreenPower:
      return "lambda_{L,z}^{-" + std::to_string(kind.exponent) + "}, z in Z^n_" +
             std::to_string(spec.L) + " \\ {0}";
  }
  return "";
}

int default_flat_cutoff(const TorusSpec& spec) { return 9 * spec.L; }

CosMap coeffs_for(const KernelKind& kind, const TorusSpec& spec) {
  switch (kind.tag) {
    case KernelTag::Disc:
    case KernelTag::SemiDisc:
      return band_coeffs(KernelTag::Disc, spec, 0.0);
    case KernelTag::SpectRed:
      return band_coeffs(KernelTag::SpectRed, spec, 0.0);
    case KernelTag::Reduced:
      return band_coeffs(KernelTag::Reduced, spec, 0.0);
    case KernelTag::Plus:
      return band_coeffs(KernelTag::Plus, spec, 0.0);
    case KernelTag::GreenPower:
      return band_coeffs(KernelTag::GreenPower, spec, kind.exponent);
    case KernelTag::ContTrunc:
      return cont_trunc_coeffs(spec.n, kind.cutoff);
    // lattice values of the cube-averaged kinds: theta cancellations are
    // exact, so Enhanced folds back to Disc and Natural to Reduced
    case KernelTag::Enhanced:
      return band_coeffs(KernelTag::Disc, spec, 0.0);
    case KernelTag::Natural:
      return band_coeffs(KernelTag::Reduced, spec, 0.0);
    case KernelTag::Flat:
      return flat_coeffs(spec, kind.cutoff > 0 ? kind.cutoff : default_flat_cutoff(spec));
  }
  throw std::logic_error("coeffs_for: unknown kind");
}

bool is_piecewise_constant(KernelTag tag) {
  return tag == KernelTag::Enhanced || tag == KernelTag::Natural || tag == KernelTag::Flat;
}

}  // namespace

std::string kernel_tag_name(KernelTag tag) {
  switch (tag) {
    case KernelTag::Disc: return "disc";
    case KernelTag::SemiDisc: return "semidisc";
    case KernelTag::SpectRed: return "spectred";
    case KernelTag::Reduced: return "reduced";
    case KernelTag::Plus: return "plus";
    case KernelTag::Enhanced: return "enhanced";
    case KernelTag::Natural: return "natural";
    case KernelTag::Flat: return "flat";
    case KernelTag::ContTrunc: return "cont-trunc";
    case KernelTag::GreenPower: return "green-power";
  }
  return "";
}

KernelProfile kernel_profile(const KernelKind& kind_in, const TorusSpec& spec, int M) {
  KernelKind kind = kind_in;
  if (kind.tag == KernelTag::Flat && kind.cutoff == 0) kind.cutoff = default_flat_cutoff(spec);
  validate_grid(kind, spec, M);

  const CosMap coeffs = coeffs_for(kind, spec);
  KernelProfile p;
  p.kind = kind;
  p.n = spec.n;
  p.L = spec.L;
  p.M = M;
  p.law = law_text(kind, spec);
  p.diag = 0.0;
  for (const auto& [z, c] : coeffs) p.diag += c;

  if (is_piecewise_constant(kind.tag)) {
    GridFunction lattice = profile_from_cos_coeffs(coeffs, spec.n, spec.L);
    p.profile = M == spec.L ? std::move(lattice) : pwc_extend_grid(lattice, M);
  } else {
    p.profile = profile_from_cos_coeffs(coeffs, spec.n, M);
  }
  return p;
}

std::map<FreqVector, double, FreqLess> kernel_cos_coefficients(const KernelKind& kind_in,
                                                               const TorusSpec& spec) {
  KernelKind kind = kind_in;
  if (kind.tag == KernelTag::Flat && kind.cutoff == 0) kind.cutoff = default_flat_cutoff(spec);
  return coeffs_for(kind, spec);
}

double kernel_diag(const KernelKind& kind_in, const TorusSpec& spec) {
  KernelKind kind = kind_in;
  if (kind.tag == KernelTag::Flat && kind.cutoff == 0) kind.cutoff = default_flat_cutoff(spec);
  if (kind.tag == KernelTag::ContTrunc && (kind.cutoff < 3 || kind.cutoff % 2 == 0))
    throw std::invalid_argument("kernel_diag: ContTrunc needs an odd cutoff K >= 3");
  double d = 0.0;
  for (const auto& [z, c] : coeffs_for(kind, spec)) d += c;
  return d;
}

double flat_tail_bound(int n, int L, int K) {
  // On the tail ||z||_inf >= K/2 we have ||z||^{-n} <= (2/K)^n, and the
  // dropped mass sum theta_ext^2 (2pi|z|)^{-n} / a_n is bounded by
  //   (1/a_n) (2pi)^{-n} (2/K)^n [sum_{z in Z} min(1, (L/pi)^2 / z^2)]^n.
  const double an = ground_constant(n);
  const double c = (L / kPi) * (L / kPi);
  double axis_sum = 1.0;  // z = 0 term
  const long zmax = 4 * static_cast<long>(std::sqrt(c)) + 4;
  for (long z = 1; z <= zmax; ++z)
    axis_sum += 2.0 * std::min(1.0, c / (static_cast<double>(z) * z));
  axis_sum += 2.0 * c / static_cast<double>(zmax);  // integral tail of c/z^2
  return std::pow(axis_sum, n) * std::pow(2.0 / K, n) * std::pow(2.0 * kPi, -n) / an;
}

LogDivergenceResult log_divergence_estimate(int n, int K, int M, double r_min) {
  if (K > M) throw std::invalid_argument("log_divergence_estimate: need K <= M");
  if (!(r_min > 0.0)) throw std::invalid_argument("log_divergence_estimate: need r_min > 0");
  TorusSpec spec(n, K);
  KernelKind kind{KernelTag::ContTrunc, K, 0.0};
  const KernelProfile prof = kernel_profile(kind, spec, M);

  const double r_max = std::sqrt(static_cast<double>(n)) / 2.0;
  constexpr int kBins = 10;
  LogDivergenceResult res;
  res.table.resize(kBins);
  for (int b = 0; b < kBins; ++b) {
    res.table[b].r_lo = r_min + (r_max - r_min) * b / kBins;
    res.table[b].r_hi = r_min + (r_max - r_min) * (b + 1) / kBins;
  }

  const Point origin = Point::Zero(n);
  std::uint64_t j = 0;
  for (detail::MultiIndex it(n, M); !it.done(); it.next(), ++j) {
    const Point u = (*it).cast<double>() / static_cast<double>(M);
    const double d = torus_distance(origin, u);
    if (d < r_min) continue;
    const double dev = std::abs(prof.profile.values[static_cast<Eigen::Index>(j)] - std::log(1.0 / d));
    res.sup = std::max(res.sup, dev);
    int b = static_cast<int>((d - r_min) / (r_max - r_min) * kBins);
    b = std::clamp(b, 0, kBins - 1);
    res.table[b].max_dev = std::max(res.table[b].max_dev, dev);
    res.table[b].count++;
  }
  return res;
}

double second_moment(const KernelKind& kind, const TorusSpec& spec, double gamma, int M) {
  const KernelProfile prof = kernel_profile(kind, spec, M);
  return (gamma * gamma * prof.profile.values).exp().mean();
}

std::string bound_column_name(BoundColumn c) {
  switch (c) {
    case BoundColumn::SemiDisc: return "semidisc";
    case BoundColumn::FlatExt: return "flat";
    case BoundColumn::PlusEnhanced: return "plus-enhanced";
  }
  return "";
}

namespace {

double bound_integral(BoundColumn column, int n, int L, double gamma, int refinement) {
  TorusSpec spec(n, L);
  const int M = refinement * L;
  switch (column) {
    case BoundColumn::SemiDisc: {
      KernelKind kind{KernelTag::SemiDisc, 0, 0.0};
      return second_moment(kind, spec, gamma, M);
    }
    case BoundColumn::FlatExt: {
      // k_{L,flat}(0,y) is constant on cubes, so the integral is the exact
      // lattice average regardless of the refinement
      KernelKind disc{KernelTag::Disc, 0, 0.0};
      const KernelProfile lattice = kernel_profile(disc, spec, L);
      GridFunction rep = refinement == 1 ? lattice.profile : pwc_extend_grid(lattice.profile, M);
      return (gamma * gamma * rep.values).exp().mean();
    }
    case BoundColumn::PlusEnhanced: {
      KernelKind kind{KernelTag::Enhanced, 0, 0.0};
      return second_moment(kind, spec, gamma, M);
    }
  }
  throw std::logic_error("bound_integral: unknown column");
}

}  // namespace

UiBoundTable ui_bound_table(int n, double gamma, const std::vector<BoundColumn>& columns,
                            const std::vector<int>& Ls) {
  UiBoundTable t;
  t.gamma = gamma;
  t.gamma_low = std::sqrt(n / std::numbers::e);
  t.gamma_high = std::sqrt(2.0 * n);
  t.beyond_proved_regime = std::abs(gamma) >= t.gamma_low;
  for (BoundColumn c : columns) {
    for (int L : Ls) {
      UiBoundRow row;
      row.column = c;
      row.L = L;
      row.value_coarse = bound_integral(c, n, L, gamma, 3);
      row.value_fine = bound_integral(c, n, L, gamma, 9);
      t.rows.push_back(row);
    }
  }
  return t;
}

}  // namespace phg
