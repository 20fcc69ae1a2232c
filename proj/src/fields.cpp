#include "phg/fields.hpp"

#include "phg/spectrum.hpp"

#include <cmath>
#include <stdexcept>

namespace phg {

std::string field_kind_name(FieldKind kind) {
  switch (kind) {
    case FieldKind::Standard: return "standard";
    case FieldKind::Reduced: return "reduced";
    case FieldKind::SpectrallyReduced: return "spectrally-reduced";
  }
  return "";
}

namespace {

double coefficient_weight(FieldKind kind, const TorusSpec& spec, const FreqVector& z) {
  const double quarter_n = spec.n / 4.0;
  switch (kind) {
    case FieldKind::Standard:
      return std::pow(lambda_disc(spec.L, z), -quarter_n);
    case FieldKind::SpectrallyReduced:
      return std::pow(lambda_cont(z), -quarter_n);
    case FieldKind::Reduced:
      return theta(spec.L, z) * std::pow(lambda_cont(z), -quarter_n);
  }
  throw std::logic_error("coefficient_weight: unknown kind");
}

// two-pass mean removal; the second pass clears the rounding residue of the first
void subtract_mean(Eigen::ArrayXd& v) {
  v -= v.mean();
  v -= v.mean();
}

}  // namespace

FieldSample sample_field(const TorusSpec& spec, std::uint64_t seed, FieldKind kind) {
  const double root_an = std::sqrt(ground_constant(spec.n));
  SpectralFunction coeffs;
  coeffs.n = spec.n;
  for (const FreqVector& z : frequency_set(spec)) {
    if (canonical_sign(z) == Sign::zero) continue;
    coeffs.coeff[z] = coefficient_weight(kind, spec, z) * gaussian_coefficient(seed, z) / root_an;
  }
  FieldSample s{spec, kind, seed, std::move(coeffs), {}};
  s.grid = synthesize(s.coeffs, spec);
  return s;
}

WhiteNoise white_noise(const TorusSpec& spec, std::uint64_t seed) {
  WhiteNoise w{spec, Eigen::ArrayXd(static_cast<Eigen::Index>(spec.num_sites())), false};
  const double sigma = std::sqrt(static_cast<double>(spec.num_sites()));  // variance L^n
  for (std::uint64_t v = 0; v < spec.num_sites(); ++v)
    w.values[static_cast<Eigen::Index>(v)] = sigma * gaussian_site(seed, v);
  return w;
}

void ground(WhiteNoise& noise) {
  subtract_mean(noise.values);
  noise.grounded = true;
}

FieldSample sample_field_white_noise(const TorusSpec& spec, std::uint64_t seed) {
  WhiteNoise noise = white_noise(spec, seed);
  ground(noise);

  GridFunction g;
  g.n = spec.n;
  g.side = spec.L;
  g.values = noise.values;
  SpectralFunction xi_coeffs = analyze(g, spec);

  const double root_an = std::sqrt(ground_constant(spec.n));
  SpectralFunction coeffs;
  coeffs.n = spec.n;
  const double quarter_n = spec.n / 4.0;
  for (const auto& [z, alpha] : xi_coeffs.coeff) {
    if (canonical_sign(z) == Sign::zero) continue;  // grounded
    coeffs.coeff[z] = std::pow(lambda_disc(spec.L, z), -quarter_n) * alpha / root_an;
  }
  FieldSample s{spec, FieldKind::Standard, seed, std::move(coeffs), {}};
  s.grid = synthesize(s.coeffs, spec);
  return s;
}

GridFunction extend_field(const FieldSample& s, ExtendMode mode, int M) {
  switch (mode) {
    case ExtendMode::Fourier:
      if (M == s.spec.L) return s.grid;
      return upsample_eval(s.coeffs, s.spec, M);
    case ExtendMode::Pwc:
      return pwc_extend_grid(s.grid, M);
  }
  throw std::logic_error("extend_field: unknown mode");
}

PairingErrorVariance pairing_error_variance(const SpectralFunction& f, const TorusSpec& spec,
                                            int K_tail) {
  if (!f.grounded()) throw std::invalid_argument("pairing_error_variance: f must be grounded");
  if (2 * f.band_radius() >= K_tail)
    throw std::invalid_argument("pairing_error_variance: support exceeds Z^n_{K_tail}");
  const double an = ground_constant(spec.n);
  const double quarter_n = spec.n / 4.0;
  const double half_n = spec.n / 2.0;

  // folded sums S_z = sum_w alpha_{z + L w} per in-band representative
  std::map<FreqVector, double, FreqLess> folded;
  for (const auto& [z, alpha] : f.coeff) folded[fold_representative(z, spec.L)] += alpha;

  PairingErrorVariance out;
  for (const auto& [z, S] : folded) {
    if (canonical_sign(z) == Sign::zero) continue;  // no grounded component
    const double alpha = f.at(z);
    const double wc = std::pow(lambda_cont(z), -quarter_n);
    const double wd = std::pow(lambda_disc(spec.L, z), -quarter_n);
    const double term = wc * alpha - wd * S;
    const double own = (wc - wd) * alpha;
    out.inband += own * own / an;
    out.alias += (term * term - own * own) / an;
  }
  for (const auto& [z, alpha] : f.coeff) {
    if (2 * z.cwiseAbs().maxCoeff() >= spec.L)
      out.tail += std::pow(lambda_cont(z), -half_n) * alpha * alpha / an;
  }
  out.total = out.inband + out.alias + out.tail;
  return out;
}

HsErrorVariance hs_error_variance(const TorusSpec& spec, FieldKind kind, ExtendMode mode,
                                  double s, int K) {
  if (K < 3 || K % 2 == 0) throw std::invalid_argument("hs_error_variance: K must be odd >= 3");
  const double an = ground_constant(spec.n);
  const double quarter_n = spec.n / 4.0;
  HsErrorVariance out;
  TorusSpec window(spec.n, K);
  for (const FreqVector& z : frequency_set(window)) {
    if (canonical_sign(z) == Sign::zero) continue;
    const double sobolev = std::pow(z.cast<double>().squaredNorm(), -s);
    const double own = std::pow(lambda_cont(z), -quarter_n);
    const bool in_band = 2 * z.cwiseAbs().maxCoeff() < spec.L;

    if (mode == ExtendMode::Fourier) {
      if (in_band) {
        const double d = own - coefficient_weight(kind, spec, z);
        out.approx += sobolev * d * d / an;
      } else {
        out.tail += sobolev * own * own / an;
      }
      continue;
    }

    // piecewise-constant extension: the phi_z component reads the lattice
    // restriction of phi_z off the field, scaled by the cube average of the
    // continuum mode
    const double th = theta_extended(spec.L, z);
    std::map<FreqVector, double, FreqLess> load;  // xi index -> coefficient
    load[z] += own;
    bool reaches = false;
    if (th != 0.0) {
      const SpectralFunction folded = alias_fold(SpectralFunction::mode(z), spec.L);
      for (const auto& [w, t] : folded.coeff) {
        if (t == 0.0 || canonical_sign(w) == Sign::zero) continue;  // grounded field
        load[w] -= th * t * coefficient_weight(kind, spec, w);
        reaches = true;
      }
    }
    double var = 0.0;
    for (const auto& [w, c] : load) var += c * c;
    if (reaches)
      out.approx += sobolev * var / an;
    else
      out.tail += sobolev * var / an;
  }
  out.total = out.approx + out.tail;
  return out;
}

KernelKind covariance_kind(FieldKind kind) {
  switch (kind) {
    case FieldKind::Standard: return {KernelTag::Disc, 0, 0.0};
    case FieldKind::Reduced: return {KernelTag::Reduced, 0, 0.0};
    case FieldKind::SpectrallyReduced: return {KernelTag::SpectRed, 0, 0.0};
  }
  throw std::logic_error("covariance_kind: unknown kind");
}

namespace {

template <typename Sampler>
EmpiricalCovariance covariance_against_profile(const TorusSpec& spec, const KernelKind& kind,
                                               int num_seeds, Sampler&& draw) {
  if (num_seeds < 100) throw std::invalid_argument("empirical_covariance: need num_seeds >= 100");
  const std::uint64_t N = spec.num_sites();

  // precompute circular shift tables: shift[u][v] = flat index of v + u,
  // and the index of -u for reading kappa(d - u) off the even profile
  const std::vector<Eigen::VectorXi> sites = [&] {
    std::vector<Eigen::VectorXi> s;
    s.reserve(N);
    for (detail::MultiIndex it(spec.n, spec.L); !it.done(); it.next()) s.push_back(*it);
    return s;
  }();
  std::vector<std::vector<std::uint32_t>> shift(N, std::vector<std::uint32_t>(N));
  std::vector<std::uint32_t> neg_of(N);
  Eigen::VectorXi tmp(spec.n);
  for (std::uint64_t u = 0; u < N; ++u) {
    for (std::uint64_t v = 0; v < N; ++v) {
      for (int k = 0; k < spec.n; ++k) tmp[k] = (sites[v][k] + sites[u][k]) % spec.L;
      shift[u][v] = static_cast<std::uint32_t>(grid_index(tmp, spec.L));
    }
    for (int k = 0; k < spec.n; ++k) tmp[k] = (spec.L - sites[u][k]) % spec.L;
    neg_of[u] = static_cast<std::uint32_t>(grid_index(tmp, spec.L));
  }

  Eigen::ArrayXd est = Eigen::ArrayXd::Zero(static_cast<Eigen::Index>(N));
  for (int s = 0; s < num_seeds; ++s) {
    const GridFunction sample = draw(s);
    const Eigen::ArrayXd& h = sample.values;
    for (std::uint64_t u = 0; u < N; ++u) {
      double acc = 0.0;
      const auto& row = shift[u];
      for (std::uint64_t v = 0; v < N; ++v)
        acc += h[static_cast<Eigen::Index>(v)] * h[static_cast<Eigen::Index>(row[v])];
      est[static_cast<Eigen::Index>(u)] += acc;
    }
  }
  est /= static_cast<double>(num_seeds) * static_cast<double>(N);

  const KernelProfile prof = kernel_profile(kind, spec, spec.L);
  const Eigen::ArrayXd& kap = prof.profile.values;

  // Var of the translation-averaged product at lag u (Isserlis):
  //   (1/N) sum_d [ kappa(d)^2 + kappa(d-u) kappa(d+u) ]
  EmpiricalCovariance out;
  out.estimate.n = out.zscores.n = out.stderrs.n = spec.n;
  out.estimate.side = out.zscores.side = out.stderrs.side = spec.L;
  out.estimate.values = est;
  out.zscores.values.resize(static_cast<Eigen::Index>(N));
  out.stderrs.values.resize(static_cast<Eigen::Index>(N));
  const double kap_sq_sum = (kap * kap).sum();
  for (std::uint64_t u = 0; u < N; ++u) {
    double cross = 0.0;
    const auto& plus_u = shift[u];
    const auto& minus_u = shift[neg_of[u]];
    for (std::uint64_t d = 0; d < N; ++d)
      cross += kap[static_cast<Eigen::Index>(plus_u[d])] *
               kap[static_cast<Eigen::Index>(minus_u[d])];
    const double var = (kap_sq_sum + cross) / static_cast<double>(N);
    const double se = std::sqrt(var / static_cast<double>(num_seeds));
    out.stderrs.values[static_cast<Eigen::Index>(u)] = se;
    out.zscores.values[static_cast<Eigen::Index>(u)] =
        (est[static_cast<Eigen::Index>(u)] - kap[static_cast<Eigen::Index>(u)]) / se;
  }
  out.max_abs_z = out.zscores.values.abs().maxCoeff();
  return out;
}

}  // namespace

EmpiricalCovariance empirical_covariance(const TorusSpec& spec, FieldKind kind, int num_seeds,
                                         std::uint64_t seed0) {
  return covariance_against_profile(spec, covariance_kind(kind), num_seeds, [&](int s) {
    return sample_field(spec, seed0 + static_cast<std::uint64_t>(s), kind).grid;
  });
}

EmpiricalCovariance empirical_covariance_white_noise(const TorusSpec& spec, int num_seeds,
                                                     std::uint64_t seed0) {
  return covariance_against_profile(spec, KernelKind{KernelTag::Disc, 0, 0.0}, num_seeds,
                                    [&](int s) {
                                      return sample_field_white_noise(
                                                 spec, seed0 + static_cast<std::uint64_t>(s))
                                          .grid;
                                    });
}

}  // namespace phg
