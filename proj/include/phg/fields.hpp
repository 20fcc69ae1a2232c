#pragma once

#include "phg/kernels.hpp"
#include "phg/noise.hpp"
#include "phg/transform.hpp"

#include <string>

namespace phg {

enum class FieldKind { Standard, Reduced, SpectrallyReduced };

std::string field_kind_name(FieldKind kind);

/// One realization of a polyharmonic field on the lattice: the coefficient
/// representation and the synthesized grid, both grounded.
struct FieldSample {
  TorusSpec spec;
  FieldKind kind;
  std::uint64_t seed = 0;
  SpectralFunction coeffs;  // support Z^n_L \ {0}
  GridFunction grid;        // synthesize(coeffs) on the L-lattice
};

/// iid N(0, L^n) values on the lattice; grounding subtracts the mean.
struct WhiteNoise {
  TorusSpec spec;
  Eigen::ArrayXd values;
  bool grounded = false;
};

/// Coefficient weights per field kind:
///   Standard            a_n^{-1/2} lambda_{L,z}^{-n/4}
///   SpectrallyReduced   a_n^{-1/2} lambda_z^{-n/4}
///   Reduced             a_n^{-1/2} theta_{L,z} lambda_z^{-n/4}
/// applied to the shared normals xi_z = gaussian_coefficient(seed, z).
FieldSample sample_field(const TorusSpec& spec, std::uint64_t seed, FieldKind kind);

WhiteNoise white_noise(const TorusSpec& spec, std::uint64_t seed);
void ground(WhiteNoise& noise);

/// The white-noise route: ground Xi, apply the n/4 power of the grounded
/// Green operator spectrally, scale by a_n^{-1/2}. Same law as
/// sample_field(Standard) but an independent stream.
FieldSample sample_field_white_noise(const TorusSpec& spec, std::uint64_t seed);

enum class ExtendMode { Fourier, Pwc };

/// Fourier: the trigonometric polynomial through the lattice values on the
/// M-grid. Pwc: replication over cubes.
GridFunction extend_field(const FieldSample& s, ExtendMode mode, int M);

struct PairingErrorVariance {
  double total = 0.0;
  double inband = 0.0;  // pure eigenvalue mismatch, own coefficient only
  double alias = 0.0;   // excess from out-of-band coefficients folding in
  double tail = 0.0;    // energy beyond the band
};

/// Exact Gaussian variance of <h,f>_{T^n} - <h_L,f>_{T^n_L}:
///   (1/a_n) [ sum_{z in Z^n_L \ 0} (lambda_z^{-n/4} alpha_z
///             - lambda_{L,z}^{-n/4} sum_w alpha_{z+Lw})^2
///           + sum_{||z||_inf >= L/2} lambda_z^{-n/2} alpha_z^2 ].
/// Deterministic; no sampling. f must be grounded with support in Z^n_{K_tail}.
PairingErrorVariance pairing_error_variance(const SpectralFunction& f, const TorusSpec& spec,
                                            int K_tail);

/// Exact truncated H^{-s} error of an extended lattice field against the
/// continuum field, E || h - ext(h_L) ||^2_{H^{-s}} summed over
/// 0 < ||z||_inf < K/2 with |z|^{-2s} weights. The Fourier extension couples
/// only in band; the piecewise-constant extension couples each continuum
/// mode to its alias class through the cube-averaging factors.
struct HsErrorVariance {
  double total = 0.0;
  double approx = 0.0;  // modes the extension actually reaches
  double tail = 0.0;    // truncated continuum energy the extension misses
};

HsErrorVariance hs_error_variance(const TorusSpec& spec, FieldKind kind, ExtendMode mode,
                                  double s, int K);

struct EmpiricalCovariance {
  GridFunction estimate;
  GridFunction zscores;
  GridFunction stderrs;
  double max_abs_z = 0.0;
};

/// Translation-averaged covariance estimate over num_seeds independent
/// samples, z-scored against the closed-form profile with the exact Gaussian
/// fourth-moment variance of the estimator.
EmpiricalCovariance empirical_covariance(const TorusSpec& spec, FieldKind kind, int num_seeds,
                                         std::uint64_t seed0);

/// Same comparison for fields drawn through the white-noise route, against
/// the same closed-form profile as the Standard kind.
EmpiricalCovariance empirical_covariance_white_noise(const TorusSpec& spec, int num_seeds,
                                                     std::uint64_t seed0);

/// Closed-form covariance profile matching a field kind.
KernelKind covariance_kind(FieldKind kind);

}  // namespace phg
