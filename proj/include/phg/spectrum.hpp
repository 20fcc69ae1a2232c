#pragma once

#include "phg/torus.hpp"

namespace phg {

/// Continuum Laplacian eigenvalue (2 pi |z|)^2.
double lambda_cont(const FreqVector& z);

/// Discrete Laplacian eigenvalue 4 L^2 sum_k sin^2(pi z_k / L).
/// Requires ||z||_inf < L/2; aliasing must go through alias_fold.
double lambda_disc(int L, const FreqVector& z);

/// Cube-averaging multiplier prod_k (L/(pi z_k)) sin(pi z_k / L), with unit
/// factor at z_k = 0. Lies in [(2/pi)^n, 1] for in-band z.
double theta(int L, const FreqVector& z);

/// Same product for arbitrary z in Z^n. Vanishes when some z_k is a nonzero
/// multiple of L; equals theta(L,z) in band.
double theta_extended(int L, const FreqVector& z);

/// Real eigenbasis: 1 at z = 0, sqrt(2) cos(2 pi z.x) on the plus half-space,
/// sqrt(2) sin(2 pi z.x) on the minus half-space.
double eigenfunction(const FreqVector& z, const Point& x);

/// Ground-state normalization a_n = 2 / (Gamma(n/2) (4 pi)^{n/2}).
double ground_constant(int n);

/// ln c_n with c_n = (a_n/(2 pi N))^{(N-1)/2} prod_z lambda_{L,z}^{n/4}.
/// Accumulated in log space; safe for N up to at least 3^10.
double log_partition_constant(const TorusSpec& spec);

/// ln det of the grounded map h -> sqrt(a_n) (-Laplacian_L)^{n/4} h,
/// i.e. (N-1)/2 ln a_n + (n/4) sum_z ln lambda_{L,z}.
double log_det_ground_transform(const TorusSpec& spec);

/// | ln c_n - ln det + (N-1)/2 ln(2 pi N) |; vanishes up to rounding.
double normalization_identity_residual(const TorusSpec& spec);

}  // namespace phg
