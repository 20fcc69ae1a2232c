#pragma once

#include "phg/transform.hpp"

#include <string>
#include <vector>

namespace phg {

enum class KernelTag {
  Disc,        // k_L: (1/a_n) lambda_{L,z}^{-n/2} on the lattice
  SemiDisc,    // k_{L,sharp}: same coefficients on a finer grid
  SpectRed,    // k_L^{-o}: (1/a_n) lambda_z^{-n/2}, z in Z^n_L \ {0}
  Reduced,     // k_L^-: (1/a_n) theta^2 lambda_z^{-n/2}
  Plus,        // k_L^+: (1/a_n) theta^{-2} lambda_{L,z}^{-n/2}
  Enhanced,    // k_{+,L}: twofold cube average of Plus
  Natural,     // k_{o,L}: twofold cube average of SpectRed
  Flat,        // k_{flat,L}: twofold cube average of the truncated continuum kernel
  ContTrunc,   // k^{(K)}: (1/a_n) lambda_z^{-n/2} over Z^n_K \ {0}
  GreenPower,  // lambda_{L,z}^{-s}, no 1/a_n factor
};

struct KernelKind {
  KernelTag tag;
  int cutoff = 0;        // K for ContTrunc / Flat (odd)
  double exponent = 0.0; // s for GreenPower (> 0)
};

/// Translation-invariant covariance profile kappa(u) = k(x, x+u) sampled on
/// an M-grid, together with its constant diagonal value.
struct KernelProfile {
  KernelKind kind;
  int n = 0;
  int L = 0;
  int M = 0;
  GridFunction profile;
  double diag = 0.0;
  std::string law;  // human-readable coefficient law
};

KernelProfile kernel_profile(const KernelKind& kind, const TorusSpec& spec, int M);

double kernel_diag(const KernelKind& kind, const TorusSpec& spec);

/// The defining coefficient law: kappa(u) = sum_z c_z cos(2 pi z.u). For the
/// cube-averaged kinds these are the coefficients of the lattice restriction.
std::map<FreqVector, double, FreqLess> kernel_cos_coefficients(const KernelKind& kind,
                                                               const TorusSpec& spec);

std::string kernel_tag_name(KernelTag tag);

/// Summable tail bound for the Flat truncation at cutoff K (see the profile
/// law): sum over ||z||_inf >= K/2 of theta^2 lambda_z^{-n/2} / a_n.
double flat_tail_bound(int n, int L, int K);

struct LogDivergenceRow {
  double r_lo = 0.0, r_hi = 0.0;
  double max_dev = 0.0;
  std::uint64_t count = 0;
};

struct LogDivergenceResult {
  double sup = 0.0;  // empirical constant C over d(0,u) >= r_min
  std::vector<LogDivergenceRow> table;
};

/// Deviation of the truncated continuum kernel from log(1/d(0,u)) over the
/// M-grid, away from the diagonal.
LogDivergenceResult log_divergence_estimate(int n, int K, int M, double r_min);

/// Quadrature value of the second moment of the total GMC mass:
/// (1/M^n) sum_u exp(gamma^2 kappa(u)). Exact for lattice kinds at M = L.
double second_moment(const KernelKind& kind, const TorusSpec& spec, double gamma, int M);

enum class BoundColumn {
  SemiDisc,      // integrand k_{L,sharp}(0,y)
  FlatExt,       // integrand k_{L,flat}(0,y): lattice values replicated over cubes
  PlusEnhanced,  // integrand k_{+,L}(0,y)
};

struct UiBoundRow {
  BoundColumn column;
  int L = 0;
  double value_coarse = 0.0;  // refinement M = 3 L
  double value_fine = 0.0;    // refinement M = 9 L
};

struct UiBoundTable {
  double gamma = 0.0;
  double gamma_low = 0.0;   // sqrt(n/e)
  double gamma_high = 0.0;  // sqrt(2n)
  bool beyond_proved_regime = false;
  std::vector<UiBoundRow> rows;
};

std::string bound_column_name(BoundColumn c);

UiBoundTable ui_bound_table(int n, double gamma, const std::vector<BoundColumn>& columns,
                            const std::vector<int>& Ls);

}  // namespace phg
