#pragma once

#include "phg/fields.hpp"

#include <string>
#include <vector>

namespace phg {

enum class GmcKind { Discrete, SemiDiscrete, ReducedDiscrete, SpectrallyReducedSemiDiscrete };

std::string gmc_kind_name(GmcKind kind);

/// gamma, measure kind, and (for the semi-discrete kinds) the odd
/// evaluation-grid side M.
struct GmcSpec {
  double gamma = 0.0;
  GmcKind kind = GmcKind::Discrete;
  int M = 0;
};

/// Nonnegative atom weights: atom(v) = exp(gamma h(v) - gamma^2/2 diag)
/// times the lattice weight, so the expected total mass is exactly 1.
struct MeasureWeights {
  int n = 0;
  int side = 0;
  double gamma = 0.0;
  GmcKind kind = GmcKind::Discrete;
  double diag_used = 0.0;
  std::uint64_t seed = 0;
  Eigen::ArrayXd atoms;

  double total_mass() const { return atoms.sum(); }
};

/// Expected field kind for a measure kind (reduced measures take reduced
/// fields; mismatches are rejected).
FieldKind field_kind_for(GmcKind kind);

/// Kernel whose constant diagonal normalizes a measure kind.
KernelKind diag_kind_for(GmcKind kind);

/// Largest |gamma| with a proved convergence statement for the kind:
/// sqrt(n/e) for the discrete and semi-discrete measures, sqrt(n) for the
/// reduced discrete one, sqrt(2n) for the spectrally reduced semi-discrete
/// one. Larger values are allowed (up to the subcritical sqrt(2n)) but
/// callers should annotate them.
double proved_gamma_threshold(GmcKind kind, int n);

MeasureWeights gmc_weights(const FieldSample& sample, const GmcSpec& g);

/// sum_v f(v) atom(v) over a shared lattice.
double integrate(const MeasureWeights& m, const GridFunction& f);

struct MassMomentReport {
  int num_seeds = 0;
  double mc_mean = 0.0, se_mean = 0.0, exact_mean = 1.0;
  double mc_moment2 = 0.0, se_moment2 = 0.0, exact_moment2 = 0.0;
  bool mean_pass = false, moment2_pass = false;
};

/// Monte Carlo mean and second moment of the total mass against the exact
/// values (1 and the kernel quadrature), pass/fail at 4 standard errors.
MassMomentReport mass_moment_report(const TorusSpec& spec, const GmcSpec& g, int num_seeds,
                                    std::uint64_t seed0);

struct ConvergenceRow {
  int level = 0;
  int L = 0;
  double D = 0.0;        // mean over seeds of |int f dmu_L - int f dmu_ref|
  double se = 0.0;       // standard error of that mean
  double mean_ref = 0.0; // mean over seeds of int f dmu_ref
};

struct ConvergenceTable {
  int n = 0, a = 0, l_max = 0, K_ref = 0, M_common = 0, num_seeds = 0;
  double gamma = 0.0;
  GmcKind kind = GmcKind::Discrete;
  std::vector<ConvergenceRow> rows;
  bool decreasing = false;  // D_{l_max} < D_1
};

/// Coupled convergence experiment: one shared family xi_z drives every level
/// L = a^l and the reference measure, the GMC of the Fourier-projected
/// continuum field at cutoff K_ref evaluated on a fine common grid
/// (side M_common, defaults to 3 K_ref). K_ref defaults to 3 a^{l_max}.
ConvergenceTable hierarchical_convergence(int n, int a, int l_max, const GmcSpec& g,
                                          const SpectralFunction& f, int K_ref, int num_seeds,
                                          std::uint64_t seed0, int M_common = 0);

}  // namespace phg
