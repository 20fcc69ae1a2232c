#pragma once

#include "phg/torus.hpp"

#include <map>
#include <string>

namespace phg {

struct FreqLess {
  bool operator()(const FreqVector& a, const FreqVector& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    for (int k = 0; k < a.size(); ++k)
      if (a[k] != b[k]) return a[k] < b[k];
    return false;
  }
};

/// Finitely supported real coefficients over the eigenbasis {phi_z}.
struct SpectralFunction {
  int n = 0;
  std::map<FreqVector, double, FreqLess> coeff;

  double at(const FreqVector& z) const {
    auto it = coeff.find(z);
    return it == coeff.end() ? 0.0 : it->second;
  }
  void add(const FreqVector& z, double alpha) { coeff[z] += alpha; }

  /// No z = 0 mass (absent or exactly zero).
  bool grounded() const;

  /// Largest ||z||_inf over the support.
  int band_radius() const;

  static SpectralFunction mode(const FreqVector& z, double alpha = 1.0);
};

/// Real values on a side^n grid, row-major, last axis fastest.
struct GridFunction {
  int n = 0;
  int side = 0;
  Eigen::ArrayXd values;

  std::uint64_t size() const { return static_cast<std::uint64_t>(values.size()); }
  double mean() const { return values.mean(); }
};

/// Budget-checked allocation of a zero grid.
GridFunction make_grid(int n, int side);

/// Values of sum_z alpha_z phi_z on the L-lattice, FFT route. Support must
/// lie in Z^n_L. The real coefficients pack into a Hermitian complex array
/// as c_z = (alpha_z + i alpha_{-z}) / sqrt(2) on the plus half-space,
/// conjugate at -z, and alpha_0 at 0; the grid is the unscaled inverse DFT.
GridFunction synthesize(const SpectralFunction& f, const TorusSpec& spec);

/// Same contract as synthesize, evaluated term by term. O(N |support|);
/// kept as the independent reference for the FFT route.
GridFunction synthesize_direct(const SpectralFunction& f, const TorusSpec& spec);

/// Coefficients <g, phi_z> over Z^n_L; inverse of synthesize.
SpectralFunction analyze(const GridFunction& g, const TorusSpec& spec);

/// Values of the trigonometric polynomial on the finer M-lattice
/// (zero-padded spectrum). M odd, M >= L.
GridFunction upsample_eval(const SpectralFunction& f, const TorusSpec& spec, int M);

/// Action of the cube-averaging operator q_L on an in-band trigonometric
/// polynomial: multiplies each coefficient by theta_{L,z}.
SpectralFunction pwc_project(const SpectralFunction& f, int L);

/// Cube means of a fine grid (L | M): midpoint-rule version of q_L.
GridFunction pwc_project_grid(const GridFunction& g, int L);

/// Replication of lattice values over the cubes of a finer grid (L | M).
GridFunction pwc_extend_grid(const GridFunction& g, int M);

/// L^{-n} sum_v f(v) g(v) on a shared lattice.
double pairing_discrete(const GridFunction& f, const GridFunction& g);

/// The unique in-band coefficient map with the same lattice restriction:
/// every frequency is folded to its representative mod L, with the sign
/// bookkeeping done in the complex basis.
SpectralFunction alias_fold(const SpectralFunction& f, int L);

/// Representative of z mod L with every coordinate in [-(L-1)/2, (L-1)/2].
FreqVector fold_representative(const FreqVector& z, int L);

}  // namespace phg
