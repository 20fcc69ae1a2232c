#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace phg {

/// Integer frequency vector z in Z^n.
using FreqVector = Eigen::VectorXi;

/// Point on the continuous torus, coordinates in [0,1)^n (wrapped on use).
using Point = Eigen::VectorXd;

/// Dimension n and odd lattice side L of the discrete torus T^n_L.
/// Construction validates L odd >= 3, n >= 1 and that L^n fits in uint64.
struct TorusSpec {
  int n;
  int L;

  TorusSpec(int n_, int L_);

  std::uint64_t num_sites() const { return sites_; }
  int half_band() const { return (L - 1) / 2; }

 private:
  std::uint64_t sites_;
};

enum class Sign { zero, plus, minus };

/// Lattice point stored as integer numerators in [0, L) to keep indexing
/// free of float drift.
struct LatticePoint {
  Eigen::VectorXi num;
  int L = 0;

  Point position() const;
  std::uint64_t flat_index() const;
};

/// All z with ||z||_inf < L/2, row-major ascending (last coordinate fastest).
/// Exactly L^n vectors, closed under negation, includes z = 0.
std::vector<FreqVector> frequency_set(const TorusSpec& spec);

/// Geodesic distance on T^n: Euclidean norm of per-coordinate wrapped
/// differences. Inputs outside [0,1) are reduced mod 1.
double torus_distance(const Point& x, const Point& y);

/// Split of Z^n \ {0} into a half-space and its negation: plus iff the
/// first nonzero coordinate is positive.
Sign canonical_sign(const FreqVector& z);

/// The unique lattice point v with x in v + [-1/(2L), 1/(2L))^n.
LatticePoint cube_index(const Point& x, const TorusSpec& spec);

/// Row-major flat index of a multi-index with coordinates in [0, side).
std::uint64_t grid_index(const Eigen::VectorXi& idx, int side);

/// x reduced to [0,1) coordinate-wise.
Point wrap_point(const Point& x);

namespace detail {

/// Odometer over {0,...,side-1}^n, last axis fastest (row-major order).
class MultiIndex {
 public:
  MultiIndex(int n, int side) : idx_(Eigen::VectorXi::Zero(n)), side_(side), done_(n == 0) {}

  bool done() const { return done_; }
  const Eigen::VectorXi& operator*() const { return idx_; }

  void next() {
    for (int k = idx_.size() - 1; k >= 0; --k) {
      if (++idx_[k] < side_) return;
      idx_[k] = 0;
    }
    done_ = true;
  }

 private:
  Eigen::VectorXi idx_;
  int side_;
  bool done_;
};

}  // namespace detail

}  // namespace phg
