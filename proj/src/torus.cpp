#include "phg/torus.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace phg {

TorusSpec::TorusSpec(int n_, int L_) : n(n_), L(L_) {
  if (n < 1) throw std::invalid_argument("TorusSpec: dimension n must be >= 1");
  if (L < 3 || L % 2 == 0)
    throw std::invalid_argument("TorusSpec: lattice side L must be odd and >= 3");
  sites_ = 1;
  const std::uint64_t cap = std::numeric_limits<std::uint64_t>::max();
  for (int k = 0; k < n; ++k) {
    if (sites_ > cap / static_cast<std::uint64_t>(L))
      throw std::invalid_argument("TorusSpec: L^n overflows uint64");
    sites_ *= static_cast<std::uint64_t>(L);
  }
}

Point LatticePoint::position() const {
  return num.cast<double>() / static_cast<double>(L);
}

std::uint64_t LatticePoint::flat_index() const { return grid_index(num, L); }

std::vector<FreqVector> frequency_set(const TorusSpec& spec) {
  const int h = spec.half_band();
  std::vector<FreqVector> out;
  out.reserve(spec.num_sites());
  for (detail::MultiIndex it(spec.n, spec.L); !it.done(); it.next()) {
    FreqVector z = (*it).array() - h;
    out.push_back(std::move(z));
  }
  return out;
}

Point wrap_point(const Point& x) {
  Point w = x;
  for (int k = 0; k < w.size(); ++k) {
    w[k] -= std::floor(w[k]);
    if (w[k] >= 1.0) w[k] = 0.0;  // guard against floor rounding at 1-eps
  }
  return w;
}

double torus_distance(const Point& x, const Point& y) {
  if (x.size() != y.size()) throw std::invalid_argument("torus_distance: dimension mismatch");
  const Point a = wrap_point(x), b = wrap_point(y);
  double s = 0.0;
  for (int k = 0; k < a.size(); ++k) {
    const double d = std::abs(a[k] - b[k]);
    const double w = std::min(d, 1.0 - d);
    s += w * w;
  }
  return std::sqrt(s);
}

Sign canonical_sign(const FreqVector& z) {
  for (int k = 0; k < z.size(); ++k) {
    if (z[k] > 0) return Sign::plus;
    if (z[k] < 0) return Sign::minus;
  }
  return Sign::zero;
}

LatticePoint cube_index(const Point& x, const TorusSpec& spec) {
  if (x.size() != spec.n) throw std::invalid_argument("cube_index: dimension mismatch");
  const Point w = wrap_point(x);
  LatticePoint v;
  v.L = spec.L;
  v.num.resize(spec.n);
  for (int k = 0; k < spec.n; ++k) {
    // round half up: the cube [-1/(2L), 1/(2L)) is half-open on the right
    long r = static_cast<long>(std::floor(spec.L * w[k] + 0.5));
    v.num[k] = static_cast<int>(r % spec.L);
  }
  return v;
}

std::uint64_t grid_index(const Eigen::VectorXi& idx, int side) {
  std::uint64_t flat = 0;
  for (int k = 0; k < idx.size(); ++k)
    flat = flat * static_cast<std::uint64_t>(side) + static_cast<std::uint64_t>(idx[k]);
  return flat;
}

}  // namespace phg
