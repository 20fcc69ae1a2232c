#include "phg/spectrum.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace phg {

namespace {
constexpr double kPi = std::numbers::pi;
}

double lambda_cont(const FreqVector& z) {
  const double r2 = z.cast<double>().squaredNorm();
  return 4.0 * kPi * kPi * r2;
}

double lambda_disc(int L, const FreqVector& z) {
  double s = 0.0;
  for (int k = 0; k < z.size(); ++k) {
    if (2 * std::abs(z[k]) >= L)
      throw std::invalid_argument(
          "lambda_disc: z outside Z^n_L; fold out-of-band frequencies with alias_fold first");
    const double t = std::sin(kPi * z[k] / L);
    s += t * t;
  }
  return 4.0 * static_cast<double>(L) * L * s;
}

double theta(int L, const FreqVector& z) {
  double p = 1.0;
  for (int k = 0; k < z.size(); ++k) {
    if (z[k] == 0) continue;  // removable singularity, factor 1
    p *= (L / (kPi * z[k])) * std::sin(kPi * z[k] / L);
  }
  return p;
}

double theta_extended(int L, const FreqVector& z) {
  double p = 1.0;
  for (int k = 0; k < z.size(); ++k) {
    if (z[k] == 0) continue;
    if (z[k] % L == 0) return 0.0;  // sin(pi z_k / L) = 0 exactly
    p *= (L / (kPi * z[k])) * std::sin(kPi * z[k] / L);
  }
  return p;
}

double eigenfunction(const FreqVector& z, const Point& x) {
  if (z.size() != x.size()) throw std::invalid_argument("eigenfunction: dimension mismatch");
  const Sign s = canonical_sign(z);
  if (s == Sign::zero) return 1.0;
  const double phase = 2.0 * kPi * z.cast<double>().dot(x);
  return s == Sign::plus ? std::sqrt(2.0) * std::cos(phase) : std::sqrt(2.0) * std::sin(phase);
}

double ground_constant(int n) {
  if (n < 1) throw std::invalid_argument("ground_constant: n must be >= 1");
  // a_n = 2 / (Gamma(n/2) (4 pi)^{n/2}), evaluated through lgamma
  const double ln = std::log(2.0) - std::lgamma(n / 2.0) - (n / 2.0) * std::log(4.0 * kPi);
  return std::exp(ln);
}

double log_partition_constant(const TorusSpec& spec) {
  const double N = static_cast<double>(spec.num_sites());
  double acc = 0.5 * (N - 1.0) * std::log(ground_constant(spec.n) / (2.0 * kPi * N));
  for (const FreqVector& z : frequency_set(spec)) {
    if (canonical_sign(z) == Sign::zero) continue;
    acc += (spec.n / 4.0) * std::log(lambda_disc(spec.L, z));
  }
  return acc;
}

double log_det_ground_transform(const TorusSpec& spec) {
  const double N = static_cast<double>(spec.num_sites());
  double acc = 0.5 * (N - 1.0) * std::log(ground_constant(spec.n));
  for (const FreqVector& z : frequency_set(spec)) {
    if (canonical_sign(z) == Sign::zero) continue;
    acc += (spec.n / 4.0) * std::log(lambda_disc(spec.L, z));
  }
  return acc;
}

double normalization_identity_residual(const TorusSpec& spec) {
  const double N = static_cast<double>(spec.num_sites());
  const double lhs = log_partition_constant(spec);
  const double rhs = log_det_ground_transform(spec) - 0.5 * (N - 1.0) * std::log(2.0 * kPi * N);
  return std::abs(lhs - rhs);
}

}  // namespace phg
