#include "phg/transform.hpp"

#include "phg/budget.hpp"
#include "phg/fft.hpp"
#include "phg/spectrum.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace phg {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

std::uint64_t pow_u64(int base, int exp) {
  std::uint64_t r = 1;
  for (int k = 0; k < exp; ++k) r *= static_cast<std::uint64_t>(base);
  return r;
}

// flat index of z mod side (componentwise), row-major
std::uint64_t mod_index(const FreqVector& z, int side) {
  std::uint64_t flat = 0;
  for (int k = 0; k < z.size(); ++k) {
    int m = z[k] % side;
    if (m < 0) m += side;
    flat = flat * static_cast<std::uint64_t>(side) + static_cast<std::uint64_t>(m);
  }
  return flat;
}

void require_in_band(const SpectralFunction& f, int L) {
  for (const auto& [z, alpha] : f.coeff) {
    (void)alpha;
    if (2 * z.cwiseAbs().maxCoeff() >= L)
      throw std::invalid_argument(
          "spectral support exceeds Z^n_L; fold out-of-band frequencies with alias_fold first");
  }
}

// pack real-basis coefficients into a Hermitian complex spectrum of the
// given side; frequencies are placed at (z mod side)
void pack_complex(const SpectralFunction& f, int side, detail::CArray& spectrum) {
  for (const auto& [z, alpha] : f.coeff) {
    switch (canonical_sign(z)) {
      case Sign::zero:
        spectrum[0] += alpha;
        break;
      case Sign::plus:
        spectrum[mod_index(z, side)] += alpha / kSqrt2;
        spectrum[mod_index(-z, side)] += alpha / kSqrt2;
        break;
      case Sign::minus:
        // phi_z = (Phi_z - Phi_{-z}) / (sqrt(2) i)
        spectrum[mod_index(z, side)] += std::complex<double>(0.0, -alpha / kSqrt2);
        spectrum[mod_index(-z, side)] += std::complex<double>(0.0, alpha / kSqrt2);
        break;
    }
  }
}

GridFunction synth_on_grid(const SpectralFunction& f, int n, int side) {
  ensure_budget(pow_u64(side, n) * (sizeof(std::complex<double>) + sizeof(double)));
  const std::uint64_t total = pow_u64(side, n);
  detail::CArray spectrum(total, std::complex<double>(0.0, 0.0));
  pack_complex(f, side, spectrum);
  detail::fft_nd(spectrum, n, side, /*inverse=*/true);
  GridFunction g;
  g.n = n;
  g.side = side;
  g.values.resize(static_cast<Eigen::Index>(total));
  for (std::uint64_t j = 0; j < total; ++j) g.values[static_cast<Eigen::Index>(j)] = spectrum[j].real();
  return g;
}

}  // namespace

bool SpectralFunction::grounded() const {
  const FreqVector zero = FreqVector::Zero(n);
  auto it = coeff.find(zero);
  return it == coeff.end() || it->second == 0.0;
}

int SpectralFunction::band_radius() const {
  int r = 0;
  for (const auto& [z, alpha] : coeff) {
    (void)alpha;
    r = std::max(r, z.cwiseAbs().maxCoeff());
  }
  return r;
}

SpectralFunction SpectralFunction::mode(const FreqVector& z, double alpha) {
  SpectralFunction f;
  f.n = static_cast<int>(z.size());
  f.coeff[z] = alpha;
  return f;
}

GridFunction make_grid(int n, int side) {
  std::uint64_t total = 1;
  for (int k = 0; k < n; ++k) total *= static_cast<std::uint64_t>(side);
  ensure_budget(total * sizeof(double));
  GridFunction g;
  g.n = n;
  g.side = side;
  g.values = Eigen::ArrayXd::Zero(static_cast<Eigen::Index>(total));
  return g;
}

GridFunction synthesize(const SpectralFunction& f, const TorusSpec& spec) {
  if (f.n != spec.n) throw std::invalid_argument("synthesize: dimension mismatch");
  require_in_band(f, spec.L);
  return synth_on_grid(f, spec.n, spec.L);
}

GridFunction synthesize_direct(const SpectralFunction& f, const TorusSpec& spec) {
  if (f.n != spec.n) throw std::invalid_argument("synthesize_direct: dimension mismatch");
  require_in_band(f, spec.L);
  GridFunction g = make_grid(spec.n, spec.L);
  std::uint64_t j = 0;
  for (detail::MultiIndex it(spec.n, spec.L); !it.done(); it.next(), ++j) {
    const Point v = (*it).cast<double>() / static_cast<double>(spec.L);
    double s = 0.0;
    for (const auto& [z, alpha] : f.coeff) s += alpha * eigenfunction(z, v);
    g.values[static_cast<Eigen::Index>(j)] = s;
  }
  return g;
}

SpectralFunction analyze(const GridFunction& g, const TorusSpec& spec) {
  if (g.n != spec.n || g.side != spec.L)
    throw std::invalid_argument("analyze: grid size does not match the declared spec");
  const std::uint64_t total = spec.num_sites();
  detail::CArray spectrum(total);
  for (std::uint64_t j = 0; j < total; ++j)
    spectrum[j] = std::complex<double>(g.values[static_cast<Eigen::Index>(j)], 0.0);
  detail::fft_nd(spectrum, spec.n, spec.L, /*inverse=*/false);
  const double scale = 1.0 / static_cast<double>(total);

  SpectralFunction f;
  f.n = spec.n;
  for (const FreqVector& z : frequency_set(spec)) {
    const Sign s = canonical_sign(z);
    if (s == Sign::minus) continue;  // handled together with the plus partner
    const std::complex<double> c = spectrum[mod_index(z, spec.L)] * scale;
    if (s == Sign::zero) {
      f.coeff[z] = c.real();
    } else {
      f.coeff[z] = kSqrt2 * c.real();
      f.coeff[-z] = kSqrt2 * c.imag();
    }
  }
  return f;
}

GridFunction upsample_eval(const SpectralFunction& f, const TorusSpec& spec, int M) {
  if (M % 2 == 0 || M < spec.L)
    throw std::invalid_argument("upsample_eval: M must be odd and >= L");
  if (f.n != spec.n) throw std::invalid_argument("upsample_eval: dimension mismatch");
  require_in_band(f, spec.L);
  return synth_on_grid(f, spec.n, M);
}

SpectralFunction pwc_project(const SpectralFunction& f, int L) {
  for (const auto& [z, alpha] : f.coeff) {
    (void)alpha;
    if (2 * z.cwiseAbs().maxCoeff() >= L)
      throw std::invalid_argument(
          "pwc_project: support exceeds Z^n_L; cube-average general inputs with "
          "pwc_project_grid");
  }
  SpectralFunction out;
  out.n = f.n;
  for (const auto& [z, alpha] : f.coeff) out.coeff[z] = theta(L, z) * alpha;
  return out;
}

GridFunction pwc_project_grid(const GridFunction& g, int L) {
  if (L < 3 || L % 2 == 0 || g.side % L != 0 || g.side % 2 == 0)
    throw std::invalid_argument("pwc_project_grid: need odd L dividing the odd grid side");
  const int M = g.side;
  const int r = M / L;
  // per-axis cube assignment of fine index j: nearest lattice numerator mod L
  std::vector<int> cube_of(M);
  for (int j = 0; j < M; ++j)
    cube_of[j] = static_cast<int>((std::lround(std::floor(static_cast<double>(L) * j / M + 0.5))) % L);

  GridFunction out = make_grid(g.n, L);
  std::uint64_t j = 0;
  Eigen::VectorXi coarse(g.n);
  for (detail::MultiIndex it(g.n, M); !it.done(); it.next(), ++j) {
    for (int k = 0; k < g.n; ++k) coarse[k] = cube_of[(*it)[k]];
    out.values[static_cast<Eigen::Index>(grid_index(coarse, L))] +=
        g.values[static_cast<Eigen::Index>(j)];
  }
  double cells = 1.0;
  for (int k = 0; k < g.n; ++k) cells *= r;
  out.values /= cells;
  return out;
}

GridFunction pwc_extend_grid(const GridFunction& g, int M) {
  const int L = g.side;
  if (M % L != 0 || M % 2 == 0) throw std::invalid_argument("pwc_extend_grid: need L | M, M odd");
  std::vector<int> cube_of(M);
  for (int j = 0; j < M; ++j)
    cube_of[j] = static_cast<int>((std::lround(std::floor(static_cast<double>(L) * j / M + 0.5))) % L);
  GridFunction out = make_grid(g.n, M);
  std::uint64_t j = 0;
  Eigen::VectorXi coarse(g.n);
  for (detail::MultiIndex it(g.n, M); !it.done(); it.next(), ++j) {
    for (int k = 0; k < g.n; ++k) coarse[k] = cube_of[(*it)[k]];
    out.values[static_cast<Eigen::Index>(j)] =
        g.values[static_cast<Eigen::Index>(grid_index(coarse, L))];
  }
  return out;
}

double pairing_discrete(const GridFunction& f, const GridFunction& g) {
  if (f.n != g.n || f.side != g.side)
    throw std::invalid_argument("pairing_discrete: lattice mismatch");
  return (f.values * g.values).sum() / static_cast<double>(f.size());
}

FreqVector fold_representative(const FreqVector& z, int L) {
  const int h = (L - 1) / 2;
  FreqVector w(z.size());
  for (int k = 0; k < z.size(); ++k) {
    int m = (z[k] + h) % L;
    if (m < 0) m += L;
    w[k] = m - h;
  }
  return w;
}

SpectralFunction alias_fold(const SpectralFunction& f, int L) {
  using Cplx = std::complex<double>;
  std::map<FreqVector, Cplx, FreqLess> folded;
  auto add = [&](const FreqVector& z, Cplx c) { folded[fold_representative(z, L)] += c; };

  for (const auto& [z, alpha] : f.coeff) {
    switch (canonical_sign(z)) {
      case Sign::zero:
        add(z, Cplx(alpha, 0.0));
        break;
      case Sign::plus:
        add(z, Cplx(alpha / kSqrt2, 0.0));
        add(-z, Cplx(alpha / kSqrt2, 0.0));
        break;
      case Sign::minus:
        add(z, Cplx(0.0, -alpha / kSqrt2));
        add(-z, Cplx(0.0, alpha / kSqrt2));
        break;
    }
  }

  SpectralFunction out;
  out.n = f.n;
  for (const auto& [w, c] : folded) {
    switch (canonical_sign(w)) {
      case Sign::zero:
        out.coeff[w] = c.real();
        break;
      case Sign::plus:
        out.coeff[w] = kSqrt2 * c.real();
        break;
      case Sign::minus: {
        // read the value off the plus partner; Hermitian symmetry of the
        // folded map puts the sine coefficient in its imaginary part
        const auto it = folded.find(-w);
        out.coeff[w] = it == folded.end() ? 0.0 : kSqrt2 * it->second.imag();
        break;
      }
    }
  }
  return out;
}

}  // namespace phg
