#include "phg/gmc.hpp"

#include "phg/budget.hpp"
#include "phg/spectrum.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace phg {

std::string gmc_kind_name(GmcKind kind) {
  switch (kind) {
    case GmcKind::Discrete: return "discrete";
    case GmcKind::SemiDiscrete: return "semidiscrete";
    case GmcKind::ReducedDiscrete: return "reduced-discrete";
    case GmcKind::SpectrallyReducedSemiDiscrete: return "spectrally-reduced-semidiscrete";
  }
  return "";
}

FieldKind field_kind_for(GmcKind kind) {
  switch (kind) {
    case GmcKind::Discrete:
    case GmcKind::SemiDiscrete:
      return FieldKind::Standard;
    case GmcKind::ReducedDiscrete:
      return FieldKind::Reduced;
    case GmcKind::SpectrallyReducedSemiDiscrete:
      return FieldKind::SpectrallyReduced;
  }
  throw std::logic_error("field_kind_for: unknown kind");
}

KernelKind diag_kind_for(GmcKind kind) {
  switch (kind) {
    case GmcKind::Discrete: return {KernelTag::Disc, 0, 0.0};
    case GmcKind::SemiDiscrete: return {KernelTag::SemiDisc, 0, 0.0};
    case GmcKind::ReducedDiscrete: return {KernelTag::Reduced, 0, 0.0};
    case GmcKind::SpectrallyReducedSemiDiscrete: return {KernelTag::SpectRed, 0, 0.0};
  }
  throw std::logic_error("diag_kind_for: unknown kind");
}

double proved_gamma_threshold(GmcKind kind, int n) {
  switch (kind) {
    case GmcKind::Discrete:
    case GmcKind::SemiDiscrete:
      return std::sqrt(n / std::numbers::e);
    case GmcKind::ReducedDiscrete:
      return std::sqrt(static_cast<double>(n));
    case GmcKind::SpectrallyReducedSemiDiscrete:
      return std::sqrt(2.0 * n);
  }
  throw std::logic_error("proved_gamma_threshold: unknown kind");
}

namespace {

bool semidiscrete(GmcKind kind) {
  return kind == GmcKind::SemiDiscrete || kind == GmcKind::SpectrallyReducedSemiDiscrete;
}

void validate(const TorusSpec& spec, const GmcSpec& g) {
  const double critical = std::sqrt(2.0 * spec.n);
  if (!(std::abs(g.gamma) < critical))
    throw std::invalid_argument("gmc: |gamma| must be below sqrt(2n) (subcritical regime)");
  if (semidiscrete(g.kind)) {
    if (g.M < spec.L || g.M % 2 == 0)
      throw std::invalid_argument("gmc: semidiscrete kinds need an odd evaluation grid M >= L");
  }
}

MeasureWeights weights_from_grid(const GridFunction& h, const GmcSpec& g, double diag,
                                 std::uint64_t seed) {
  MeasureWeights m;
  m.n = h.n;
  m.side = h.side;
  m.gamma = g.gamma;
  m.kind = g.kind;
  m.diag_used = diag;
  m.seed = seed;
  const double weight = 1.0 / static_cast<double>(h.size());
  m.atoms = (g.gamma * h.values - 0.5 * g.gamma * g.gamma * diag).exp() * weight;
  return m;
}

}  // namespace

MeasureWeights gmc_weights(const FieldSample& sample, const GmcSpec& g) {
  validate(sample.spec, g);
  if (sample.kind != field_kind_for(g.kind))
    throw std::invalid_argument("gmc_weights: field kind " + field_kind_name(sample.kind) +
                                " does not match measure kind " + gmc_kind_name(g.kind));
  const double diag = kernel_diag(diag_kind_for(g.kind), sample.spec);
  if (semidiscrete(g.kind)) {
    const GridFunction h = extend_field(sample, ExtendMode::Fourier, g.M);
    return weights_from_grid(h, g, diag, sample.seed);
  }
  return weights_from_grid(sample.grid, g, diag, sample.seed);
}

double integrate(const MeasureWeights& m, const GridFunction& f) {
  if (f.n != m.n || f.side != m.side) throw std::invalid_argument("integrate: lattice mismatch");
  return (f.values * m.atoms).sum();
}

MassMomentReport mass_moment_report(const TorusSpec& spec, const GmcSpec& g, int num_seeds,
                                    std::uint64_t seed0) {
  if (num_seeds < 1000) throw std::invalid_argument("mass_moment_report: need num_seeds >= 1000");
  validate(spec, g);
  const FieldKind fk = field_kind_for(g.kind);

  double sum = 0.0, sum2 = 0.0, sum4 = 0.0;
  for (int s = 0; s < num_seeds; ++s) {
    const FieldSample sample = sample_field(spec, seed0 + static_cast<std::uint64_t>(s), fk);
    const double mass = gmc_weights(sample, g).total_mass();
    const double m2 = mass * mass;
    sum += mass;
    sum2 += m2;
    sum4 += m2 * m2;
  }
  const double inv = 1.0 / num_seeds;
  MassMomentReport r;
  r.num_seeds = num_seeds;
  r.mc_mean = sum * inv;
  r.mc_moment2 = sum2 * inv;
  r.se_mean = std::sqrt(std::max(0.0, sum2 * inv - r.mc_mean * r.mc_mean) / num_seeds);
  r.se_moment2 = std::sqrt(std::max(0.0, sum4 * inv - r.mc_moment2 * r.mc_moment2) / num_seeds);
  r.exact_mean = 1.0;
  // off-lattice the spectrally reduced kernel is the truncated continuum
  // kernel at cutoff L, which is how its quadrature moment is computed
  const int M = semidiscrete(g.kind) ? g.M : spec.L;
  const KernelKind moment_kind = g.kind == GmcKind::SpectrallyReducedSemiDiscrete
                                     ? KernelKind{KernelTag::ContTrunc, spec.L, 0.0}
                                     : diag_kind_for(g.kind);
  r.exact_moment2 = second_moment(moment_kind, spec, g.gamma, M);
  r.mean_pass = std::abs(r.mc_mean - r.exact_mean) <= 4.0 * r.se_mean;
  r.moment2_pass = std::abs(r.mc_moment2 - r.exact_moment2) <= 4.0 * r.se_moment2;
  return r;
}

namespace {

// one level of the coupled experiment: the measure's integral of f for the
// given seed, on the lattice for discrete kinds and on the common fine grid
// for semi-discrete kinds
struct LevelContext {
  TorusSpec spec;
  GmcSpec g;
  GridFunction f_eval;  // f evaluated where the measure lives
};

double level_integral(const LevelContext& ctx, std::uint64_t seed) {
  const FieldSample sample = sample_field(ctx.spec, seed, field_kind_for(ctx.g.kind));
  return integrate(gmc_weights(sample, ctx.g), ctx.f_eval);
}

}  // namespace

ConvergenceTable hierarchical_convergence(int n, int a, int l_max, const GmcSpec& g,
                                          const SpectralFunction& f, int K_ref, int num_seeds,
                                          std::uint64_t seed0, int M_common) {
  if (a < 3 || a % 2 == 0) throw std::invalid_argument("hierarchical_convergence: a must be odd >= 3");
  if (l_max < 1) throw std::invalid_argument("hierarchical_convergence: l_max must be >= 1");
  std::uint64_t top = 1;
  for (int l = 0; l < l_max; ++l) top *= static_cast<std::uint64_t>(a);
  if (K_ref == 0) K_ref = 3 * static_cast<int>(top);
  if (M_common == 0) M_common = 3 * K_ref;
  if (M_common % 2 == 0 || M_common < K_ref)
    throw std::invalid_argument("hierarchical_convergence: M_common must be odd and >= K_ref");
  if (2 * f.band_radius() >= K_ref)
    throw std::invalid_argument("hierarchical_convergence: f must be in band for Z^n_{K_ref}");

  // guard the whole experiment before any level allocates; sizes are
  // estimated in floating point so absurd inputs cannot overflow the guard
  const double mc = std::pow(static_cast<double>(M_common), n);
  const double topn = std::pow(static_cast<double>(top), n);
  const double bytes = (mc + topn) * 4.0 * sizeof(double);
  if (bytes > static_cast<double>(budget_bytes()))
    throw BudgetError("hierarchical experiment needs about " + std::to_string(bytes) +
                      " bytes, budget is " + std::to_string(budget_bytes()));

  ConvergenceTable table;
  table.n = n;
  table.a = a;
  table.l_max = l_max;
  table.K_ref = K_ref;
  table.M_common = M_common;
  table.num_seeds = num_seeds;
  table.gamma = g.gamma;
  table.kind = g.kind;

  // reference: GMC of the Fourier projection of the continuum field at
  // cutoff K_ref, realized as the spectrally reduced semi-discrete measure
  // at L = K_ref on the common grid (identical coefficient law, same xi_z)
  LevelContext ref{TorusSpec(n, K_ref),
                   GmcSpec{g.gamma, GmcKind::SpectrallyReducedSemiDiscrete, M_common},
                   {}};
  ref.f_eval = upsample_eval(f, ref.spec, M_common);

  std::vector<LevelContext> levels;
  int L = 1;
  for (int l = 1; l <= l_max; ++l) {
    L *= a;
    LevelContext ctx{TorusSpec(n, L), GmcSpec{g.gamma, g.kind, 0}, {}};
    if (semidiscrete(g.kind)) {
      ctx.g.M = M_common;
      ctx.f_eval = ref.f_eval;
    } else {
      ctx.f_eval = synthesize(alias_fold(f, L), ctx.spec);
    }
    levels.push_back(std::move(ctx));
  }

  std::vector<double> sum(l_max, 0.0), sum_sq(l_max, 0.0);
  double ref_sum = 0.0;
  for (int s = 0; s < num_seeds; ++s) {
    const std::uint64_t seed = seed0 + static_cast<std::uint64_t>(s);
    const double I_ref = level_integral(ref, seed);
    ref_sum += I_ref;
    for (int l = 0; l < l_max; ++l) {
      const double d = std::abs(level_integral(levels[l], seed) - I_ref);
      sum[l] += d;
      sum_sq[l] += d * d;
    }
  }

  L = 1;
  for (int l = 0; l < l_max; ++l) {
    L *= a;
    ConvergenceRow row;
    row.level = l + 1;
    row.L = L;
    row.D = sum[l] / num_seeds;
    row.se = std::sqrt(std::max(0.0, sum_sq[l] / num_seeds - row.D * row.D) / num_seeds);
    row.mean_ref = ref_sum / num_seeds;
    table.rows.push_back(row);
  }
  table.decreasing = table.rows.back().D < table.rows.front().D;
  return table;
}

}  // namespace phg
