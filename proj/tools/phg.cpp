// phg — polyharmonic Gaussian fields and their LQG measures on discrete tori.
//
// Subcommands: sample, kernel, gmc, converge-field, converge-measure, bound,
// verify. Grids go to the phg-grid format (JSON header line + binary64
// payload); tables go to RFC 4180 CSV with an optional JSON mirror.
// Exit codes: 0 ok, 1 check failure, 2 usage error, 3 resource guard.

#include "CLI11.hpp"

#include "phg/budget.hpp"
#include "phg/fields.hpp"
#include "phg/gmc.hpp"
#include "phg/grid_io.hpp"
#include "phg/kernels.hpp"
#include "phg/spectrum.hpp"
#include "phg/verify.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using phg::json;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<int> parse_int_list(const std::string& csv) {
  std::vector<int> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stoi(tok));
  if (out.empty()) throw CLI::ValidationError("empty list");
  return out;
}

// test functions: `phi:z1,z2,...` is a unit eigenmode, `file:path` loads a
// JSON coefficient map {"n":..,"coeffs":[{"z":[..],"alpha":..},..]}
phg::SpectralFunction parse_test_function(const std::string& text, int n) {
  if (text.rfind("phi:", 0) == 0) {
    const std::vector<int> zs = parse_int_list(text.substr(4));
    if (static_cast<int>(zs.size()) != n)
      throw CLI::ValidationError("--f phi: needs exactly n components");
    phg::FreqVector z(n);
    for (int k = 0; k < n; ++k) z[k] = zs[k];
    return phg::SpectralFunction::mode(z);
  }
  if (text.rfind("file:", 0) == 0) {
    std::ifstream in(text.substr(5));
    if (!in) throw CLI::ValidationError("cannot open test function file");
    json j = json::parse(in);
    phg::SpectralFunction f;
    f.n = j.at("n").get<int>();
    if (f.n != n) throw CLI::ValidationError("--f file: dimension mismatch");
    for (const auto& entry : j.at("coeffs")) {
      phg::FreqVector z(f.n);
      const auto& zj = entry.at("z");
      if (static_cast<int>(zj.size()) != f.n)
        throw CLI::ValidationError("--f file: bad frequency entry");
      for (int k = 0; k < f.n; ++k) z[k] = zj[k].get<int>();
      f.add(z, entry.at("alpha").get<double>());
    }
    return f;
  }
  throw CLI::ValidationError("--f expects phi:z1,z2,... or file:path");
}

phg::FieldKind parse_field_kind(const std::string& name) {
  if (name == "standard") return phg::FieldKind::Standard;
  if (name == "reduced") return phg::FieldKind::Reduced;
  if (name == "spectrally-reduced") return phg::FieldKind::SpectrallyReduced;
  throw CLI::ValidationError("unknown field kind: " + name);
}

phg::GmcKind parse_gmc_kind(const std::string& name) {
  if (name == "discrete") return phg::GmcKind::Discrete;
  if (name == "semidiscrete") return phg::GmcKind::SemiDiscrete;
  if (name == "reduced-discrete") return phg::GmcKind::ReducedDiscrete;
  if (name == "spectrally-reduced-semidiscrete") return phg::GmcKind::SpectrallyReducedSemiDiscrete;
  throw CLI::ValidationError("unknown measure kind: " + name);
}

phg::KernelTag parse_kernel_tag(const std::string& name) {
  for (phg::KernelTag tag :
       {phg::KernelTag::Disc, phg::KernelTag::SemiDisc, phg::KernelTag::SpectRed,
        phg::KernelTag::Reduced, phg::KernelTag::Plus, phg::KernelTag::Enhanced,
        phg::KernelTag::Natural, phg::KernelTag::Flat, phg::KernelTag::ContTrunc,
        phg::KernelTag::GreenPower})
    if (phg::kernel_tag_name(tag) == name) return tag;
  throw CLI::ValidationError("unknown kernel kind: " + name);
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << j.dump(2) << '\n';
}

// ---- subcommand runners ----

struct SampleArgs {
  int n = 1, L = 3;
  std::uint64_t seed = 0;
  std::string kind = "standard";
  std::string out, pgm;
};

int run_sample(const SampleArgs& a) {
  phg::TorusSpec spec(a.n, a.L);
  const phg::FieldSample s = phg::sample_field(spec, a.seed, parse_field_kind(a.kind));
  json meta;
  meta["field"] = phg::field_kind_name(s.kind);
  phg::write_grid(a.out, s.grid, "field:" + phg::field_kind_name(s.kind), a.seed, a.L, meta);
  if (!a.pgm.empty()) phg::write_pgm(a.pgm, s.grid);
  std::cout << "seed " << a.seed << " lattice-mean-residual " << fmt(s.grid.values.mean())
            << "\n";
  return 0;
}

struct KernelArgs {
  std::string kind = "disc";
  int n = 1, L = 3, M = 0, K = 0;
  double s = 0.0;
  std::string out, pgm;
};

int run_kernel(const KernelArgs& a) {
  phg::KernelKind kind{parse_kernel_tag(a.kind), a.K, a.s};
  phg::TorusSpec spec(a.n, a.L);
  const int M = a.M > 0 ? a.M : (kind.tag == phg::KernelTag::ContTrunc && a.K > 0 ? a.K : a.L);
  const phg::KernelProfile p = phg::kernel_profile(kind, spec, M);
  json meta;
  meta["diag"] = p.diag;
  meta["law"] = p.law;
  if (kind.tag == phg::KernelTag::Flat)
    meta["tail_bound"] = phg::flat_tail_bound(a.n, a.L, p.kind.cutoff);
  phg::write_grid(a.out, p.profile, "kernel:" + a.kind, std::nullopt, a.L, meta);
  json sidecar;
  sidecar["format"] = "phg-kernel";
  sidecar["version"] = 1;
  sidecar["kind"] = a.kind;
  sidecar["n"] = a.n;
  sidecar["L"] = a.L;
  sidecar["M"] = M;
  if (p.kind.cutoff > 0) sidecar["K"] = p.kind.cutoff;
  if (p.kind.exponent > 0) sidecar["s"] = p.kind.exponent;
  sidecar["diag"] = p.diag;
  sidecar["law"] = p.law;
  if (kind.tag == phg::KernelTag::Flat)
    sidecar["tail_bound"] = phg::flat_tail_bound(a.n, a.L, p.kind.cutoff);
  write_json(a.out + ".json", sidecar);
  if (!a.pgm.empty()) phg::write_pgm(a.pgm, p.profile);
  std::cout << "diag " << fmt(p.diag) << "\n";
  return 0;
}

struct GmcArgs {
  int n = 1, L = 3, M = 0;
  std::uint64_t seed = 0;
  double gamma = 0.5;
  std::string kind = "discrete";
  std::string out, pgm;
};

// the paper's regime symbols, surfaced verbatim: convergence is proved for
// |gamma| below gamma_* (kind dependent), subcriticality ends at
// gamma^* = sqrt(2n)
void warn_gamma_regime(phg::GmcKind kind, int n, double gamma) {
  const double proved = phg::proved_gamma_threshold(kind, n);
  if (std::abs(gamma) >= proved)
    std::cerr << "warning: |gamma| = " << std::abs(gamma)
              << " is beyond the proved regime gamma_* = " << proved << " for kind "
              << phg::gmc_kind_name(kind) << " (subcritical up to gamma^* = "
              << std::sqrt(2.0 * n) << ")\n";
}

int run_gmc(const GmcArgs& a) {
  phg::TorusSpec spec(a.n, a.L);
  phg::GmcSpec g{a.gamma, parse_gmc_kind(a.kind), a.M};
  warn_gamma_regime(g.kind, a.n, a.gamma);
  const phg::FieldSample s = phg::sample_field(spec, a.seed, phg::field_kind_for(g.kind));
  const phg::MeasureWeights m = phg::gmc_weights(s, g);
  phg::GridFunction atoms;
  atoms.n = m.n;
  atoms.side = m.side;
  atoms.values = m.atoms;
  json meta;
  meta["gamma"] = a.gamma;
  meta["gamma_star_proved"] = phg::proved_gamma_threshold(g.kind, a.n);
  meta["gamma_star_subcritical"] = std::sqrt(2.0 * a.n);
  meta["diag"] = m.diag_used;
  meta["total_mass"] = m.total_mass();
  phg::write_grid(a.out, atoms, "gmc:" + a.kind, a.seed, a.L, meta);
  if (!a.pgm.empty()) phg::write_pgm(a.pgm, atoms);
  std::cout << "total-mass " << fmt(m.total_mass()) << "\n";
  return 0;
}

struct ConvergeFieldArgs {
  int n = 1;
  std::string f = "phi:1";
  std::string Ls = "3,9,27";
  int K_tail = 0;
  double hs_s = 0.0;
  int hs_K = 0;
  std::string out_csv, out_json;
};

int run_converge_field(const ConvergeFieldArgs& a) {
  const std::vector<int> Ls = parse_int_list(a.Ls);
  phg::SpectralFunction f = parse_test_function(a.f, a.n);
  int K_tail = a.K_tail;
  if (K_tail == 0) K_tail = 2 * f.band_radius() + 3;
  const bool with_hs = a.hs_s > 0.0;
  int hs_K = a.hs_K;
  if (with_hs && hs_K == 0) {
    hs_K = 3 * *std::max_element(Ls.begin(), Ls.end());
    if (hs_K % 2 == 0) hs_K += 1;
  }
  json rows = json::array();
  std::vector<std::vector<std::string>> csv_rows;
  for (int L : Ls) {
    phg::TorusSpec spec(a.n, L);
    const auto v = phg::pairing_error_variance(f, spec, K_tail);
    json r;
    r["L"] = L;
    r["total"] = v.total;
    r["inband"] = v.inband;
    r["alias"] = v.alias;
    r["tail"] = v.tail;
    std::vector<std::string> row{std::to_string(L), fmt(v.total), fmt(v.inband), fmt(v.alias),
                                 fmt(v.tail)};
    if (with_hs) {
      const auto hf = phg::hs_error_variance(spec, phg::FieldKind::Standard,
                                             phg::ExtendMode::Fourier, a.hs_s, hs_K);
      const auto hp = phg::hs_error_variance(spec, phg::FieldKind::Standard,
                                             phg::ExtendMode::Pwc, a.hs_s, hs_K);
      r["hs_fourier"] = hf.total;
      r["hs_pwc"] = hp.total;
      r["hs_truncation_K"] = hs_K;
      row.push_back(fmt(hf.total));
      row.push_back(fmt(hp.total));
    }
    rows.push_back(r);
    csv_rows.push_back(row);
  }
  if (!a.out_csv.empty()) {
    phg::CsvWriter csv(a.out_csv);
    std::vector<std::string> head{"L", "total", "inband", "alias", "tail"};
    if (with_hs) {
      head.push_back("hs_fourier");
      head.push_back("hs_pwc");
    }
    csv.row(head);
    for (const auto& r : csv_rows) csv.row(r);
  }
  if (!a.out_json.empty()) {
    json j;
    j["format"] = "phg-converge-field";
    j["version"] = 1;
    j["n"] = a.n;
    j["f"] = a.f;
    j["K_tail"] = K_tail;
    if (with_hs) {
      j["hs_s"] = a.hs_s;
      j["hs_truncation_K"] = hs_K;
      j["hs_note"] = "H^{-s} distances are truncated sums over ||z||_inf < K/2";
    }
    j["rows"] = rows;
    write_json(a.out_json, j);
  }
  for (const auto& r : csv_rows) std::cout << r[0] << " " << r[1] << "\n";
  return 0;
}

struct ConvergeMeasureArgs {
  int n = 1, a = 3, l_max = 2, K_ref = 0, M = 0, seeds = 256;
  std::uint64_t seed0 = 0;
  double gamma = 0.4;
  std::string kind = "discrete";
  std::string f = "phi:1";
  std::string out_csv, out_json;
};

int run_converge_measure(const ConvergeMeasureArgs& a) {
  phg::GmcSpec g{a.gamma, parse_gmc_kind(a.kind), 0};
  warn_gamma_regime(g.kind, a.n, a.gamma);
  const phg::SpectralFunction f = parse_test_function(a.f, a.n);
  const phg::ConvergenceTable t =
      phg::hierarchical_convergence(a.n, a.a, a.l_max, g, f, a.K_ref, a.seeds, a.seed0, a.M);
  if (!a.out_csv.empty()) {
    phg::CsvWriter csv(a.out_csv);
    csv.row({"level", "L", "D", "se", "mean_ref"});
    for (const auto& r : t.rows)
      csv.row({std::to_string(r.level), std::to_string(r.L), fmt(r.D), fmt(r.se),
               fmt(r.mean_ref)});
  }
  if (!a.out_json.empty()) {
    json j;
    j["format"] = "phg-converge-measure";
    j["version"] = 1;
    j["n"] = t.n;
    j["a"] = t.a;
    j["l_max"] = t.l_max;
    j["K_ref"] = t.K_ref;
    j["M_common"] = t.M_common;
    j["gamma"] = t.gamma;
    j["gamma_star_proved"] = phg::proved_gamma_threshold(t.kind, t.n);
    j["gamma_star_subcritical"] = std::sqrt(2.0 * t.n);
    j["kind"] = phg::gmc_kind_name(t.kind);
    j["num_seeds"] = t.num_seeds;
    j["decreasing"] = t.decreasing;
    j["rows"] = json::array();
    for (const auto& r : t.rows) {
      json row;
      row["level"] = r.level;
      row["L"] = r.L;
      row["D"] = r.D;
      row["se"] = r.se;
      row["mean_ref"] = r.mean_ref;
      j["rows"].push_back(row);
    }
    write_json(a.out_json, j);
  }
  for (const auto& r : t.rows) std::cout << "level " << r.level << " L " << r.L << " D " << fmt(r.D) << "\n";
  std::cout << (t.decreasing ? "decreasing" : "not-decreasing") << "\n";
  return 0;
}

struct BoundArgs {
  int n = 2;
  double gamma = 0.5;
  std::string kinds = "semidisc,flat,plus-enhanced";
  std::string Ls = "3,9,27";
  std::string out_csv, out_json;
};

int run_bound(const BoundArgs& a) {
  std::vector<phg::BoundColumn> cols;
  {
    std::stringstream ss(a.kinds);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (tok == "semidisc") cols.push_back(phg::BoundColumn::SemiDisc);
      else if (tok == "flat") cols.push_back(phg::BoundColumn::FlatExt);
      else if (tok == "plus-enhanced") cols.push_back(phg::BoundColumn::PlusEnhanced);
      else throw CLI::ValidationError("unknown bound kind: " + tok);
    }
  }
  const phg::UiBoundTable t = phg::ui_bound_table(a.n, a.gamma, cols, parse_int_list(a.Ls));
  if (!a.out_csv.empty()) {
    phg::CsvWriter csv(a.out_csv);
    csv.row({"kind", "L", "integral_M3L", "integral_M9L"});
    for (const auto& r : t.rows)
      csv.row({phg::bound_column_name(r.column), std::to_string(r.L), fmt(r.value_coarse),
               fmt(r.value_fine)});
  }
  if (!a.out_json.empty()) {
    json j;
    j["format"] = "phg-bound";
    j["version"] = 1;
    j["n"] = a.n;
    j["gamma"] = t.gamma;
    j["gamma_low_sqrt_n_over_e"] = t.gamma_low;
    j["gamma_high_sqrt_2n"] = t.gamma_high;
    j["beyond_proved_regime"] = t.beyond_proved_regime;
    j["rows"] = json::array();
    for (const auto& r : t.rows) {
      json row;
      row["kind"] = phg::bound_column_name(r.column);
      row["L"] = r.L;
      row["integral_M3L"] = r.value_coarse;
      row["integral_M9L"] = r.value_fine;
      j["rows"].push_back(row);
    }
    write_json(a.out_json, j);
  }
  std::cout << "gamma " << fmt(t.gamma) << " thresholds sqrt(n/e)=" << fmt(t.gamma_low)
            << " sqrt(2n)=" << fmt(t.gamma_high)
            << (t.beyond_proved_regime ? " (beyond proved regime)" : "") << "\n";
  for (const auto& r : t.rows)
    std::cout << phg::bound_column_name(r.column) << " L " << r.L << " " << fmt(r.value_fine)
              << "\n";
  return 0;
}

struct VerifyArgs {
  std::string suite = "all";
  std::string out_json;
};

int run_verify(const VerifyArgs& a) {
  const std::vector<phg::Check> checks = phg::run_suite(a.suite);
  json j;
  j["format"] = "phg-verify";
  j["version"] = 1;
  j["suite"] = a.suite;
  j["checks"] = json::array();
  for (const phg::Check& c : checks) {
    json row;
    row["name"] = c.name;
    row["value"] = c.value;
    row["tolerance"] = c.tolerance;
    row["verdict"] = c.pass ? "pass" : "fail";
    j["checks"].push_back(row);
    std::cout << (c.pass ? "[pass] " : "[FAIL] ") << c.name << " value=" << fmt(c.value)
              << " tolerance=" << fmt(c.tolerance) << "\n";
  }
  const bool ok = phg::all_pass(checks);
  j["passed"] = ok;
  if (!a.out_json.empty()) write_json(a.out_json, j);
  std::cout << (ok ? "all checks passed" : "checks FAILED") << "\n";
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"polyharmonic Gaussian fields and LQG measures on discrete tori"};
  app.require_subcommand(1);

  SampleArgs sa;
  auto* sample = app.add_subcommand("sample", "draw a field sample and write its grid");
  sample->add_option("--n", sa.n, "dimension")->required();
  sample->add_option("--L", sa.L, "odd lattice side")->required();
  sample->add_option("--seed", sa.seed, "noise seed")->required();
  sample->add_option("--kind", sa.kind, "standard|reduced|spectrally-reduced");
  sample->add_option("--out", sa.out, "output grid file")->required();
  sample->add_option("--pgm", sa.pgm, "optional 16-bit PGM heatmap");

  KernelArgs ka;
  auto* kernel = app.add_subcommand("kernel", "write a covariance profile grid");
  kernel->add_option("--kind", ka.kind,
                     "disc|semidisc|spectred|reduced|plus|enhanced|natural|flat|cont-trunc|green-power")
      ->required();
  kernel->add_option("--n", ka.n, "dimension")->required();
  kernel->add_option("--L", ka.L, "odd lattice side");
  kernel->add_option("--M", ka.M, "odd evaluation grid (defaults to L)");
  kernel->add_option("--K", ka.K, "odd cutoff (cont-trunc, flat)");
  kernel->add_option("--s", ka.s, "exponent (green-power)");
  kernel->add_option("--out", ka.out, "output grid file")->required();
  kernel->add_option("--pgm", ka.pgm, "optional 16-bit PGM heatmap");

  GmcArgs ga;
  auto* gmc = app.add_subcommand("gmc", "draw a field and write its LQG measure atoms");
  gmc->add_option("--n", ga.n, "dimension")->required();
  gmc->add_option("--L", ga.L, "odd lattice side")->required();
  gmc->add_option("--seed", ga.seed, "noise seed")->required();
  gmc->add_option("--gamma", ga.gamma, "intermittency parameter")->required();
  gmc->add_option("--kind", ga.kind,
                  "discrete|semidiscrete|reduced-discrete|spectrally-reduced-semidiscrete");
  gmc->add_option("--M", ga.M, "odd evaluation grid (semidiscrete kinds)");
  gmc->add_option("--out", ga.out, "output grid file")->required();
  gmc->add_option("--pgm", ga.pgm, "optional 16-bit PGM heatmap");

  ConvergeFieldArgs cfa;
  auto* cf = app.add_subcommand("converge-field",
                                "exact pairing-error variance table over lattice sizes");
  cf->add_option("--n", cfa.n, "dimension")->required();
  cf->add_option("--f", cfa.f, "test function (phi:z1,... or file:path)")->required();
  cf->add_option("--Ls", cfa.Ls, "comma-separated odd lattice sides")->required();
  cf->add_option("--K-tail", cfa.K_tail, "declared band bound for f");
  cf->add_option("--hs-s", cfa.hs_s, "also report truncated H^{-s} extension errors");
  cf->add_option("--hs-K", cfa.hs_K, "truncation window for the H^{-s} columns");
  cf->add_option("--out-csv", cfa.out_csv, "CSV output path");
  cf->add_option("--out-json", cfa.out_json, "JSON output path");

  ConvergeMeasureArgs cma;
  auto* cm = app.add_subcommand("converge-measure",
                                "coupled hierarchical measure-convergence experiment");
  cm->add_option("--n", cma.n, "dimension")->required();
  cm->add_option("--a", cma.a, "odd hierarchy base")->required();
  cm->add_option("--lmax", cma.l_max, "number of levels")->required();
  cm->add_option("--gamma", cma.gamma, "intermittency parameter")->required();
  cm->add_option("--kind", cma.kind, "measure kind");
  cm->add_option("--f", cma.f, "test function")->required();
  cm->add_option("--K-ref", cma.K_ref, "reference cutoff (default 3 a^lmax)");
  cm->add_option("--M", cma.M, "common evaluation grid (default 3 K-ref)");
  cm->add_option("--seeds", cma.seeds, "number of common-noise seeds");
  cm->add_option("--seed0", cma.seed0, "first seed");
  cm->add_option("--out-csv", cma.out_csv, "CSV output path");
  cm->add_option("--out-json", cma.out_json, "JSON output path");

  BoundArgs ba;
  auto* bound = app.add_subcommand("bound", "uniform-integrability bound table");
  bound->add_option("--n", ba.n, "dimension")->required();
  bound->add_option("--gamma", ba.gamma, "intermittency parameter")->required();
  bound->add_option("--kinds", ba.kinds, "semidisc,flat,plus-enhanced subset");
  bound->add_option("--Ls", ba.Ls, "comma-separated odd lattice sides")->required();
  bound->add_option("--out-csv", ba.out_csv, "CSV output path");
  bound->add_option("--out-json", ba.out_json, "JSON output path");

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "run the invariant check suites");
  verify->add_option("--suite", va.suite, "identities|sampling|gmc|all");
  verify->add_option("--out-json", va.out_json, "JSON report path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (sample->parsed()) return run_sample(sa);
    if (kernel->parsed()) return run_kernel(ka);
    if (gmc->parsed()) return run_gmc(ga);
    if (cf->parsed()) return run_converge_field(cfa);
    if (cm->parsed()) return run_converge_measure(cma);
    if (bound->parsed()) return run_bound(ba);
    if (verify->parsed()) return run_verify(va);
  } catch (const phg::BudgetError& e) {
    std::cerr << "resource guard: " << e.what() << "\n";
    return 3;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
