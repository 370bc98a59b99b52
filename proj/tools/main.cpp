// bdf: command-line front end for the BDF vacuum-polarization toolkit.
// Subcommands: dress, uehling, renorm, scf-run, nrhf, furry-check, inequalities.
// Every run writes a manifest JSON next to its primary output; outputs are
// byte-identical for a fixed seed regardless of --threads.

#include "bdf/cauchy.hpp"
#include "bdf/clifford.hpp"
#include "bdf/dressed_dirac.hpp"
#include "bdf/energy.hpp"
#include "bdf/errors.hpp"
#include "bdf/fixed_point.hpp"
#include "bdf/inequalities.hpp"
#include "bdf/io.hpp"
#include "bdf/nonrel_hf.hpp"
#include "bdf/rng.hpp"
#include "bdf/vacuum_polarization.hpp"
#include "bdf/version.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

using nlohmann::json;
using bdf::io::fmt_double;

namespace {

struct RunContext {
  std::string subcommand;
  std::map<std::string, std::string> config;
  std::vector<std::string> outputs;
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

  void set(const std::string& k, const std::string& v) { config[k] = v; }
  void set(const std::string& k, double v) { config[k] = fmt_double(v); }
  void set(const std::string& k, std::uint64_t v) { config[k] = std::to_string(v); }
  void set(const std::string& k, int v) { config[k] = std::to_string(v); }

  void write_manifest(const std::string& primary_output) {
    json m;
    m["schema_version"] = bdf::schema_version;
    m["tool"] = {{"name", "bdf"}, {"version", bdf::version}};
    m["subcommand"] = subcommand;
    m["config"] = config;
    m["outputs"] = outputs;
    m["wall_time_s"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::ofstream f(primary_output + ".manifest.json", std::ios::binary);
    f << m.dump(2) << "\n";
  }
};

void write_json_file(const std::string& path, const json& j) {
  std::ofstream f(path, std::ios::binary);
  f << j.dump(2) << "\n";
}

// numbers are serialized through fmt_double to keep outputs byte-stable
json jnum(double v) { return json::parse(fmt_double(v)); }

bdf::NuSpec parse_nu(const std::string& s) {
  if (s == "none" || s.empty()) return bdf::NuSpec::none();
  if (s.rfind("gaussian:", 0) == 0) {
    double charge = 1.0, width = 1.0;
    std::stringstream ss(s.substr(9));
    std::string item;
    while (std::getline(ss, item, ',')) {
      auto eq = item.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = item.substr(0, eq);
      const double val = std::stod(item.substr(eq + 1));
      if (key == "charge") charge = val;
      if (key == "width") width = val;
    }
    return bdf::NuSpec::gaussian(charge, width);
  }
  throw CLI::ValidationError("--nu-profile", "expected 'none' or 'gaussian:charge=Z,width=w'");
}

int run_dress(double alpha, double lambda, std::size_t nodes, double tol, int max_iter,
              double mixing, const std::string& out, RunContext& ctx) {
  bdf::PhysicalParams p;
  p.alpha = alpha;
  p.lambda = lambda;
  if (!p.in_regime())
    std::cerr << "warning: outside the small-coupling regime (alpha=" << alpha
              << ", L=" << p.L() << ")\n";
  bdf::DressOptions o;
  o.nodes = nodes;
  o.tol = tol;
  o.max_iter = max_iter;
  o.mixing = mixing;
  auto d = bdf::dress(p, o);

  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < d.grid().size(); ++i) {
    const double pp = d.grid()[i];
    rows.push_back({fmt_double(pp), fmt_double(d.g0_nodes()[i]),
                    fmt_double(d.g1_nodes()[i]), fmt_double(d.e_script(pp))});
  }
  bdf::io::write_csv(out, {"p", "g0", "g1", "E_script"}, rows);
  ctx.outputs.push_back(out);

  json side;
  side["schema_version"] = bdf::schema_version;
  side["alpha"] = jnum(alpha);
  side["lambda"] = jnum(lambda);
  side["iterations"] = d.iterations();
  side["residual"] = jnum(d.residual());
  side["m"] = jnum(d.m());
  write_json_file(out + ".json", side);
  ctx.outputs.push_back(out + ".json");
  ctx.write_manifest(out);
  return 0;
}

int run_uehling(double alpha, double lambda, int jmax, double kmax, double tol,
                std::uint64_t seed, const std::string& out, RunContext& ctx) {
  bdf::PhysicalParams p;
  p.alpha = alpha;
  p.lambda = lambda;
  auto d = bdf::dress(p);
  bdf::vpol::VpolOptions vo;
  vo.jmax = jmax;
  vo.tol = tol;
  vo.seed = seed;
  auto rf = bdf::vpol::assemble(d, p, vo);

  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < rf.kgrid.size(); ++i) {
    if (kmax > 0.0 && rf.kgrid[i] > kmax) break;
    rows.push_back({fmt_double(rf.kgrid[i]), fmt_double(rf.B[i]), fmt_double(rf.f[i]),
                    fmt_double(rf.F[i])});
  }
  bdf::io::write_csv(out, {"k", "B", "f", "F"}, rows);
  ctx.outputs.push_back(out);

  json side;
  side["schema_version"] = bdf::schema_version;
  side["L"] = jnum(rf.L);
  side["f0"] = jnum(rf.f0());
  side["Z3"] = jnum(rf.z3);
  // Theorem-density convention (f carries one less power of alpha there)
  side["Z3_alt_convention"] = jnum(rf.z3_alt);
  side["a_screen"] = jnum(rf.f0() / (1.0 + rf.f0()));
  side["F_L1_norm"] = jnum(rf.checkF_L1);
  write_json_file(out + ".json", side);
  ctx.outputs.push_back(out + ".json");
  ctx.write_manifest(out);
  return 0;
}

int run_renorm(const std::vector<double>& alphas, const std::vector<double>& lambdas,
               int M, double Z, int jmax, std::uint64_t seed, const std::string& out,
               RunContext& ctx) {
  bdf::fp::RenormTableOptions o;
  o.M = M;
  o.Z = Z;
  o.jmax = jmax;
  o.seed = seed;
  auto rows = bdf::fp::renorm_table(alphas, lambdas, o);
  std::vector<std::vector<std::string>> csv;
  for (const auto& r : rows) {
    csv.push_back({fmt_double(r.alpha), fmt_double(r.lambda), fmt_double(r.L),
                   fmt_double(r.f0), fmt_double(r.z3_formula),
                   r.neutral ? "neutral" : fmt_double(r.z3_quadrature),
                   fmt_double(r.tol)});
  }
  bdf::io::write_csv(out, {"alpha", "lambda", "L", "f0", "Z3_formula", "Z3_quadrature", "tol"},
                     csv);
  ctx.outputs.push_back(out);
  ctx.write_manifest(out);
  return 0;
}

int run_scf(double alpha, double lambda, int M, const std::string& nu_profile, int order,
            double tol, int max_iter, int grid_n, double extent, double cutoff,
            int nquad, int rank_cap, std::uint64_t seed, const std::string& out,
            RunContext& ctx) {
  bdf::PhysicalParams p;
  p.alpha = alpha;
  p.lambda = lambda;
  p.M = M;
  p.nu = parse_nu(nu_profile);
  auto d = bdf::dress(p);
  bdf::vpol::VpolOptions vo;
  vo.jmax = 0; // the rho update needs B only
  auto rf = bdf::vpol::assemble(d, p, vo);

  bdf::ops::SpatialGrid g(grid_n, extent, cutoff);
  bdf::ops::GridDirac gd(g, d);
  auto N = bdf::fp::make_electron_projector(g, gd, M, seed);
  auto nu = (p.nu.kind == bdf::NuSpec::Kind::Gaussian)
                ? bdf::ops::gaussian_density(g, p.nu.charge, p.nu.width)
                : bdf::ops::Density::zero(g);

  bdf::fp::ScfOptions so;
  so.order = order;
  so.tol = tol;
  so.max_iter = max_iter;
  so.cauchy.nquad = nquad;
  so.cauchy.rank_cap = std::size_t(rank_cap);
  so.cauchy.seed = seed;
  auto st = bdf::fp::scf_solve(p, g, gd, rf, std::move(N), std::move(nu), so);

  std::ofstream lines(out + ".jsonl", std::ios::binary);
  for (const auto& rec : st.history) {
    json j;
    j["iter"] = rec.iter;
    j["residual"] = jnum(rec.residual);
    j["ratio"] = jnum(rec.ratio);
    j["total_charge"] = jnum(rec.total_charge);
    lines << j.dump() << "\n";
  }
  lines.close();
  ctx.outputs.push_back(out + ".jsonl");
  bdf::io::write_kernels(out + ".state.bin", g, {&st.N, &st.gamma});
  ctx.outputs.push_back(out + ".state.bin");

  json side;
  side["schema_version"] = bdf::schema_version;
  side["converged"] = st.converged;
  side["iterations"] = int(st.history.size());
  side["tr0_gamma"] = jnum(bdf::ops::blockwise_trace(g, gd, st.gamma));
  side["total_charge"] = jnum(st.history.empty() ? 0.0 : st.history.back().total_charge);
  write_json_file(out + ".json", side);
  ctx.outputs.push_back(out + ".json");
  ctx.write_manifest(out + ".jsonl");
  return st.converged ? 0 : 2;
}

int run_nrhf(double Z, double M, double a, const std::string& from_renorm,
             const std::string& basis_str, double tol, const std::string& out,
             RunContext& ctx) {
  if (!from_renorm.empty()) {
    std::ifstream f(from_renorm);
    if (!f) throw std::runtime_error("cannot open " + from_renorm);
    json j;
    f >> j;
    a = j.at("a_screen").get<double>();
  }
  bdf::nrhf::NrOptions o;
  o.tol = tol;
  if (!basis_str.empty()) {
    std::stringstream ss(basis_str);
    char comma;
    ss >> o.basis.a0 >> comma >> o.basis.beta >> comma >> o.basis.n;
    if (ss.fail()) throw CLI::ValidationError("--basis", "expected a0,beta,n");
  }
  auto st = bdf::nrhf::scf_minimize(Z, M, a, o);

  json side;
  side["schema_version"] = bdf::schema_version;
  side["energy"] = jnum(st.energy);
  side["iterations"] = st.iterations;
  side["a"] = jnum(a);
  json eps = json::array();
  for (int s = 0; s < 2; ++s)
    for (double e : st.eps[s]) eps.push_back(jnum(e));
  side["eps"] = eps;
  write_json_file(out + ".json", side);
  ctx.outputs.push_back(out + ".json");

  auto prof = bdf::nrhf::orbital_profiles(st, o);
  std::vector<std::string> header{"r"};
  for (std::size_t c = 0; prof.size() && c < prof[0].phi.size(); ++c)
    header.push_back("phi" + std::to_string(c + 1));
  std::vector<std::vector<std::string>> rows;
  for (const auto& pt : prof) {
    std::vector<std::string> row{fmt_double(pt.r)};
    for (double v : pt.phi) row.push_back(fmt_double(v));
    rows.push_back(std::move(row));
  }
  bdf::io::write_csv(out + ".csv", header, rows);
  ctx.outputs.push_back(out + ".csv");
  ctx.write_manifest(out + ".json");
  return 0;
}

int run_furry(std::uint64_t trials, std::uint64_t seed, int max_len,
              const std::string& out, RunContext& ctx) {
  auto ex = bdf::clifford::furry_exhaustive(max_len);

  // randomized grading-composition trials over products of pure elements
  std::uint64_t grading_violations = 0;
  const auto& basis = bdf::clifford::make_dirac_basis();
  const std::array<const bdf::clifford::DiracElement*, 4> gens = {
      &basis.alpha1, &basis.alpha2, &basis.alpha3, &basis.beta};
  for (std::uint64_t t = 0; t < trials; ++t) {
    bdf::rng::Counter rc{seed, t, 0};
    const int len = 1 + int(rc.next_double() * 6.0);
    std::vector<bdf::clifford::DiracElement> word;
    int parity = 0;
    for (int i = 0; i < len; ++i) {
      word.push_back(*gens[std::uint64_t(rc.next_double() * 4.0) & 3]);
      parity ^= 1;
    }
    auto wt = bdf::clifford::furry_trace_check(word);
    const bool odd = (parity == 1);
    if (odd != (wt.grading == bdf::clifford::Grading::Odd)) ++grading_violations;
    if (odd && std::abs(wt.trace) > 1e-12) ++grading_violations;
  }

  json rep;
  rep["schema_version"] = bdf::schema_version;
  rep["max_len"] = max_len;
  rep["words_checked"] = ex.words_checked;
  rep["odd_violations"] = ex.odd_violations;
  rep["random_trials"] = trials;
  rep["grading_violations"] = grading_violations;
  const bool ok = (ex.odd_violations == 0 && grading_violations == 0);
  rep["ok"] = ok;
  if (!out.empty()) {
    write_json_file(out, rep);
    ctx.outputs.push_back(out);
    ctx.write_manifest(out);
  } else {
    std::cout << rep.dump(2) << "\n";
  }
  return ok ? 0 : 2;
}

int run_inequalities(std::uint64_t samples, std::uint64_t seed, const std::string& out,
                     RunContext& ctx) {
  bdf::ops::InequalityOptions o;
  o.samples = samples;
  o.seed = seed;
  auto rep = bdf::ops::inequality_suite(o);
  json j;
  j["schema_version"] = bdf::schema_version;
  j["samples"] = rep.samples;
  j["kato_worst_ratio"] = jnum(rep.kato_worst);
  j["hardy_worst_ratio"] = jnum(rep.hardy_worst);
  j["sobolev6_constant"] = jnum(rep.sobolev6);
  j["sobolev4_constant"] = jnum(rep.sobolev4);
  j["sobolev3_constant"] = jnum(rep.sobolev3);
  j["vphi_constant"] = jnum(rep.vphi);
  j["exch_constant"] = jnum(rep.exch);
  j["gauss_kato_lhs"] = jnum(rep.gauss_kato_lhs);
  j["gauss_kato_rhs"] = jnum(rep.gauss_kato_rhs);
  j["gauss_hardy_lhs"] = jnum(rep.gauss_hardy_lhs);
  j["gauss_hardy_rhs"] = jnum(rep.gauss_hardy_rhs);
  j["ok"] = (rep.kato_worst <= 1.0 && rep.hardy_worst <= 1.0);
  if (!out.empty()) {
    write_json_file(out, j);
    ctx.outputs.push_back(out);
    ctx.write_manifest(out);
  } else {
    std::cout << j.dump(2) << "\n";
  }
  return (rep.kato_worst <= 1.0 && rep.hardy_worst <= 1.0) ? 0 : 2;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"BDF mean-field QED toolkit"};
  app.set_config("--config", "", "flat key=value config file (flags take precedence)");

  std::uint64_t seed = 1;
  int threads = 0;
  std::string from_manifest;
  app.add_option("--seed", seed, "seed for all stochastic paths");
  app.add_option("--threads", threads, "worker pool size (0 = machine parallelism)");
  app.add_option("--from-manifest", from_manifest,
                 "re-run the command recorded in a manifest JSON");

  // ---- dress ----
  auto* cd = app.add_subcommand("dress", "solve the dressed Dirac operator");
  double d_alpha = 0.02, d_lambda = 1e3, d_tol = 1e-10, d_mixing = 1.0;
  std::size_t d_nodes = 512;
  int d_maxit = 50;
  std::string d_out = "dress.csv";
  cd->add_option("--alpha", d_alpha)->capture_default_str();
  cd->add_option("--lambda", d_lambda)->capture_default_str();
  cd->add_option("--nodes", d_nodes)->capture_default_str();
  cd->add_option("--tol", d_tol)->capture_default_str();
  cd->add_option("--max-iter", d_maxit)->capture_default_str();
  cd->add_option("--mixing", d_mixing)->capture_default_str();
  cd->add_option("--out", d_out)->capture_default_str();

  // ---- uehling ----
  auto* cu = app.add_subcommand("uehling", "vacuum-polarization functions B, f, F");
  double u_alpha = 0.02, u_lambda = 1e3, u_kmax = 0.0, u_tol = 1e-5;
  int u_jmax = 1;
  std::string u_out = "uehling.csv";
  cu->add_option("--alpha", u_alpha)->capture_default_str();
  cu->add_option("--lambda", u_lambda)->capture_default_str();
  cu->add_option("--jmax", u_jmax)->capture_default_str();
  cu->add_option("--kmax", u_kmax, "truncate the emitted k grid (0 = full)")
      ->capture_default_str();
  cu->add_option("--tol", u_tol)->capture_default_str();
  cu->add_option("--out", u_out)->capture_default_str();

  // ---- renorm ----
  auto* cr = app.add_subcommand("renorm", "charge-renormalization table");
  std::string r_alphas = "0.02", r_lambdas = "1000";
  int r_M = 1, r_jmax = 1;
  double r_Z = 0.0;
  std::string r_out = "renorm.csv";
  cr->add_option("--alpha", r_alphas, "comma-separated list")->capture_default_str();
  cr->add_option("--lambda", r_lambdas, "comma-separated list")->capture_default_str();
  cr->add_option("--M", r_M)->capture_default_str();
  cr->add_option("--Z", r_Z)->capture_default_str();
  cr->add_option("--jmax", r_jmax)->capture_default_str();
  cr->add_option("--out", r_out)->capture_default_str();

  // ---- scf-run ----
  auto* cs = app.add_subcommand("scf-run", "Banach-Picard solver for the minimizer equation");
  double s_alpha = 0.01, s_lambda = 1e3, s_tol = 1e-6, s_extent = 20.0, s_cutoff = 3.2;
  int s_M = 1, s_order = 2, s_maxit = 20, s_grid = 24, s_nquad = 32, s_cap = 24;
  std::string s_nu = "none", s_out = "scf";
  cs->add_option("--alpha", s_alpha)->capture_default_str();
  cs->add_option("--lambda", s_lambda)->capture_default_str();
  cs->add_option("--M", s_M)->capture_default_str();
  cs->add_option("--nu-profile", s_nu)->capture_default_str();
  cs->add_option("--order", s_order)->capture_default_str();
  cs->add_option("--tol", s_tol)->capture_default_str();
  cs->add_option("--max-iter", s_maxit)->capture_default_str();
  cs->add_option("--grid-n", s_grid)->capture_default_str();
  cs->add_option("--extent", s_extent)->capture_default_str();
  cs->add_option("--cutoff", s_cutoff)->capture_default_str();
  cs->add_option("--nquad", s_nquad)->capture_default_str();
  cs->add_option("--rank-cap", s_cap)->capture_default_str();
  cs->add_option("--out", s_out, "output basename")->capture_default_str();

  // ---- nrhf ----
  auto* cn = app.add_subcommand("nrhf", "screened nonrelativistic Hartree-Fock");
  double n_Z = 1.0, n_M = 1.0, n_a = 0.0, n_tol = 1e-9;
  std::string n_from, n_basis, n_out = "nrhf";
  cn->add_option("--Z", n_Z)->capture_default_str();
  cn->add_option("--M", n_M)->capture_default_str();
  cn->add_option("--a", n_a)->capture_default_str();
  cn->add_option("--from-renorm", n_from, "derive a from a uehling JSON sidecar");
  cn->add_option("--basis", n_basis, "a0,beta,n");
  cn->add_option("--tol", n_tol)->capture_default_str();
  cn->add_option("--out", n_out, "output basename")->capture_default_str();

  // ---- furry-check ----
  auto* cf = app.add_subcommand("furry-check", "exact Dirac-trace verification");
  std::uint64_t f_trials = 1000;
  int f_maxlen = 5;
  std::string f_out;
  cf->add_option("--trials", f_trials)->capture_default_str();
  cf->add_option("--max-len", f_maxlen)->capture_default_str();
  cf->add_option("--out", f_out, "optional JSON report path");

  // ---- inequalities ----
  auto* ci = app.add_subcommand("inequalities", "Kato/Hardy/Sobolev inequality report");
  std::uint64_t i_samples = 1000;
  std::string i_out;
  ci->add_option("--samples", i_samples)->capture_default_str();
  ci->add_option("--out", i_out, "optional JSON report path");

  app.require_subcommand(0, 1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (!from_manifest.empty()) {
      std::ifstream f(from_manifest);
      if (!f) throw std::runtime_error("cannot open manifest " + from_manifest);
      json m;
      f >> m;
      std::vector<std::string> args;
      args.push_back(argv[0]);
      args.push_back(m.at("subcommand").get<std::string>());
      for (const auto& [k, v] : m.at("config").items()) {
        args.push_back("--" + k);
        args.push_back(v.get<std::string>());
      }
      std::vector<char*> cargs;
      for (auto& a : args) cargs.push_back(a.data());
      return main(int(cargs.size()), cargs.data());
    }

    RunContext ctx;
    if (cd->parsed()) {
      ctx.subcommand = "dress";
      ctx.set("alpha", d_alpha);
      ctx.set("lambda", d_lambda);
      ctx.set("nodes", std::uint64_t(d_nodes));
      ctx.set("tol", d_tol);
      ctx.set("max-iter", d_maxit);
      ctx.set("mixing", d_mixing);
      ctx.set("out", d_out);
      return run_dress(d_alpha, d_lambda, d_nodes, d_tol, d_maxit, d_mixing, d_out, ctx);
    }
    if (cu->parsed()) {
      ctx.subcommand = "uehling";
      ctx.set("alpha", u_alpha);
      ctx.set("lambda", u_lambda);
      ctx.set("jmax", u_jmax);
      ctx.set("kmax", u_kmax);
      ctx.set("tol", u_tol);
      ctx.set("seed", seed);
      ctx.set("out", u_out);
      return run_uehling(u_alpha, u_lambda, u_jmax, u_kmax, u_tol, seed, u_out, ctx);
    }
    if (cr->parsed()) {
      ctx.subcommand = "renorm";
      ctx.set("alpha", r_alphas);
      ctx.set("lambda", r_lambdas);
      ctx.set("M", r_M);
      ctx.set("Z", r_Z);
      ctx.set("jmax", r_jmax);
      ctx.set("seed", seed);
      ctx.set("out", r_out);
      return run_renorm(parse_list(r_alphas), parse_list(r_lambdas), r_M, r_Z, r_jmax,
                        seed, r_out, ctx);
    }
    if (cs->parsed()) {
      ctx.subcommand = "scf-run";
      ctx.set("alpha", s_alpha);
      ctx.set("lambda", s_lambda);
      ctx.set("M", s_M);
      ctx.set("nu-profile", s_nu);
      ctx.set("order", s_order);
      ctx.set("tol", s_tol);
      ctx.set("max-iter", s_maxit);
      ctx.set("grid-n", s_grid);
      ctx.set("extent", s_extent);
      ctx.set("cutoff", s_cutoff);
      ctx.set("nquad", s_nquad);
      ctx.set("rank-cap", s_cap);
      ctx.set("seed", seed);
      ctx.set("out", s_out);
      return run_scf(s_alpha, s_lambda, s_M, s_nu, s_order, s_tol, s_maxit, s_grid,
                     s_extent, s_cutoff, s_nquad, s_cap, seed, s_out, ctx);
    }
    if (cn->parsed()) {
      ctx.subcommand = "nrhf";
      ctx.set("Z", n_Z);
      ctx.set("M", n_M);
      ctx.set("a", n_a);
      if (!n_from.empty()) ctx.set("from-renorm", n_from);
      if (!n_basis.empty()) ctx.set("basis", n_basis);
      ctx.set("tol", n_tol);
      ctx.set("out", n_out);
      return run_nrhf(n_Z, n_M, n_a, n_from, n_basis, n_tol, n_out, ctx);
    }
    if (cf->parsed()) {
      ctx.subcommand = "furry-check";
      ctx.set("trials", f_trials);
      ctx.set("max-len", f_maxlen);
      ctx.set("seed", seed);
      if (!f_out.empty()) ctx.set("out", f_out);
      return run_furry(f_trials, seed, f_maxlen, f_out, ctx);
    }
    if (ci->parsed()) {
      ctx.subcommand = "inequalities";
      ctx.set("samples", i_samples);
      ctx.set("seed", seed);
      if (!i_out.empty()) ctx.set("out", i_out);
      return run_inequalities(i_samples, seed, i_out, ctx);
    }
    std::cout << app.help();
    return 1;
  } catch (const CLI::Error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const bdf::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
