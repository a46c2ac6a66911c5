#include "harness.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <ostream>

#include <CLI11.hpp>

#include "hqrrp/io.hpp"
#include "hqrrp/kernels.hpp"
#include "hqrrp/pivoting.hpp"
#include "hqrrp/randqr.hpp"
#include "hqrrp/rng.hpp"

namespace hqrrp::harness {

namespace {

std::ofstream open_csv(const std::filesystem::path& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  f << std::setprecision(std::numeric_limits<double>::max_digits10);
  return f;
}

std::filesystem::path with_suffix(const RunConfig& cfg, const std::string& suffix) {
  return cfg.prefix + suffix;
}

void check_block_params(const RunConfig& cfg) {
  if (cfg.b < 1) throw UsageError("--b must be >= 1");
  if (cfg.p < 0) throw UsageError("--p must be >= 0");
}

void check_algos(const RunConfig& cfg) {
  if (cfg.algos.empty()) throw UsageError("at least one --algo is required");
  for (const auto& a : cfg.algos)
    if (std::ranges::find(known_algos(), a) == known_algos().end())
      throw UsageError("unknown algorithm '" + a + "'");
}

// Input file when given, generator otherwise.
TestMatrix load_or_generate(const RunConfig& cfg) {
  if (!cfg.input.empty()) return {io::load_matrix(cfg.input), {}};
  if (cfg.kind.empty()) throw UsageError("either --input or --kind is required");
  return make_matrix(cfg);
}

void write_r_csv_row(std::ostream& out, const std::vector<double>& v, std::size_t i) {
  if (i < v.size()) out << v[i];
}

}  // namespace

const std::vector<std::string>& known_algos() {
  static const std::vector<std::string> algos{"hqr", "hqr-blk", "hqrp", "hqrrp-basic", "hqrrp"};
  return algos;
}

const std::vector<std::string>& known_kinds() {
  static const std::vector<std::string> kinds{"fast-decay", "s-shape", "bie", "kahan", "gaussian"};
  return kinds;
}

QRFactors run_algo(const std::string& algo, Matrix a, const RunConfig& cfg, FlopCounter* flops) {
  if (algo == "hqr") return hqr_unb(std::move(a), flops);
  if (algo == "hqr-blk") return hqr_blk(std::move(a), cfg.b, flops);
  if (algo == "hqrp") return hqrp_blk(std::move(a), cfg.b, flops);
  if (algo == "hqrrp" || algo == "hqrrp-basic") {
    HqrrpOptions opt;
    opt.block_size = cfg.b;
    opt.oversampling = cfg.p;
    opt.mode = algo == "hqrrp" ? SketchMode::kDowndate : SketchMode::kBasic;
    Rng rng(cfg.seed);
    return hqrrp_blk(std::move(a), opt, rng, flops);
  }
  throw UsageError("unknown algorithm '" + algo + "'");
}

TestMatrix make_matrix(const RunConfig& cfg) {
  if (cfg.n < 1) throw UsageError("--n must be >= 1");
  Rng rng(cfg.seed);
  const std::string& k = cfg.kind;
  try {
    if (k == "fast-decay") return gen_fast_decay(cfg.n, rng, cfg.beta);
    if (k == "s-shape") return gen_s_shape(cfg.n, rng);
    if (k == "bie") return {gen_bie_single_layer(cfg.n), {}};
    if (k == "kahan") return {gen_kahan(cfg.n, cfg.zeta), {}};
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (k == "gaussian") return {gaussian_matrix(rng, cfg.m > 0 ? cfg.m : cfg.n, cfg.n), {}};
  throw UsageError("unknown matrix kind '" + k + "'");
}

double reconstruction_error(ConstMatrixView a, const QRFactors& f) {
  const auto perm = f.permutation();
  Matrix diff = permute_columns(a, perm);
  const Matrix qr = reconstruct(f);
  for (Index j = 0; j < diff.cols(); ++j)
    for (Index i = 0; i < diff.rows(); ++i) diff(i, j) -= qr(i, j);
  const double na = frobenius_norm(a);
  return na == 0.0 ? frobenius_norm(diff) : frobenius_norm(diff) / na;
}

double standard_flops(Index m, Index n) {
  const auto mm = static_cast<double>(std::max(m, n)), nn = static_cast<double>(std::min(m, n));
  return 2.0 * mm * nn * nn - 2.0 / 3.0 * nn * nn * nn;
}

void cmd_gen(const RunConfig& cfg, std::ostream& /*out*/, std::ostream& /*err*/) {
  if (cfg.kind.empty()) throw UsageError("--kind is required");
  const TestMatrix tm = make_matrix(cfg);
  io::save_matrix(with_suffix(cfg, ".mtx"), tm.a);
  if (!tm.sigmas.empty()) {
    auto f = open_csv(with_suffix(cfg, ".sv.csv"));
    f << "j,sigma\n";
    for (std::size_t j = 0; j < tm.sigmas.size(); ++j) f << j << ',' << tm.sigmas[j] << '\n';
  }
}

void cmd_factor(const RunConfig& cfg, std::ostream& out, std::ostream& /*err*/) {
  check_algos(cfg);
  check_block_params(cfg);
  if (cfg.algos.size() != 1) throw UsageError("factor takes exactly one --algo");
  const std::string& algo = cfg.algos.front();
  const TestMatrix tm = load_or_generate(cfg);
  if (cfg.form_q && (*cfg.form_q < 0 || *cfg.form_q > tm.a.rows()))
    throw UsageError("--form-q must lie in [0, rows]");

  FlopCounter flops;
  const QRFactors f = run_algo(algo, tm.a, cfg, &flops);

  io::save_matrix(with_suffix(cfg, ".R.mtx"), f.r());
  {
    auto piv = open_csv(with_suffix(cfg, ".piv.csv"));
    piv << "step,swap_index\n";
    for (Index i = 0; i < f.trail.size(); ++i) piv << i << ',' << f.trail[i] << '\n';
  }
  if (cfg.form_q) io::save_matrix(with_suffix(cfg, ".Q.mtx"), form_q(f, *cfg.form_q));

  out << std::setprecision(std::numeric_limits<double>::max_digits10) << algo << ','
      << tm.a.cols() << ',' << tm.a.rows() << ',' << cfg.b << ',' << cfg.p << ',' << cfg.seed
      << ',' << reconstruction_error(tm.a, f) << ',' << flops.count() << '\n';
}

void cmd_quality(const RunConfig& cfg, std::ostream& /*out*/, std::ostream& err) {
  check_algos(cfg);
  check_block_params(cfg);
  TestMatrix tm = load_or_generate(cfg);
  const Index steps = std::min(tm.a.rows(), tm.a.cols());
  if (tm.sigmas.empty()) {
    if (steps <= kJacobiOracleLimit) {
      tm.sigmas = jacobi_svd_values(tm.a);
    } else {
      err << "warning: singular values unavailable above size " << kJacobiOracleLimit
          << ", bound columns left empty\n";
    }
  }
  std::vector<Index> ks;
  for (Index k = 0; k <= steps; k += cfg.b) ks.push_back(k);

  auto qcsv = open_csv(with_suffix(cfg, ".quality.csv"));
  auto dcsv = open_csv(with_suffix(cfg, ".rdiag.csv"));
  qcsv << "algo,k,e_frob,e_spec,bound_frob,bound_spec\n";
  dcsv << "algo,i,abs_rii\n";
  for (const auto& algo : cfg.algos) {
    const QRFactors f = run_algo(algo, tm.a, cfg);
    QualityReport rep = truncation_errors(tm.a, f, ks, true, tm.sigmas);
    rep.algo_label = algo;
    rep.seed = cfg.seed;
    for (std::size_t i = 0; i < rep.ks.size(); ++i) {
      qcsv << algo << ',' << rep.ks[i] << ',' << rep.e_frob[i] << ',' << rep.e_spec[i] << ',';
      write_r_csv_row(qcsv, rep.sv_bound_frob, i);
      qcsv << ',';
      write_r_csv_row(qcsv, rep.sv_bound_spec, i);
      qcsv << '\n';
    }
    for (std::size_t i = 0; i < rep.r_diag.size(); ++i)
      dcsv << algo << ',' << i << ',' << rep.r_diag[i] << '\n';
  }
}

void cmd_bench(const RunConfig& cfg, std::ostream& /*out*/, std::ostream& /*err*/) {
  check_algos(cfg);
  check_block_params(cfg);
  std::vector<Index> ns = cfg.ns;
  if (ns.empty() && cfg.n > 0) ns.push_back(cfg.n);
  if (ns.empty()) throw UsageError("bench needs at least one --n");

  auto csv = open_csv(with_suffix(cfg, ".bench.csv"));
  csv << "algo,n,b,p,seconds,std_gflops,counted_flops\n";
  for (const Index n : ns) {
    if (n < 1) throw UsageError("--n must be >= 1");
    Rng rng(cfg.seed);
    const Index m = cfg.m > 0 ? cfg.m : n;
    const Matrix a = gaussian_matrix(rng, m, n);
    for (const auto& algo : cfg.algos) {
      FlopCounter flops;
      Matrix work = a;
      const auto t0 = std::chrono::steady_clock::now();
      const QRFactors f = run_algo(algo, std::move(work), cfg, &flops);
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      const double gflops = secs > 0.0 ? standard_flops(m, n) / secs / 1e9 : 0.0;
      csv << algo << ',' << n << ',' << cfg.b << ',' << cfg.p << ',' << secs << ',' << gflops << ','
          << flops.count() << '\n';
    }
  }
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Householder QR with classical and randomized column pivoting"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_matrix_opts = [&](CLI::App* sub) {
    sub->add_option("--kind", cfg.kind, "fast-decay | s-shape | bie | kahan | gaussian");
    sub->add_option("--m", cfg.m, "rows (gaussian only; default n)");
    sub->add_option("--seed", cfg.seed, "random seed");
    sub->add_option("--zeta", cfg.zeta, "Kahan parameter");
    sub->add_option("--beta", cfg.beta, "smallest singular value of fast-decay");
    sub->add_option("-o,--output", cfg.prefix, "output path prefix");
  };
  auto add_algo_opts = [&](CLI::App* sub) {
    sub->add_option("--algo", cfg.algos, "hqr | hqr-blk | hqrp | hqrrp-basic | hqrrp")
        ->required()
        ->delimiter(',');
    sub->add_option("--b", cfg.b, "block size");
    sub->add_option("--p", cfg.p, "oversampling");
  };

  auto* gen = app.add_subcommand("gen", "generate a test matrix");
  add_matrix_opts(gen);
  gen->add_option("--n", cfg.n, "columns")->required();

  auto* factor = app.add_subcommand("factor", "factor a matrix");
  add_matrix_opts(factor);
  add_algo_opts(factor);
  factor->add_option("--n", cfg.n, "columns when generating");
  factor->add_option("-i,--input", cfg.input, "matrix file (.mtx or .bin)");
  factor->add_option("--form-q", cfg.form_q, "write the first k columns of Q");

  auto* quality = app.add_subcommand("quality", "truncation errors e_k per algorithm");
  add_matrix_opts(quality);
  add_algo_opts(quality);
  quality->add_option("--n", cfg.n, "columns when generating");
  quality->add_option("-i,--input", cfg.input, "matrix file (.mtx or .bin)");

  auto* bench = app.add_subcommand("bench", "time factorizations of Gaussian matrices");
  bench->add_option("--seed", cfg.seed, "random seed");
  bench->add_option("--m", cfg.m, "rows (default n)");
  bench->add_option("-o,--output", cfg.prefix, "output path prefix");
  add_algo_opts(bench);
  bench->add_option("--n", cfg.ns, "problem sizes")->required()->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (gen->parsed()) cmd_gen(cfg, out, err);
    if (factor->parsed()) cmd_factor(cfg, out, err);
    if (quality->parsed()) cmd_quality(cfg, out, err);
    if (bench->parsed()) cmd_bench(cfg, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace hqrrp::harness
