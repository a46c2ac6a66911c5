#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hqrrp/householder.hpp"
#include "hqrrp/testmats.hpp"

namespace hqrrp::harness {

/// Invalid command line or configuration; mapped to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

struct RunConfig {
  std::vector<std::string> algos;
  Index n = 0;
  Index m = 0;  // 0 means m = n
  std::vector<Index> ns;  // bench sizes
  Index b = 64;
  Index p = 5;
  std::uint64_t seed = 0;
  std::string kind;
  double zeta = 0.99999;
  double beta = 1e-5;
  std::string input;
  std::string prefix = "out";
  std::optional<Index> form_q;
};

const std::vector<std::string>& known_algos();
const std::vector<std::string>& known_kinds();

/// Runs one named algorithm. Throws UsageError for an unknown name.
QRFactors run_algo(const std::string& algo, Matrix a, const RunConfig& cfg,
                   FlopCounter* flops = nullptr);

/// Builds the matrix named by cfg.kind (square n x n, or m x n for gaussian).
TestMatrix make_matrix(const RunConfig& cfg);

/// ||Q R - A P||_F / ||A||_F (0 for a zero matrix).
double reconstruction_error(ConstMatrixView a, const QRFactors& f);

/// (4/3) n^3 for square problems, 2 m n^2 - (2/3) n^3 in general (m >= n).
double standard_flops(Index m, Index n);

/// Commands. Files are written next to cfg.prefix; `out` receives the
/// summary line(s), `err` warnings.
void cmd_gen(const RunConfig& cfg, std::ostream& out, std::ostream& err);
void cmd_factor(const RunConfig& cfg, std::ostream& out, std::ostream& err);
void cmd_quality(const RunConfig& cfg, std::ostream& out, std::ostream& err);
void cmd_bench(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches; returns the process exit code.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace hqrrp::harness
