#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "specluster/pipeline.hpp"

namespace specluster::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitUsage = 2;

// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Benchmark grids: one run per (grid point, seed, mode) on SBM graphs.
struct BenchConfig {
  enum class Sweep { grow_k, grow_n } sweep = Sweep::grow_k;
  std::size_t kmax = 20;   // grow_k
  std::size_t nmin = 10000;  // grow_n
  std::size_t nmax = 80000;  // grow_n
  std::vector<Mode> modes{Mode::pm_log_k, Mode::pm_k, Mode::eigs_k};
  std::vector<std::uint64_t> seeds{1};
  std::size_t threads = 1;
  std::filesystem::path out;
};

struct BenchPoint {
  std::size_t k;
  std::size_t n;
  double p;
  double q;
};

// k in {5, 10, 20, 40, ...} <= kmax with n = 1000 k, p = 0.04, q = 1/(1000 k);
// or k = 20, n doubling from nmin to nmax, p = 40/n, q = 1/(20 n).
std::vector<BenchPoint> bench_grid(const BenchConfig& config);

// Runs the grid and writes <name>.csv (one `total` row per run),
// <name>_stages.csv (every stage), <name>.gp (gnuplot layout) and
// <name>_meta.json into config.out. Returns the number of runs.
std::size_t run_bench(const BenchConfig& config, std::ostream& log);

}  // namespace specluster::cli
