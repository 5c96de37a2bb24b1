#include <algorithm>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "specluster/errors.hpp"
#include "specluster/generators.hpp"
#include "specluster/io.hpp"
#include "specluster/metrics.hpp"
#include "specluster/rng.hpp"

namespace specluster::cli {

namespace {

constexpr const char* kCsvHeader = "mode,k,n,seed,stage,seconds,ari,nmi\n";

std::string csv_row(Mode mode, const BenchPoint& pt, std::uint64_t seed, const char* stage, double ms, double ari_v,
                    double nmi_v) {
  return std::string(to_string(mode)) + "," + std::to_string(pt.k) + "," + std::to_string(pt.n) + "," +
         std::to_string(seed) + "," + stage + "," + format_double(ms / 1000.0) + "," + format_double(ari_v) + "," +
         format_double(nmi_v) + "\n";
}

std::string gnuplot_layout(const std::string& name, const std::string& xcol_label, int xcol,
                           const std::vector<Mode>& modes) {
  std::string mode_list;
  for (Mode m : modes) mode_list += (mode_list.empty() ? "" : " ") + std::string(to_string(m));
  std::ostringstream gp;
  gp << "# gnuplot layout for " << name << ".csv (one point per run; stage = total)\n"
     << "set datafile separator ','\n"
     << "set key autotitle columnhead top left\n"
     << "set xlabel '" << xcol_label << "'\n"
     << "set ylabel 'running time (s)'\n"
     << "set logscale y\n"
     << "modes = \"" << mode_list << "\"\n"
     << "plot for [m in modes] '" << name << ".csv' using " << xcol << ":(strcol(1) eq m ? $6 : 1/0) "
     << "with linespoints title m\n";
  return gp.str();
}

}  // namespace

std::vector<BenchPoint> bench_grid(const BenchConfig& config) {
  std::vector<BenchPoint> grid;
  if (config.sweep == BenchConfig::Sweep::grow_k) {
    if (config.kmax < 5) throw InputError("bench-growk: --kmax must be >= 5");
    for (std::size_t k = 5; k <= config.kmax; k = (k == 5 ? 10 : 2 * k)) {
      const double kd = static_cast<double>(k);
      grid.push_back({k, 1000 * k, 0.04, 1.0 / (1000.0 * kd)});
    }
  } else {
    constexpr std::size_t k = 20;
    if (config.nmin < 2 * k || config.nmin > config.nmax)
      throw InputError("bench-grown: need 40 <= --nmin <= --nmax");
    for (std::size_t n = config.nmin; n <= config.nmax; n *= 2) {
      const std::size_t nn = n - n % k;
      const double nd = static_cast<double>(nn);
      grid.push_back({k, nn, std::min(1.0, 40.0 / nd), 1.0 / (20.0 * nd)});
    }
  }
  return grid;
}

std::size_t run_bench(const BenchConfig& config, std::ostream& log) {
  if (config.seeds.empty()) throw InputError("bench: --seeds must list at least one seed");
  const std::string name = config.sweep == BenchConfig::Sweep::grow_k ? "growk" : "grown";
  const auto grid = bench_grid(config);
  std::filesystem::create_directories(config.out);

  std::string totals = kCsvHeader;
  std::string stages = kCsvHeader;
  std::size_t runs = 0;
  for (const BenchPoint& pt : grid) {
    for (std::uint64_t seed : config.seeds) {
      const SbmSample sbm = sample_sbm({pt.n, pt.k, pt.p, pt.q, seed});
      for (Mode mode : config.modes) {
        SpectralParams params;
        params.k = pt.k;
        params.mode = mode;
        params.seed = seed;
        params.threads = config.threads;
        const ClusterResult res = fast_spectral_cluster(sbm.graph, params);
        const double a = ari(res.partition, sbm.planted);
        const double m = nmi(res.partition, sbm.planted);
        totals += csv_row(mode, pt, seed, "total", res.timings.total_ms, a, m);
        stages += csv_row(mode, pt, seed, "embed", res.timings.embed_ms, a, m);
        stages += csv_row(mode, pt, seed, "scale", res.timings.scale_ms, a, m);
        stages += csv_row(mode, pt, seed, "kmeans", res.timings.kmeans_ms, a, m);
        stages += csv_row(mode, pt, seed, "total", res.timings.total_ms, a, m);
        ++runs;
        log << name << ": mode=" << to_string(mode) << " k=" << pt.k << " n=" << pt.n << " seed=" << seed
            << " total=" << res.timings.total_ms / 1000.0 << "s ARI=" << a << "\n";
      }
    }
  }
  write_text_file(config.out / (name + ".csv"), totals);
  write_text_file(config.out / (name + "_stages.csv"), stages);
  write_text_file(config.out / (name + ".gp"),
                  gnuplot_layout(name, config.sweep == BenchConfig::Sweep::grow_k ? "k" : "n",
                                 config.sweep == BenchConfig::Sweep::grow_k ? 2 : 3, config.modes));

  nlohmann::ordered_json meta;
  meta["tool"] = "specluster";
  meta["version"] = SPECLUSTER_VERSION;
  meta["command"] = config.sweep == BenchConfig::Sweep::grow_k ? "bench-growk" : "bench-grown";
  meta["generator"] = std::string(kGeneratorName);
  std::vector<std::string> modes;
  for (Mode m : config.modes) modes.emplace_back(to_string(m));
  meta["config"] = {{"kmax", config.kmax}, {"nmin", config.nmin}, {"nmax", config.nmax},
                    {"modes", modes},      {"seeds", config.seeds}, {"threads", config.threads}};
  nlohmann::ordered_json pts = nlohmann::ordered_json::array();
  for (const auto& pt : grid) pts.push_back({{"k", pt.k}, {"n", pt.n}, {"p", pt.p}, {"q", pt.q}});
  meta["grid"] = pts;
  meta["runs"] = runs;
  write_text_file(config.out / (name + "_meta.json"), meta.dump(2) + "\n");
  return runs;
}

}  // namespace specluster::cli
