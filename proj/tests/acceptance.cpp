// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "cli.hpp"
#include "oracles.hpp"
#include "property_checks.hpp"
#include "specluster/dense.hpp"
#include "specluster/generators.hpp"
#include "specluster/metrics.hpp"
#include "specluster/pipeline.hpp"

using namespace specluster;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail) {
  std::cout << (ok ? "PASS" : "FAIL") << " C" << id << " " << name << ": " << detail << std::endl;
  if (!ok) ++failures;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

SbmSample benchmark_sbm(std::size_t k, std::uint64_t seed) {
  return sample_sbm({1000 * k, k, 0.04, 1.0 / (1000.0 * static_cast<double>(k)), seed});
}

ClusterResult run_mode(const Graph& g, std::size_t k, Mode m, std::uint64_t seed) {
  SpectralParams p;
  p.k = k;
  p.mode = m;
  p.seed = seed;
  return fast_spectral_cluster(g, p);
}

// Criteria 1 and 2 (quality part) share the instances.
void sbm_recovery_and_variants() {
  std::string detail1, detail2;
  bool ok1 = true, ok2 = true;
  for (std::size_t k : {5, 10}) {
    std::array<int, 3> good{};
    const std::array<Mode, 3> modes{Mode::pm_log_k, Mode::pm_k, Mode::eigs_k};
    double worst_seconds = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const auto sbm = benchmark_sbm(k, seed);
      for (std::size_t i = 0; i < modes.size(); ++i) {
        const auto r = run_mode(sbm.graph, k, modes[i], seed);
        if (ari(r.partition, sbm.planted) >= 0.95) ++good[i];
        if (i == 0) worst_seconds = std::max(worst_seconds, r.timings.total_ms / 1000.0);
      }
    }
    ok1 = ok1 && good[0] >= 9 && worst_seconds < 60.0;
    ok2 = ok2 && std::all_of(good.begin(), good.end(), [](int g) { return g >= 9; });
    detail1 += fmt("k=%zu %d/10 seeds ARI>=0.95 (slowest %.2fs); ", k, good[0], worst_seconds);
    detail2 += fmt("k=%zu pm_log_k %d/10, pm_k %d/10, eigs_k %d/10; ", k, good[0], good[1], good[2]);
  }

  // Runtime ordering at k = 20, n = 20000.
  std::array<std::vector<double>, 3> times;
  std::array<int, 3> good20{};
  const std::array<Mode, 3> modes{Mode::pm_log_k, Mode::pm_k, Mode::eigs_k};
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto sbm = benchmark_sbm(20, seed);
    for (std::size_t i = 0; i < 3; ++i) {
      const auto r = run_mode(sbm.graph, 20, modes[i], seed);
      times[i].push_back(r.timings.total_ms);
      if (ari(r.partition, sbm.planted) >= 0.95) ++good20[i];
    }
  }
  const double a = median(times[0]), b = median(times[1]), c = median(times[2]);
  const bool order = a < b && b < c;
  ok2 = ok2 && order && std::all_of(good20.begin(), good20.end(), [](int g) { return g >= 5; });
  detail2 += fmt("k=20 ARI>=0.95 %d/%d/%d of 5; median ms pm_log_k %.0f < pm_k %.0f < eigs_k %.0f", good20[0],
                 good20[1], good20[2], a, b, c);
  report(1, "sbm-recovery", ok1, detail1 + "need >=9/10");
  report(2, "variant-agreement", ok2, detail2);
}

void embedding_scaling() {
  std::vector<double> med;
  for (std::size_t n : {20000, 40000, 80000}) {
    std::vector<double> ms;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const double nn = static_cast<double>(n);
      const auto sbm = sample_sbm({n, 20, 40.0 / nn, 1.0 / (20.0 * nn), seed});
      SpectralParams p;
      p.k = 20;
      p.seed = seed;
      ms.push_back(embed(sbm.graph, resolve_params(p, sbm.graph.num_vertices())).embed_ms);
    }
    med.push_back(median(ms));
  }
  const double r1 = med[1] / med[0], r2 = med[2] / med[1];
  const bool ok = r1 >= 1.5 && r1 <= 3.5 && r2 >= 1.5 && r2 <= 3.5;
  report(3, "near-linear-scaling", ok,
         fmt("embed median ms %.1f / %.1f / %.1f, ratios %.2f %.2f (need [1.5, 3.5])", med[0], med[1], med[2], r1, r2));
}

void power_method_projection() {
  const auto st = props::power_method_projection_trials(400, 20, 0.3, 0.5, 100, 2024);
  report(4, "power-method-projection", st.passed >= 95,
         fmt("%zu/100 trials within eps*sqrt(k) at t=%zu (worst error/bound %.3f)", st.passed, st.t, st.worst));
}

void gaussian_norms() {
  const double rate = props::projection_norm_violation_rate(400, 20, 1000, 77);
  const double bound = 1.0 / 200.0 + 0.02;
  report(5, "gaussian-projection-norms", rate <= bound, fmt("violation rate %.4f (bound %.4f)", rate, bound));
}

void cost_preservation() {
  int mult_ok = 0, add_ok = 0;
  double worst_mult = 0.0, worst_add = 0.0, worst_random_mult = 0.0;
  const double eps = 0.5;
  const std::size_t k = 4;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto sbm = sample_sbm({200, k, 0.5, 0.01, seed});
    CostPreservationOptions o;
    o.k = k;
    o.epsilon = eps;
    o.trials = 20;
    o.seed = seed;
    const auto rep = kmeans_cost_preservation_check(sbm.graph, o, &sbm.planted);
    if (rep.planted_ratio >= 1.0 - eps && rep.planted_ratio <= 1.0 + eps) ++mult_ok;
    if (rep.planted_additive_deviation <= eps * static_cast<double>(k)) ++add_ok;
    worst_mult = std::max(worst_mult, rep.planted_multiplicative_deviation);
    worst_add = std::max(worst_add, rep.planted_additive_deviation);
    worst_random_mult = std::max(worst_random_mult, rep.max_multiplicative_deviation);
  }
  report(6, "cost-preservation", mult_ok >= 90 && add_ok >= 90,
         fmt("multiplicative within 1+-eps %d/100, additive <= eps*k %d/100 (worst %.3f, %.3f; random partitions "
             "worst multiplicative %.3f, informational)",
             mult_ok, add_ok, worst_mult, worst_add, worst_random_mult));
}

void oracle_equivalences() {
  std::mt19937_64 rng(99);
  std::vector<std::string> bad;

  for (int s = 0; s < 100; ++s) {
    const std::size_t n = 5 + rng() % 50, d = 1 + rng() % 5, k = 1 + rng() % 5;
    std::normal_distribution<double> g;
    std::vector<double> c(n * d);
    for (double& v : c) v = g(rng);
    const PointSet p(n, d, c);
    std::vector<std::uint32_t> lab(n);
    for (auto& l : lab) l = static_cast<std::uint32_t>(rng() % k);
    const Partition part(lab, k);
    const double ref = oracle::kmeans_cost_frobenius(p, part);
    if (std::abs(kmeans_cost(p, part) - ref) > 1e-9 * std::max(1.0, ref)) {
      bad.push_back("kmeans_cost");
      break;
    }
  }

  for (std::uint64_t s = 0; s < 20; ++s) {
    const std::size_t n = 2 + (s * 37) % 199;
    const auto edges = oracle::random_connected_edges(n, 3.0 / static_cast<double>(n), s);
    const Graph g = build_graph(n, edges).graph;
    Eigen::VectorXd x = Eigen::VectorXd::Random(static_cast<Eigen::Index>(n));
    const auto y = apply_m(SignlessLaplacianOp(g), std::span<const double>(x.data(), n));
    if ((oracle::to_eigen(y) - oracle::signless_laplacian(n, edges) * x).cwiseAbs().maxCoeff() > 1e-9) {
      bad.push_back("apply_m");
      break;
    }
  }

  for (std::uint64_t s = 0; s < 10; ++s) {
    const std::size_t n = 10 + 2 * s;
    const auto edges = oracle::random_connected_edges(n, 0.25, 300 + s);
    const Graph g = build_graph(n, edges).graph;
    SubspaceOptions so;
    so.seed = s;
    const auto r = subspace_iteration_eigs(SignlessLaplacianOp(g).as_operator(), 4, so);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(oracle::signless_laplacian(n, edges));
    bool ok = r.converged;
    for (std::size_t j = 0; j < 4; ++j)
      ok = ok && std::abs(r.values[j] - es.eigenvalues()(static_cast<Eigen::Index>(n - 1 - j))) <= 1e-6;
    if (!ok) {
      bad.push_back("subspace_iteration_eigs");
      break;
    }
  }

  for (int s = 0; s < 200; ++s) {
    const std::size_t n = 2 + rng() % 40;
    std::vector<std::uint32_t> a(n), b(n);
    for (auto& v : a) v = static_cast<std::uint32_t>(rng() % 4);
    for (auto& v : b) v = static_cast<std::uint32_t>(rng() % 3);
    if (std::abs(ari(Partition::from_labels(a), Partition::from_labels(b)) - oracle::ari_pairs(a, b)) > 1e-12) {
      bad.push_back("ari");
      break;
    }
  }

  for (int s = 0; s < 200; ++s) {
    const std::size_t n = 3 + rng() % 6;
    const auto k = static_cast<std::uint32_t>(2 + rng() % 2);
    const Graph g = build_graph(n, oracle::random_connected_edges(n, 0.4, 700 + s)).graph;
    std::vector<std::uint32_t> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = i < k ? static_cast<std::uint32_t>(i) : static_cast<std::uint32_t>(rng() % k);
      b[i] = static_cast<std::uint32_t>(rng() % k);
    }
    b[n - 1] = 0;
    b[n - 2] = 1;
    if (k == 3) b[n - 3] = 2;
    const double got = matched_sym_diff_volume(g, Partition(a, k), Partition(b, k)).volume;
    if (std::abs(got - oracle::sym_diff_bruteforce({g.degrees().begin(), g.degrees().end()}, a, b, k)) > 1e-9) {
      bad.push_back("matched_sym_diff_volume");
      break;
    }
  }

  // Conductance against the dense adjacency; rho(k) against an independent enumeration.
  for (std::uint64_t s = 0; s < 20; ++s) {
    const std::size_t n = 4 + s % 9;
    const auto edges = oracle::random_connected_edges(n, 0.3, 900 + s);
    const Graph g = build_graph(n, edges).graph;
    const Eigen::MatrixXd adj = oracle::adjacency(n, edges);
    const Eigen::VectorXd deg = adj.rowwise().sum();
    bool ok = true;
    for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t{1} << n); ++mask) {
      std::vector<Vertex> members;
      double vol = 0.0, cut = 0.0;
      for (std::size_t u = 0; u < n; ++u)
        if ((mask >> u) & 1U) {
          members.push_back(static_cast<Vertex>(u));
          vol += deg(static_cast<Eigen::Index>(u));
          for (std::size_t v = 0; v < n; ++v)
            if (!((mask >> v) & 1U)) cut += adj(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v));
        }
      if (std::abs(conductance(g, VertexSet(members)) - cut / std::min(vol, deg.sum() - vol)) > 1e-9) ok = false;
    }
    // rho(2): both sides of a bipartition share cut / min(vol) as their conductance.
    double rho2 = std::numeric_limits<double>::infinity();
    for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t{1} << n); ++mask) {
      double va = 0.0, vb = 0.0, cut = 0.0;
      for (std::size_t u = 0; u < n; ++u) {
        const bool in = (mask >> u) & 1U;
        (in ? va : vb) += deg(static_cast<Eigen::Index>(u));
        if (in)
          for (std::size_t v = 0; v < n; ++v)
            if (!((mask >> v) & 1U)) cut += adj(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v));
      }
      rho2 = std::min(rho2, cut / std::min(va, vb));
    }
    if (std::abs(k_way_expansion_bruteforce(g, 2) - rho2) > 1e-9) ok = false;
    if (!ok) {
      bad.push_back("conductance/rho");
      break;
    }
  }

  std::string detail = "kmeans_cost, apply_m, subspace_iteration_eigs, ari, matched_sym_diff_volume, conductance/rho";
  if (!bad.empty()) {
    detail = "mismatch in:";
    for (const auto& b : bad) detail += " " + b;
  }
  report(7, "oracle-equivalences", bad.empty(), detail);
}

void spectrum_bounds() {
  double lo = 1.0, hi = 0.0, top_err = 0.0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    const std::size_t n = 3 + s % 40;
    const Graph g = build_graph(n, oracle::random_connected_edges(n, 0.2, 5000 + s)).graph;
    const auto eig = symmetric_eigen(dense_signless_laplacian(g));
    lo = std::min(lo, eig.values.back());
    hi = std::max(hi, eig.values.front());
    top_err = std::max(top_err, std::abs(eig.values.front() - 1.0));
  }
  const bool ok = lo >= -1e-10 && hi <= 1.0 + 1e-10 && top_err <= 1e-10;
  report(8, "spectrum-bounds", ok, fmt("min %.3e, max 1%+.3e, |gamma_1 - 1| <= %.3e over 50 graphs", lo, hi - 1.0, top_err));
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void cli_determinism() {
  const fs::path dir = fs::temp_directory_path() / "specluster_acceptance_determinism";
  fs::remove_all(dir);
  std::ostringstream sink;
  auto run = [&](std::vector<std::string> args) {
    return cli::run(args, sink, sink);
  };
  bool ok = run({"generate-sbm", "--n", "5000", "--k", "5", "--p", "0.04", "--q", "0.0002", "--seed", "3", "--out",
                 (dir / "sbm").string()}) == 0;
  std::size_t compared = 0;
  for (const std::string mode : {"pm_log_k", "pm_k", "eigs_k"}) {
    std::vector<fs::path> outs;
    for (const std::string threads : {"1", "1", "4"}) {
      outs.push_back(dir / (mode + std::to_string(outs.size())));
      ok = ok && run({"cluster", "--graph", (dir / "sbm" / "graph.tsv").string(), "--k", "5", "--mode", mode, "--seed",
                      "11", "--threads", threads, "--out", outs.back().string()}) == 0;
    }
    for (const char* f : {"labels.txt", "embedding.csv", "report.json"}) {
      const std::string ref = slurp(outs[0] / f);
      ok = ok && !ref.empty() && ref == slurp(outs[1] / f) && ref == slurp(outs[2] / f);
      ++compared;
    }
  }
  fs::remove_all(dir);
  report(9, "determinism", ok, fmt("%zu output files byte-identical across reruns and --threads 1 vs 4", compared));
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<void()>>> steps{
      {"sbm", sbm_recovery_and_variants}, {"scaling", embedding_scaling}, {"projection", power_method_projection},
      {"norms", gaussian_norms},          {"cost", cost_preservation},    {"oracles", oracle_equivalences},
      {"spectrum", spectrum_bounds},      {"determinism", cli_determinism}};
  for (const auto& [name, fn] : steps) {
    const auto start = std::chrono::steady_clock::now();
    try {
      fn();
    } catch (const std::exception& e) {
      std::cout << "FAIL " << name << ": exception: " << e.what() << std::endl;
      ++failures;
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cerr << "  (" << name << " took " << fmt("%.1f", s) << " s)\n";
  }
  std::cout << (failures == 0 ? "ALL PASS" : fmt("%d criteria failed", failures)) << std::endl;
  return failures == 0 ? 0 : 1;
}
