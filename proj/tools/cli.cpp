#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "specluster/errors.hpp"
#include "specluster/generators.hpp"
#include "specluster/io.hpp"
#include "specluster/metrics.hpp"
#include "specluster/parallel.hpp"
#include "specluster/rng.hpp"

namespace specluster::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

std::uint64_t env_seed() {
  if (const char* s = std::getenv("SPECLUSTER_SEED")) {
    try {
      return std::stoull(s);
    } catch (const std::exception&) {
      throw InputError(std::string("SPECLUSTER_SEED='") + s + "' is not an unsigned integer");
    }
  }
  return 0;
}

json tool_info(const std::string& command) {
  json j;
  j["tool"] = "specluster";
  j["version"] = SPECLUSTER_VERSION;
  j["command"] = command;
  j["generator"] = std::string(kGeneratorName);
  j["generator_version"] = kGeneratorVersion;
  return j;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw InputError("cannot create output directory '" + dir.string() + "'");
}

void write_json(const fs::path& path, const json& j) { write_text_file(path, j.dump(2) + "\n"); }

void write_names(const fs::path& path, const std::vector<std::string>& names) {
  std::string text = "# vertex id map: line i holds the input id of vertex i\n";
  for (const auto& s : names) text += s + "\n";
  write_text_file(path, text);
}

struct ClusterArgs {
  std::string graph;
  std::size_t k = 0;
  std::string mode = "pm_log_k";
  std::optional<double> epsilon;
  std::optional<std::size_t> l;
  std::optional<std::size_t> t;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string truth;
  std::size_t threads = default_thread_count();
  std::size_t restarts = 10;
  bool allow_self_loops = false;
  bool drop_isolated = false;
};

int do_cluster(const ClusterArgs& a, std::ostream& out, std::ostream& err) {
  IngestOptions ingest{a.allow_self_loops, a.drop_isolated};
  const LoadedGraph loaded = load_edge_list(a.graph, ingest);
  const Graph& g = loaded.graph;

  std::optional<Partition> truth;
  if (!a.truth.empty()) truth = load_labels(a.truth, g.num_vertices());

  SpectralParams params;
  params.k = a.k;
  params.mode = parse_mode(a.mode);
  params.epsilon = a.epsilon;
  params.l = a.l;
  params.t = a.t;
  params.seed = a.seed ? *a.seed : env_seed();
  params.threads = std::max<std::size_t>(1, a.threads);
  params.kmeans.restarts = a.restarts;

  const ClusterResult res = fast_spectral_cluster(g, params);
  if (!res.eigensolver_converged)
    err << "warning: eigensolver did not converge after " << res.eigensolver_iterations
        << " iterations (max residual " << res.eigensolver_max_residual << ")\n";

  const fs::path dir = a.out;
  ensure_dir(dir);
  std::ostringstream header;
  header << "specluster " << SPECLUSTER_VERSION << " cluster mode=" << to_string(res.params.mode)
         << " k=" << res.params.k << " l=" << res.params.dims << " t=" << res.params.t
         << " seed=" << res.params.seed;
  save_labels(dir / "labels.txt", res.partition, header.str());
  save_embedding(dir / "embedding.csv", res.embedding, res.params.seed);
  if (!loaded.names.empty()) write_names(dir / "ids.txt", loaded.names);

  ClusteringReport report = evaluate_partition(g, res.partition, truth ? &*truth : nullptr);
  report.timings_ms = {{"embed", res.timings.embed_ms},
                       {"scale", res.timings.scale_ms},
                       {"kmeans", res.timings.kmeans_ms},
                       {"total", res.timings.total_ms}};
  // Timings vary between runs, so they live in meta.json only.
  write_text_file(dir / "report.json", report_to_json(report, false));

  json meta = tool_info("cluster");
  json cfg;
  cfg["graph"] = a.graph;
  cfg["truth"] = a.truth;
  cfg["k"] = res.params.k;
  cfg["mode"] = std::string(to_string(res.params.mode));
  cfg["epsilon"] = res.params.epsilon ? json(*res.params.epsilon) : json(nullptr);
  cfg["l"] = res.params.l;
  cfg["t"] = res.params.t;
  cfg["embedding_dims"] = res.params.dims;
  cfg["seed"] = res.params.seed;
  cfg["threads"] = params.threads;
  cfg["kmeans_restarts"] = params.kmeans.restarts;
  cfg["kmeans_max_iters"] = params.kmeans.lloyd.max_iters;
  cfg["kmeans_tol"] = params.kmeans.lloyd.tol;
  cfg["allow_self_loops"] = a.allow_self_loops;
  cfg["drop_isolated"] = a.drop_isolated;
  meta["config"] = cfg;
  meta["graph"] = {{"n", g.num_vertices()}, {"m", g.num_edges()}, {"id_map", loaded.names.empty() ? "" : "ids.txt"}};
  meta["kmeans_cost"] = res.kmeans_cost;
  if (res.params.mode == Mode::eigs_k || res.params.mode == Mode::eigs_log_k) {
    meta["eigensolver"] = {{"converged", res.eigensolver_converged},
                           {"iterations", res.eigensolver_iterations},
                           {"max_residual", res.eigensolver_max_residual}};
  }
  meta["timings_ms"] = {{"embed", res.timings.embed_ms},
                        {"scale", res.timings.scale_ms},
                        {"kmeans", res.timings.kmeans_ms},
                        {"total", res.timings.total_ms}};
  write_json(dir / "meta.json", meta);

  out << "clustered " << g.num_vertices() << " vertices into k=" << res.params.k << " ("
      << to_string(res.params.mode) << ", l=" << res.params.dims << ", t=" << res.params.t << ") in "
      << res.timings.total_ms << " ms";
  if (truth) out << "; ARI=" << report.ari << " NMI=" << report.nmi;
  out << "\n";
  return kExitOk;
}

int do_generate_sbm(const SbmParams& p, const std::string& out_dir, std::ostream& out) {
  const SbmSample s = sample_sbm(p);
  const fs::path dir = out_dir;
  ensure_dir(dir);
  save_edge_list(dir / "graph.tsv", s.graph);
  save_labels(dir / "labels.txt", s.planted);

  json rec = tool_info("generate-sbm");
  rec["params"] = {{"n", p.n}, {"k", p.k}, {"p", p.p}, {"q", p.q}};
  rec["seed"] = p.seed;
  rec["vertices"] = s.graph.num_vertices();
  rec["edges"] = s.graph.num_edges();
  std::vector<Vertex> dropped;
  if (!s.kept.empty()) {
    std::size_t next = 0;
    for (std::size_t v = 0; v < p.n; ++v) {
      if (next < s.kept.size() && s.kept[next] == v) {
        ++next;
      } else {
        dropped.push_back(static_cast<Vertex>(v));
      }
    }
  }
  rec["dropped_vertices"] = dropped;
  rec["kept_vertices"] = s.kept;
  write_text_file(dir / "meta.jsonl", rec.dump() + "\n");
  out << "generated SBM with " << s.graph.num_vertices() << " vertices and " << s.graph.num_edges() << " edges"
      << (dropped.empty() ? "" : " (" + std::to_string(dropped.size()) + " isolated vertices dropped)") << "\n";
  return kExitOk;
}

int do_knn_graph(const std::string& points_path, std::size_t knn, std::size_t threads, const std::string& out_dir,
                 std::ostream& out) {
  const PointCloud pc = load_points_csv(points_path);
  const Graph g = build_knn_graph(pc.points, knn, threads);
  const fs::path dir = out_dir;
  ensure_dir(dir);
  save_edge_list(dir / "graph.tsv", g);
  if (pc.labels) save_labels(dir / "labels.txt", *pc.labels);
  json meta = tool_info("knn-graph");
  meta["config"] = {{"points", points_path}, {"knn", knn}, {"metric", "euclidean"}, {"symmetrization", "union"}};
  meta["graph"] = {{"n", g.num_vertices()}, {"m", g.num_edges()}};
  write_json(dir / "meta.json", meta);
  out << "built " << knn << "-NN graph with " << g.num_vertices() << " vertices and " << g.num_edges()
      << " edges\n";
  return kExitOk;
}

int do_evaluate(const std::string& graph, const std::string& labels, const std::string& truth,
                const std::string& out_dir, std::ostream& out) {
  const LoadedGraph loaded = load_edge_list(graph);
  const Partition a = load_labels(labels, loaded.graph.num_vertices());
  const Partition s = load_labels(truth, loaded.graph.num_vertices());
  const ClusteringReport report = evaluate_partition(loaded.graph, a, &s);
  const fs::path dir = out_dir;
  ensure_dir(dir);
  write_text_file(dir / "report.json", report_to_json(report, false));
  json meta = tool_info("evaluate");
  meta["config"] = {{"graph", graph}, {"labels", labels}, {"truth", truth}};
  write_json(dir / "meta.json", meta);
  out << "ARI=" << report.ari << " NMI=" << report.nmi << " matched_sym_diff_volume=" << report.matched_sym_diff_volume
      << "\n";
  return kExitOk;
}

std::vector<Mode> parse_modes(const std::vector<std::string>& names) {
  std::vector<Mode> modes;
  for (const auto& n : names) modes.push_back(parse_mode(n));
  if (modes.empty()) throw InputError("--modes must list at least one mode");
  return modes;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"specluster: fast spectral graph clustering"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(SPECLUSTER_VERSION));

  ClusterArgs ca;
  auto* cluster = app.add_subcommand("cluster", "Cluster a graph given as an edge list");
  cluster->add_option("--graph", ca.graph, "Edge-list file")->required();
  cluster->add_option("--k", ca.k, "Number of clusters")->required();
  cluster->add_option("--mode", ca.mode, "pm_log_k | pm_k | eigs_k | eigs_log_k");
  cluster->add_option("--epsilon", ca.epsilon, "Accuracy parameter; derives l and t when they are not given");
  cluster->add_option("--l", ca.l, "Number of power-method vectors (pm_log_k)");
  cluster->add_option("--t", ca.t, "Power-method steps");
  cluster->add_option("--seed", ca.seed, "Random seed (default: $SPECLUSTER_SEED or 0)");
  cluster->add_option("--out", ca.out, "Output directory")->required();
  cluster->add_option("--truth", ca.truth, "Ground-truth labels for the report");
  cluster->add_option("--threads", ca.threads, "Worker threads (results do not depend on it)");
  cluster->add_option("--restarts", ca.restarts, "k-means restarts");
  cluster->add_flag("--allow-self-loops", ca.allow_self_loops, "Keep self-loops (counted once in the degree)");
  cluster->add_flag("--drop-isolated", ca.drop_isolated, "Remove degree-0 vertices and write ids.txt");

  SbmParams sbm;
  std::string sbm_out;
  std::optional<std::uint64_t> sbm_seed;
  auto* gen = app.add_subcommand("generate-sbm", "Sample a stochastic block model graph");
  gen->add_option("--n", sbm.n, "Vertices")->required();
  gen->add_option("--k", sbm.k, "Blocks")->required();
  gen->add_option("--p", sbm.p, "Within-block edge probability")->required();
  gen->add_option("--q", sbm.q, "Between-block edge probability")->required();
  gen->add_option("--seed", sbm_seed, "Random seed (default: $SPECLUSTER_SEED or 0)");
  gen->add_option("--out", sbm_out, "Output directory")->required();

  std::string points_path, knn_out;
  std::size_t knn = 10;
  std::size_t knn_threads = default_thread_count();
  auto* knn_cmd = app.add_subcommand("knn-graph", "Build a kNN graph from a points CSV");
  knn_cmd->add_option("--points", points_path, "Points CSV")->required();
  knn_cmd->add_option("--knn", knn, "Neighbours per point");
  knn_cmd->add_option("--threads", knn_threads, "Worker threads");
  knn_cmd->add_option("--out", knn_out, "Output directory")->required();

  std::string ev_graph, ev_labels, ev_truth, ev_out;
  auto* ev = app.add_subcommand("evaluate", "Score a clustering against ground truth");
  ev->add_option("--graph", ev_graph, "Edge-list file")->required();
  ev->add_option("--labels", ev_labels, "Predicted labels")->required();
  ev->add_option("--truth", ev_truth, "Ground-truth labels")->required();
  ev->add_option("--out", ev_out, "Output directory")->required();

  BenchConfig gk;
  gk.sweep = BenchConfig::Sweep::grow_k;
  std::vector<std::string> gk_modes{"pm_log_k", "pm_k", "eigs_k"};
  std::string gk_out;
  auto* growk = app.add_subcommand("bench-growk", "Runtime sweep over k with n = 1000 k");
  growk->add_option("--kmax", gk.kmax, "Largest k")->required();
  growk->add_option("--modes", gk_modes, "Comma-separated modes")->delimiter(',');
  growk->add_option("--seeds", gk.seeds, "Comma-separated seeds")->delimiter(',');
  growk->add_option("--threads", gk.threads, "Worker threads");
  growk->add_option("--out", gk_out, "Output directory")->required();

  BenchConfig gn;
  gn.sweep = BenchConfig::Sweep::grow_n;
  std::vector<std::string> gn_modes{"pm_log_k", "pm_k", "eigs_k"};
  std::string gn_out;
  auto* grown = app.add_subcommand("bench-grown", "Runtime sweep over n with k = 20");
  grown->add_option("--nmax", gn.nmax, "Largest n")->required();
  grown->add_option("--nmin", gn.nmin, "Smallest n");
  grown->add_option("--modes", gn_modes, "Comma-separated modes")->delimiter(',');
  grown->add_option("--seeds", gn.seeds, "Comma-separated seeds")->delimiter(',');
  grown->add_option("--threads", gn.threads, "Worker threads");
  grown->add_option("--out", gn_out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*cluster) return do_cluster(ca, out, err);
    if (*gen) {
      sbm.seed = sbm_seed ? *sbm_seed : env_seed();
      return do_generate_sbm(sbm, sbm_out, out);
    }
    if (*knn_cmd) return do_knn_graph(points_path, knn, knn_threads, knn_out, out);
    if (*ev) return do_evaluate(ev_graph, ev_labels, ev_truth, ev_out, out);
    if (*growk) {
      gk.modes = parse_modes(gk_modes);
      gk.out = gk_out;
      run_bench(gk, out);
      return kExitOk;
    }
    if (*grown) {
      gn.modes = parse_modes(gn_modes);
      gn.out = gn_out;
      run_bench(gn, out);
      return kExitOk;
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("specluster");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace specluster::cli
