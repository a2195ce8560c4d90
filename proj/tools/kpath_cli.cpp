// Command-line pipeline: generate planted-community benchmarks, weight
// networks with kappa-path edge centrality, detect communities, and evaluate
// the outcomes. Every subcommand that writes files also writes a
// <output>.manifest.json recording parameters and checksums, so any artifact
// can be reproduced bit-for-bit by re-running with the recorded flags.

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kpath/community.hpp"
#include "kpath/copra.hpp"
#include "kpath/error.hpp"
#include "kpath/graph.hpp"
#include "kpath/metrics.hpp"
#include "kpath/oracle.hpp"
#include "kpath/partition.hpp"
#include "kpath/synthgen.hpp"
#include "kpath/walk.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace kpath;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;       // bad flags or invalid parameter values
constexpr int kExitParse = 3;       // malformed input file
constexpr int kExitIo = 4;          // file system trouble
constexpr int kExitDomain = 5;      // semantically impossible request
constexpr int kExitGeneration = 6;  // benchmark spec cannot be realized

constexpr int kSchemaVersion = 1;

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (const unsigned char c : data) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path.string());
  return buf.str();
}

void write_file(const fs::path& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << data;
  if (!out) throw IoError("cannot write " + path.string());
}

std::string checksum_hex(const fs::path& path) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(read_file(path))));
  return buf;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm_utc{};
  gmtime_r(&t, &tm_utc);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

// Reproduction record for one pipeline run; written next to the primary
// output as <output>.manifest.json.
class Manifest {
 public:
  Manifest(std::string subcommand, json parameters)
      : body_{{"schema_version", kSchemaVersion},
              {"tool", "kpath"},
              {"subcommand", std::move(subcommand)},
              {"parameters", std::move(parameters)},
              {"inputs", json::array()},
              {"outputs", json::array()}} {}

  void add_input(const fs::path& path) {
    body_["inputs"].push_back({{"path", path.string()}, {"fnv1a64", checksum_hex(path)}});
  }
  void add_output(const fs::path& path) {
    body_["outputs"].push_back({{"path", path.string()}, {"fnv1a64", checksum_hex(path)}});
  }

  void write(const fs::path& primary_output) {
    body_["timestamp_utc"] = utc_timestamp();
    write_file(primary_output.string() + ".manifest.json", body_.dump(2) + "\n");
  }

 private:
  json body_;
};

Graph load_graph_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return load_edge_list(in);
}

Partition load_partition_file(const Graph& g, const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return read_partition(g, in);
}

double elapsed_ms(const std::chrono::steady_clock::time_point& from) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - from)
      .count();
}

SourcePolicy parse_policy(const std::string& name) {
  if (name == "degree") return SourcePolicy::kDegreeProportional;
  if (name == "uniform") return SourcePolicy::kUniform;
  throw ValidationError("unknown source policy: " + name);
}

CentralityConvention parse_convention(const std::string& name) {
  if (name == "theorem") return CentralityConvention::kTheoremForm;
  if (name == "pseudocode") return CentralityConvention::kPseudocodeForm;
  throw ValidationError("unknown centrality convention: " + name);
}

// ---------------------------------------------------------------------------
// weight
// ---------------------------------------------------------------------------

struct WeightArgs {
  std::string graph_path;
  std::string out_path;
  std::uint32_t kappa = 20;
  std::optional<std::uint64_t> rho;
  std::uint64_t seed = 0;
  std::string policy = "degree";
  std::string convention = "theorem";
};

int cmd_weight(const WeightArgs& args) {
  const auto t0 = std::chrono::steady_clock::now();
  const Graph g = load_graph_file(args.graph_path);

  WalkConfig cfg;
  cfg.kappa = args.kappa;
  cfg.rho = args.rho;
  cfg.seed = args.seed;
  cfg.source_policy = parse_policy(args.policy);
  cfg.convention = parse_convention(args.convention);
  const CentralityMap centrality = werw_kpath(g, cfg);

  std::ostringstream out;
  write_weighted_edge_list(g, centrality, out);
  write_file(args.out_path, out.str());

  Manifest manifest("weight", {{"graph", args.graph_path},
                               {"out", args.out_path},
                               {"kappa", args.kappa},
                               {"rho", centrality.rho_used},
                               {"seed", args.seed},
                               {"source_policy", args.policy},
                               {"convention", args.convention}});
  manifest.add_input(args.graph_path);
  manifest.add_output(args.out_path);
  manifest.write(args.out_path);

  std::cout << "weighted " << g.edge_count() << " edges (" << g.vertex_count() << " vertices), rho="
            << centrality.rho_used << ", kappa=" << args.kappa << ", " << elapsed_ms(t0)
            << " ms\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// detect
// ---------------------------------------------------------------------------

struct DetectArgs {
  std::string graph_path;
  std::string out_path;
  std::string algo = "louvain";
  std::uint64_t seed = 0;
  double min_gain = 1e-9;
  std::uint32_t max_levels = 32;
  std::uint32_t v_max = 1;
  std::uint32_t max_iterations = 100;
  std::string crisp_out;  // copra only: partition projection of the cover
};

int cmd_detect(const DetectArgs& args) {
  const auto t0 = std::chrono::steady_clock::now();
  const Graph g = load_graph_file(args.graph_path);

  Partition crisp;
  json parameters = {{"graph", args.graph_path}, {"out", args.out_path},
                     {"algo", args.algo},        {"seed", args.seed}};
  if (args.algo == "louvain") {
    LouvainConfig cfg;
    cfg.seed = args.seed;
    cfg.min_gain = args.min_gain;
    cfg.max_levels = args.max_levels;
    const LouvainResult result = louvain(g, cfg);
    crisp = result.partition;
    std::ostringstream out;
    write_partition(g, crisp, out);
    write_file(args.out_path, out.str());
    parameters["min_gain"] = args.min_gain;
    parameters["max_levels"] = args.max_levels;
    parameters["levels"] = result.hierarchy.size();
  } else if (args.algo == "copra") {
    CopraConfig cfg;
    cfg.v_max = args.v_max;
    cfg.max_iterations = args.max_iterations;
    cfg.seed = args.seed;
    const CoverPartition cover = copra(g, cfg);
    crisp = crisp_projection(cover);
    std::ostringstream out;
    write_cover(g, cover, out);
    write_file(args.out_path, out.str());
    parameters["v_max"] = args.v_max;
    parameters["max_iterations"] = args.max_iterations;
    if (!args.crisp_out.empty()) {
      std::ostringstream crisp_stream;
      write_partition(g, crisp, crisp_stream);
      write_file(args.crisp_out, crisp_stream.str());
      parameters["crisp_out"] = args.crisp_out;
    }
  } else {
    throw CLI::ValidationError("--algo", "unknown algorithm: " + args.algo);
  }

  const double q = modularity(g, crisp);
  Manifest manifest("detect", parameters);
  manifest.add_input(args.graph_path);
  manifest.add_output(args.out_path);
  if (!args.crisp_out.empty()) manifest.add_output(args.crisp_out);
  manifest.write(args.out_path);

  std::cout << "algo=" << args.algo << " communities=" << crisp.community_count << " Q=" << q
            << " (" << elapsed_ms(t0) << " ms)\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// eval
// ---------------------------------------------------------------------------

struct EvalArgs {
  std::string graph_path;
  std::string partition_a;
  std::string partition_b;
  std::string truth;
  std::string out_path;
  std::vector<std::string> correlate;  // two weighted edge lists
};

int cmd_eval(const EvalArgs& args) {
  const auto t_total = std::chrono::steady_clock::now();
  json runtime;

  auto t = std::chrono::steady_clock::now();
  const Graph g = load_graph_file(args.graph_path);
  const Partition a = load_partition_file(g, args.partition_a);
  const std::string second_path = args.partition_b.empty() ? args.truth : args.partition_b;
  const Partition b = load_partition_file(g, second_path);
  runtime["load"] = elapsed_ms(t);

  t = std::chrono::steady_clock::now();
  const double q_a = modularity(g, a);
  const double q_b = modularity(g, b);
  runtime["modularity"] = elapsed_ms(t);

  t = std::chrono::steady_clock::now();
  const double similarity = nmi(a, b);
  runtime["nmi"] = elapsed_ms(t);

  json correlations;
  if (!args.correlate.empty()) {
    t = std::chrono::steady_clock::now();
    const Graph wa = load_graph_file(args.correlate[0]);
    const Graph wb = load_graph_file(args.correlate[1]);
    if (wa.edge_count() != wb.edge_count())
      throw std::domain_error("correlation inputs must describe the same edges");
    std::vector<double> va, vb;
    va.reserve(wa.edge_count());
    vb.reserve(wb.edge_count());
    for (const Edge& e : wa.edges()) va.push_back(e.weight);
    for (const Edge& e : wb.edges()) vb.push_back(e.weight);
    const CorrelationReport rep = correlation_report(va, vb);
    correlations = {{"pearson", rep.pearson_r},
                    {"spearman", rep.spearman_rho},
                    {"kendall", rep.kendall},
                    {"p_values",
                     {{"pearson", rep.p_pearson},
                      {"spearman", rep.p_spearman},
                      {"kendall", rep.p_kendall}}}};
    runtime["correlations"] = elapsed_ms(t);
  }

  runtime["total"] = elapsed_ms(t_total);
  json report = {{"schema_version", kSchemaVersion},
                 {"q_unweighted", q_a},
                 {"q_weighted", q_b},
                 {"q_gain_percent", q_a == 0.0 ? 0.0 : 100.0 * (q_b - q_a) / std::fabs(q_a)},
                 {"nmi", similarity},
                 {"correlations", args.correlate.empty() ? json(nullptr) : correlations},
                 {"runtime_ms", runtime}};

  const std::string text = report.dump(2) + "\n";
  std::cout << text;
  if (!args.out_path.empty()) {
    write_file(args.out_path, text);
    Manifest manifest("eval", {{"graph", args.graph_path},
                               {"partition_a", args.partition_a},
                               {"partition_b", args.partition_b},
                               {"truth", args.truth},
                               {"correlate", args.correlate},
                               {"out", args.out_path}});
    manifest.add_input(args.graph_path);
    manifest.add_input(args.partition_a);
    manifest.add_input(second_path);
    manifest.add_output(args.out_path);
    manifest.write(args.out_path);
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// gen / grid
// ---------------------------------------------------------------------------

json spec_to_json(const GenSpec& spec) {
  return {{"n", spec.n},     {"avg_degree", spec.avg_degree}, {"gamma", spec.gamma},
          {"beta", spec.beta}, {"mu", spec.mu},               {"max_degree", spec.max_degree},
          {"seed", spec.seed}};
}

// Writes <prefix>.edges, <prefix>.truth, and a <prefix>.json sidecar with the
// spec and realized statistics. Returns the sidecar json.
json write_benchmark(const GenSpec& spec, const std::string& prefix) {
  const Benchmark bench = generate(spec);

  std::ostringstream edges;
  std::vector<double> unit(bench.graph.edge_count(), 1.0);
  write_weighted_edge_list(bench.graph, unit, edges);
  write_file(prefix + ".edges", edges.str());

  std::ostringstream truth;
  write_partition(bench.graph, bench.truth, truth);
  write_file(prefix + ".truth", truth.str());

  json sidecar = {{"schema_version", kSchemaVersion},
                  {"spec", spec_to_json(spec)},
                  {"realized",
                   {{"mu", bench.realized_mu},
                    {"avg_degree", bench.realized_avg_degree},
                    {"edges", bench.graph.edge_count()},
                    {"communities", bench.truth.community_count}}},
                  {"files",
                   {{"graph", fs::path(prefix + ".edges").filename().string()},
                    {"truth", fs::path(prefix + ".truth").filename().string()}}}};
  write_file(prefix + ".json", sidecar.dump(2) + "\n");
  return sidecar;
}

struct GenArgs {
  GenSpec spec;
  std::string out_prefix;
};

int cmd_gen(const GenArgs& args) {
  write_benchmark(args.spec, args.out_prefix);
  Manifest manifest("gen", {{"out_prefix", args.out_prefix}, {"spec", spec_to_json(args.spec)}});
  manifest.add_output(args.out_prefix + ".edges");
  manifest.add_output(args.out_prefix + ".truth");
  manifest.add_output(args.out_prefix + ".json");
  manifest.write(args.out_prefix);
  std::cout << "benchmark written to " << args.out_prefix << ".{edges,truth,json}\n";
  return kExitOk;
}

struct GridArgs {
  std::string out_dir;
  std::uint32_t n = 1000;
  std::uint64_t seed_base = 0;
};

int cmd_grid(const GridArgs& args) {
  fs::create_directories(args.out_dir);
  const auto grid = parameter_grid(args.n, args.seed_base);
  Manifest manifest("grid",
                    {{"out_dir", args.out_dir}, {"n", args.n}, {"seed_base", args.seed_base}});
  for (std::size_t i = 0; i < grid.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "cell_%02zu", i);
    const std::string prefix = (fs::path(args.out_dir) / name).string();
    write_benchmark(grid[i], prefix);
    manifest.add_output(prefix + ".json");
  }
  manifest.write((fs::path(args.out_dir) / "grid").string());
  std::cout << "wrote " << grid.size() << " benchmarks to " << args.out_dir << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// experiment
// ---------------------------------------------------------------------------

struct ExperimentArgs {
  std::string grid_dir;
  std::string out_csv;
  std::vector<std::string> algos = {"louvain"};
  std::uint32_t runs = 10;
  std::uint64_t seed_base = 0;
  std::uint32_t kappa = 20;
  std::uint32_t threads = 0;  // 0: KPATH_THREADS env or hardware concurrency
};

struct ExperimentCell {
  fs::path sidecar;
  std::string algo;
};

struct CellResult {
  std::string benchmark;
  json spec;
  std::string algo;
  std::string status = "ok";
  double mean_q_unweighted = 0.0, mean_q_weighted = 0.0;
  double mean_nmi_unweighted = 0.0, mean_nmi_weighted = 0.0;
  double t_stat = 0.0, p_value = 1.0;
};

Partition detect_for_experiment(const Graph& g, const std::string& algo, std::uint64_t seed) {
  if (algo == "louvain") {
    LouvainConfig cfg;
    cfg.seed = seed;
    return louvain(g, cfg).partition;
  }
  if (algo == "copra") {
    CopraConfig cfg;
    cfg.seed = seed;
    return crisp_projection(copra(g, cfg));
  }
  throw ValidationError("unknown algorithm: " + algo);
}

CellResult run_cell(const ExperimentCell& cell, const ExperimentArgs& args) {
  CellResult result;
  result.benchmark = cell.sidecar.stem().string();
  result.algo = cell.algo;
  try {
    const json sidecar = json::parse(read_file(cell.sidecar));
    result.spec = sidecar.at("spec");
    const fs::path dir = cell.sidecar.parent_path();
    const Graph g = load_graph_file(dir / sidecar.at("files").at("graph").get<std::string>());
    std::ifstream truth_in(dir / sidecar.at("files").at("truth").get<std::string>());
    const Partition truth = read_partition(g, truth_in);

    std::vector<double> nmi_unweighted, nmi_weighted;
    double q_unweighted = 0.0, q_weighted = 0.0;
    for (std::uint32_t run = 0; run < args.runs; ++run) {
      const std::uint64_t seed = args.seed_base + run;  // pairing across arms

      const Partition plain = detect_for_experiment(g, cell.algo, seed);
      q_unweighted += modularity(g, plain);
      nmi_unweighted.push_back(nmi(plain, truth));

      WalkConfig wcfg;
      wcfg.kappa = args.kappa;
      wcfg.seed = seed;
      const CentralityMap centrality = werw_kpath(g, wcfg);
      std::vector<Edge> reweighted = g.edges();
      for (EdgeId e = 0; e < g.edge_count(); ++e) reweighted[e].weight = centrality.estimate[e];
      const Graph gw = Graph::from_edges(g.vertex_count(), std::move(reweighted));

      const Partition weighted = detect_for_experiment(gw, cell.algo, seed);
      q_weighted += modularity(gw, weighted);
      nmi_weighted.push_back(nmi(weighted, truth));
    }
    result.mean_q_unweighted = q_unweighted / args.runs;
    result.mean_q_weighted = q_weighted / args.runs;
    for (const double v : nmi_unweighted) result.mean_nmi_unweighted += v / args.runs;
    for (const double v : nmi_weighted) result.mean_nmi_weighted += v / args.runs;
    const TTestResult test = paired_t_test(nmi_weighted, nmi_unweighted);
    result.t_stat = test.t;
    result.p_value = test.p;
  } catch (const std::exception& e) {
    result.status = std::string("error: ") + e.what();
  }
  return result;
}

int cmd_experiment(const ExperimentArgs& args) {
  std::vector<fs::path> sidecars;
  for (const auto& entry : fs::directory_iterator(args.grid_dir))
    if (entry.path().extension() == ".json" &&
        entry.path().string().find(".manifest.") == std::string::npos)
      sidecars.push_back(entry.path());
  std::sort(sidecars.begin(), sidecars.end());
  if (sidecars.empty()) throw std::domain_error("no benchmark sidecars in " + args.grid_dir);

  std::vector<ExperimentCell> cells;
  for (const auto& sidecar : sidecars)
    for (const auto& algo : args.algos) cells.push_back({sidecar, algo});

  std::uint32_t threads = args.threads;
  if (threads == 0) {
    if (const char* env = std::getenv("KPATH_THREADS")) threads = std::atoi(env);
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  }
  threads = std::min<std::uint32_t>(threads, cells.size());

  std::vector<CellResult> results(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      results[i] = run_cell(cells[i], args);
    }
  };
  std::vector<std::thread> pool;
  for (std::uint32_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::ostringstream csv;
  csv << "schema_version,benchmark,n,gamma,beta,avg_degree,mu,gen_seed,algo,weighted,runs,"
         "mean_q,mean_nmi,t_stat,p_value,status\n";
  auto row = [&](const CellResult& r, bool weighted) {
    csv << kSchemaVersion << ',' << r.benchmark << ',';
    if (r.spec.is_object())
      csv << r.spec.value("n", 0) << ',' << r.spec.value("gamma", 0.0) << ','
          << r.spec.value("beta", 0.0) << ',' << r.spec.value("avg_degree", 0.0) << ','
          << r.spec.value("mu", 0.0) << ',' << r.spec.value("seed", 0);
    else
      csv << ",,,,,";
    csv << ',' << r.algo << ',' << (weighted ? 1 : 0) << ',' << args.runs << ','
        << (weighted ? r.mean_q_weighted : r.mean_q_unweighted) << ','
        << (weighted ? r.mean_nmi_weighted : r.mean_nmi_unweighted) << ',' << r.t_stat << ','
        << r.p_value << ',' << (r.status == "ok" ? "ok" : r.status) << '\n';
  };
  for (const CellResult& r : results) {
    row(r, false);
    row(r, true);
  }
  write_file(args.out_csv, csv.str());

  Manifest manifest("experiment", {{"grid_dir", args.grid_dir},
                                   {"out", args.out_csv},
                                   {"algos", args.algos},
                                   {"runs", args.runs},
                                   {"seed_base", args.seed_base},
                                   {"kappa", args.kappa}});
  for (const auto& sidecar : sidecars) manifest.add_input(sidecar);
  manifest.add_output(args.out_csv);
  manifest.write(args.out_csv);

  std::cout << "experiment finished: " << cells.size() << " cells, " << args.runs
            << " paired runs each -> " << args.out_csv << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// oracle (developer reference implementations)
// ---------------------------------------------------------------------------

struct OracleArgs {
  std::string mode;  // walkdist | betweenness | maxq
  std::string graph_path;
  std::uint32_t kappa = 3;
  std::string policy = "degree";
  std::string out_path;
};

int cmd_oracle(const OracleArgs& args) {
  const Graph g = load_graph_file(args.graph_path);
  std::ostringstream out;
  if (args.mode == "walkdist") {
    const auto dist = oracle::exact_walk_distribution(g, args.kappa, parse_policy(args.policy));
    for (EdgeId e = 0; e < g.edge_count(); ++e)
      out << g.original_id(g.edge(e).a) << ' ' << g.original_id(g.edge(e).b) << ' '
          << detail::format_weight(dist.edge_probability[e]) << '\n';
  } else if (args.mode == "betweenness") {
    const auto b = oracle::edge_betweenness(g);
    for (EdgeId e = 0; e < g.edge_count(); ++e)
      out << g.original_id(g.edge(e).a) << ' ' << g.original_id(g.edge(e).b) << ' '
          << detail::format_weight(b[e]) << '\n';
  } else if (args.mode == "maxq") {
    const auto best = oracle::exhaustive_modularity_max(g);
    out << "# best_q " << detail::format_weight(best.best_q) << " over "
        << best.partitions_enumerated << " partitions\n";
    for (VertexId v = 0; v < g.vertex_count(); ++v)
      out << g.original_id(v) << ' ' << best.best.assignment[v] << '\n';
  } else {
    throw CLI::ValidationError("mode", "unknown oracle mode: " + args.mode);
  }

  if (args.out_path.empty()) {
    std::cout << out.str();
  } else {
    write_file(args.out_path, out.str());
    Manifest manifest("oracle", {{"mode", args.mode},
                                 {"graph", args.graph_path},
                                 {"kappa", args.kappa},
                                 {"source_policy", args.policy},
                                 {"out", args.out_path}});
    manifest.add_input(args.graph_path);
    manifest.add_output(args.out_path);
    manifest.write(args.out_path);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kappa-path edge centrality and community detection pipeline"};
  app.require_subcommand(1);

  WeightArgs weight_args;
  auto* weight = app.add_subcommand("weight", "compute kappa-path edge centrality weights");
  weight->add_option("graph", weight_args.graph_path, "input edge list")->required();
  weight->add_option("-o,--out", weight_args.out_path, "weighted edge list output")->required();
  weight->add_option("--kappa", weight_args.kappa, "walk length bound");
  std::uint64_t rho_flag = 0;
  weight->add_option("--rho", rho_flag, "number of walks (default: edge count)");
  weight->add_option("--seed", weight_args.seed, "rng seed");
  weight->add_option("--source-policy", weight_args.policy, "degree|uniform");
  weight->add_option("--convention", weight_args.convention, "theorem|pseudocode");

  DetectArgs detect_args;
  auto* detect = app.add_subcommand("detect", "run a community detector");
  detect->add_option("graph", detect_args.graph_path, "input edge list")->required();
  detect->add_option("-o,--out", detect_args.out_path, "partition (or cover) output")->required();
  detect->add_option("--algo", detect_args.algo, "louvain|copra")->required();
  detect->add_option("--seed", detect_args.seed, "rng seed");
  detect->add_option("--min-gain", detect_args.min_gain, "louvain convergence epsilon");
  detect->add_option("--max-levels", detect_args.max_levels, "louvain hierarchy cap");
  detect->add_option("--vmax", detect_args.v_max, "copra max memberships per vertex");
  detect->add_option("--max-iterations", detect_args.max_iterations, "copra iteration cap");
  detect->add_option("--crisp-out", detect_args.crisp_out, "copra: also write the crisp partition");

  EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "compare partitions and report metrics");
  eval->add_option("--graph", eval_args.graph_path, "edge list both partitions refer to")
      ->required();
  eval->add_option("--partition-a", eval_args.partition_a, "first partition file")->required();
  auto* opt_b = eval->add_option("--partition-b", eval_args.partition_b, "second partition file");
  auto* opt_truth = eval->add_option("--truth", eval_args.truth, "ground-truth partition file");
  opt_b->excludes(opt_truth);
  eval->add_option("-o,--out", eval_args.out_path, "also write the JSON report here");
  eval->add_option("--correlate", eval_args.correlate,
                   "two weighted edge lists whose weights get correlated")
      ->expected(2);

  GenArgs gen_args;
  auto* gen = app.add_subcommand("gen", "generate one planted-community benchmark");
  gen->add_option("-o,--out", gen_args.out_prefix, "output prefix")->required();
  gen->add_option("--n", gen_args.spec.n, "vertices");
  gen->add_option("--avg-degree", gen_args.spec.avg_degree, "target mean degree");
  gen->add_option("--gamma", gen_args.spec.gamma, "degree power-law exponent");
  gen->add_option("--beta", gen_args.spec.beta, "community-size power-law exponent");
  gen->add_option("--mu", gen_args.spec.mu, "mixing parameter in (0,1)");
  gen->add_option("--max-degree", gen_args.spec.max_degree, "degree cap (default n/10)");
  gen->add_option("--seed", gen_args.spec.seed, "rng seed");

  GridArgs grid_args;
  auto* grid = app.add_subcommand("grid", "generate the full 72-benchmark grid");
  grid->add_option("-o,--out", grid_args.out_dir, "output directory")->required();
  grid->add_option("--n", grid_args.n, "vertices per benchmark");
  grid->add_option("--seed-base", grid_args.seed_base, "seed of the first cell");

  ExperimentArgs experiment_args;
  auto* experiment =
      app.add_subcommand("experiment", "paired weighted-vs-unweighted detection study");
  experiment->add_option("--grid-dir", experiment_args.grid_dir, "directory of benchmarks")
      ->required();
  experiment->add_option("-o,--out", experiment_args.out_csv, "CSV output")->required();
  experiment->add_option("--algos", experiment_args.algos, "detectors to run")
      ->delimiter(',');
  experiment->add_option("--runs", experiment_args.runs, "paired runs per cell");
  experiment->add_option("--seed-base", experiment_args.seed_base, "seed of run 0");
  experiment->add_option("--kappa", experiment_args.kappa, "walk length bound");
  experiment->add_option("--threads", experiment_args.threads,
                         "worker threads (default: KPATH_THREADS or hardware)");

  OracleArgs oracle_args;
  auto* oracle_cmd = app.add_subcommand("oracle", "brute-force reference computations");
  oracle_cmd->add_option("mode", oracle_args.mode, "walkdist|betweenness|maxq")->required();
  oracle_cmd->add_option("graph", oracle_args.graph_path, "input edge list")->required();
  oracle_cmd->add_option("--kappa", oracle_args.kappa, "walk length bound (walkdist)");
  oracle_cmd->add_option("--source-policy", oracle_args.policy, "degree|uniform (walkdist)");
  oracle_cmd->add_option("-o,--out", oracle_args.out_path, "write to file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*weight) {
      if (weight->count("--rho")) weight_args.rho = rho_flag;
      return cmd_weight(weight_args);
    }
    if (*detect) return cmd_detect(detect_args);
    if (*eval) {
      if (eval_args.partition_b.empty() && eval_args.truth.empty())
        throw ValidationError("eval needs --partition-b or --truth");
      return cmd_eval(eval_args);
    }
    if (*gen) return cmd_gen(gen_args);
    if (*grid) return cmd_grid(grid_args);
    if (*experiment) return cmd_experiment(experiment_args);
    if (*oracle_cmd) return cmd_oracle(oracle_args);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const ValidationError& e) {
    std::cerr << "invalid value: " << e.what() << "\n";
    return kExitUsage;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "invalid value: " << e.what() << "\n";
    return kExitUsage;
  } catch (const GenerationError& e) {
    std::cerr << "generation failed: " << e.what() << "\n";
    return kExitGeneration;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::domain_error& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kExitDomain;
  }
  return kExitUsage;
}
