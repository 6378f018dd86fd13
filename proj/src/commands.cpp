#include "kmsgraph/commands.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "kmsgraph/errors.hpp"
#include "kmsgraph/graph.hpp"
#include "kmsgraph/json_io.hpp"
#include "kmsgraph/kms.hpp"
#include "kmsgraph/oracle.hpp"
#include "kmsgraph/spectral.hpp"
#include "kmsgraph/tolerances.hpp"

namespace kmsgraph {
namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

DirectedGraph load_graph(const std::string& path) {
  return DirectedGraph::parse(read_file(path));
}

void emit(std::ostream& out, const std::string& out_path, const std::string& bytes) {
  if (out_path.empty()) {
    out << bytes << '\n';
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw ParseError("cannot write '" + out_path + "'");
  f << bytes << '\n';
}

/// --beta / --q pair; exactly one must be given.
struct TemperatureOpt {
  double beta = 0.0;
  double q = 0.0;
  CLI::Option* beta_opt = nullptr;
  CLI::Option* q_opt = nullptr;

  void attach(CLI::App* cmd) {
    beta_opt = cmd->add_option("--beta", beta, "inverse temperature");
    q_opt = cmd->add_option("--q", q, "q = e^{-beta}, an alternative to --beta");
    beta_opt->excludes(q_opt);
    q_opt->excludes(beta_opt);
  }

  double resolve(bool allow_zero) const {
    if (beta_opt->count() == 0 && q_opt->count() == 0)
      throw ParseError("one of --beta or --q is required");
    const double value = q_opt->count() > 0 ? q : std::exp(-beta);
    if (!std::isfinite(value) || value < 0.0)
      throw AdmissibilityError("q = e^{-beta} must be finite and nonnegative");
    if (value == 0.0 && !allow_zero)
      throw AdmissibilityError("infinite beta: use the ground subcommand");
    return value;
  }
};

struct VerifyOpt {
  int depth = 0;  // 0: smallest depth meeting --tol
  double tail_tol = tol::oracle_tail;
  int pairs = 240;
  int words = 2;
  std::uint64_t seed = 1;

  void attach(CLI::App* cmd) {
    cmd->add_option("--depth", depth, "representation depth; 0 picks it from --tol");
    cmd->add_option("--tol", tail_tol, "target tail mass for the automatic depth");
    cmd->add_option("--pairs", pairs, "element pairs checked against the equilibrium identity");
    cmd->add_option("--words", words, "maximum word length of sampled elements");
    cmd->add_option("--seed", seed, "pair sampling seed");
  }
};

struct SplitMix64 {
  std::uint64_t state;
  explicit SplitMix64(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
};

/// Deterministic pool of spanning elements, short words first.
std::vector<SpanningElement> spanning_pool(const DirectedGraph& g, int max_word,
                                           std::size_t cap) {
  std::vector<Path> words;
  for (int len = 0; len <= max_word; ++len)
    for (Path& p : enumerate_paths(g, len)) words.push_back(std::move(p));
  std::vector<SpanningElement> pool;
  for (const Path& mu : words)
    for (const Path& nu : words) {
      if (mu.source() != nu.source()) continue;
      if (pool.size() >= cap) return pool;
      pool.emplace_back(mu, nu);
    }
  return pool;
}

std::vector<std::pair<SpanningElement, SpanningElement>> sample_pairs(
    const std::vector<SpanningElement>& pool, int want, std::uint64_t seed) {
  std::vector<std::pair<SpanningElement, SpanningElement>> pairs;
  const std::size_t count = pool.size();
  if (count == 0 || want <= 0) return pairs;
  if (count * count <= static_cast<std::size_t>(want)) {
    for (const auto& a : pool)
      for (const auto& b : pool) pairs.emplace_back(a, b);
    return pairs;
  }
  SplitMix64 rng(seed);
  pairs.reserve(static_cast<std::size_t>(want));
  for (int k = 0; k < want; ++k) {
    const auto& a = pool[rng.next() % count];
    const auto& b = pool[rng.next() % count];
    pairs.emplace_back(a, b);
  }
  return pairs;
}

nlohmann::json run_verification(const DirectedGraph& g, const KmsStateDescriptor& state,
                                const VerifyOpt& opt, bool& all_pass) {
  int depth = opt.depth;
  bool tail_met = true;
  if (depth <= 0) {
    const DepthChoice choice = choose_depth(g, state.q, state.epsilon, opt.tail_tol);
    depth = choice.depth;
    tail_met = choice.tail_met;
  }
  const TruncatedRep rep = build_truncated_rep(g, depth);
  const Weights weights = state_weights(rep, state.q, state.epsilon);
  const auto pool = spanning_pool(g, opt.words, 64);
  const auto pairs = sample_pairs(pool, opt.pairs, opt.seed);
  const VerificationReport tck = check_tck_relations(rep);
  const VerificationReport kms = kms_condition_check(g, state, rep, weights, pairs);
  all_pass = tail_met && tck.all_pass() && kms.all_pass();

  nlohmann::json out = nlohmann::json::object();
  out["all_pass"] = all_pass;
  out["tail_target_met"] = tail_met;
  out["basis"] = rep.size();
  out["depth"] = depth;
  out["pairs"] = static_cast<int>(pairs.size());
  out["tail_mass"] = weights.tail_mass;
  out["tck"] = report_to_json(tck);
  out["kms"] = report_to_json(kms);
  return out;
}

/// extreme:<vertex>, uniform, an inline JSON object, or a file path.
std::vector<double> parse_epsilon_spec(const DirectedGraph& g, double q,
                                       const std::string& spec) {
  const int n = g.vertex_count();
  if (spec.rfind("extreme:", 0) == 0 || spec == "uniform") {
    const std::vector<double> y =
        q > 0.0 ? y_vector(g, q) : std::vector<double>(n, 1.0);
    std::vector<double> eps(n, 0.0);
    if (spec == "uniform") {
      for (int v = 0; v < n; ++v) eps[v] = 1.0 / (y[v] * n);
      return eps;
    }
    const std::string name = spec.substr(8);
    int u = -1;
    try {
      u = g.vertex_index(name);
    } catch (const Error&) {
      throw ParseError("unknown vertex '" + name + "' in --epsilon");
    }
    eps[u] = 1.0 / y[u];
    return eps;
  }
  const std::string text = !spec.empty() && spec.front() == '{' ? spec : read_file(spec);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("vector is not valid JSON: ") + e.what());
  }
  return vector_from_json(g, doc);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

nlohmann::json vertex_name_array(const DirectedGraph& g, const std::vector<int>& verts) {
  nlohmann::json a = nlohmann::json::array();
  for (int v : verts) a.push_back(g.vertex_name(v));
  return a;
}

void run_analyze(const DirectedGraph& g, std::ostream& out, const std::string& out_path) {
  nlohmann::json j = beta_range_to_json(g, beta_range_report(g));
  j["structural_class"] = std::string(to_string(classify_graph_spectrum(g)));
  j["spectral"] = spectral_to_json(spectral_radius(vertex_matrix(g)));
  j["sources"] = vertex_name_array(g, source_vertices(g));
  j["sinks"] = vertex_name_array(g, sink_vertices(g));
  j["scc_count"] = static_cast<int>(strongly_connected_components(g).size());
  const SaturationChain chain = source_saturation(g);
  nlohmann::json levels = nlohmann::json::array();
  for (const auto& level : chain.levels) levels.push_back(vertex_name_array(g, level));
  j["saturation_chain"] = std::move(levels);
  const BlockDecomposition blocks = block_decomposition(g, chain);
  nlohmann::json bj = nlohmann::json::object();
  bj["order"] = vertex_name_array(g, blocks.order);
  bj["core_dim"] = blocks.core_dim;
  bj["saturated_dim"] = g.vertex_count() - blocks.core_dim;
  j["blocks"] = std::move(bj);
  emit(out, out_path, canonical_json(j));
}

void run_simplex(const DirectedGraph& g, double q, std::ostream& out,
                 const std::string& out_path) {
  nlohmann::json j = nlohmann::json::object();
  j["beta"] = -std::log(q);
  j["q"] = q;
  j["y"] = vector_to_json(g, y_vector(g, q));
  nlohmann::json extremes = nlohmann::json::array();
  for (const auto& eps : simplex_extreme_points(g, q))
    extremes.push_back(state_to_json(g, toeplitz_state(g, q, eps)));
  j["extreme_points"] = std::move(extremes);
  nlohmann::json ck = nlohmann::json::array();
  for (const auto& eps : ck_simplex_extreme_points(g, q))
    ck.push_back(state_to_json(g, toeplitz_state(g, q, eps)));
  j["ck_extreme_points"] = std::move(ck);
  j["toeplitz_dim"] = g.vertex_count() - 1;
  j["ck_dim"] = static_cast<int>(source_vertices(g).size());
  emit(out, out_path, canonical_json(j));
}

void run_sweep(const DirectedGraph& g, double from, double to, int steps,
               const std::string& format, std::ostream& out, const std::string& out_path) {
  if (steps < 1) throw ParseError("--steps must be at least 1");
  const int n = g.vertex_count();
  std::vector<std::string> lines;
  nlohmann::json rows = nlohmann::json::array();
  if (format == "csv") {
    std::string header = "beta,q,admissible";
    for (int v = 0; v < n; ++v) header += "," + csv_field("y_" + g.vertex_name(v));
    for (int v = 0; v < n; ++v) header += "," + csv_field("m_" + g.vertex_name(v));
    header += ",note";
    lines.push_back(std::move(header));
  }
  for (int k = 0; k < steps; ++k) {
    const double beta = steps == 1 ? from : from + k * (to - from) / (steps - 1);
    const double q = std::exp(-beta);
    bool admissible = true;
    std::vector<double> y, m;
    try {
      y = y_vector(g, q);
      // barycenter of the simplex: the average of its extreme points
      std::vector<double> eps(n);
      for (int v = 0; v < n; ++v) eps[v] = 1.0 / (y[v] * n);
      m = measure_from_epsilon(g, q, eps);
    } catch (const AdmissibilityError&) {
      admissible = false;
    }
    if (format == "csv") {
      std::string line = format_double(beta) + "," + format_double(q) + "," +
                         (admissible ? "1" : "0");
      for (int v = 0; v < n; ++v) line += admissible ? "," + format_double(y[v]) : ",";
      for (int v = 0; v < n; ++v) line += admissible ? "," + format_double(m[v]) : ",";
      line += admissible ? "," : ",inadmissible";
      lines.push_back(std::move(line));
    } else {
      nlohmann::json row = nlohmann::json::object();
      row["beta"] = beta;
      row["q"] = q;
      row["admissible"] = admissible;
      row["y"] = admissible ? vector_to_json(g, y) : nlohmann::json();
      row["m"] = admissible ? vector_to_json(g, m) : nlohmann::json();
      row["note"] = admissible ? "" : "inadmissible";
      rows.push_back(std::move(row));
    }
  }
  if (format == "csv") {
    std::string bytes;
    for (std::size_t i = 0; i < lines.size(); ++i) {
      if (i) bytes += '\n';
      bytes += lines[i];
    }
    emit(out, out_path, bytes);
  } else {
    emit(out, out_path, canonical_json(rows));
  }
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"KMS states of the gauge action on the Toeplitz algebra of a finite graph",
               "kmsgraph"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "kmsgraph 0.1.0");
  int exit_code = 0;

  auto* analyze = app.add_subcommand(
      "analyze", "temperature ranges, spectral data, and simplex dimensions");
  std::string analyze_graph, analyze_out;
  analyze->add_option("--graph", analyze_graph, "graph JSON file")->required();
  analyze->add_option("--out", analyze_out, "write output to a file");
  analyze->callback([&] { run_analyze(load_graph(analyze_graph), out, analyze_out); });

  auto* simplex = app.add_subcommand(
      "simplex", "the KMS simplex at one temperature: y vector and extreme points");
  std::string simplex_graph, simplex_out;
  TemperatureOpt simplex_temp;
  simplex->add_option("--graph", simplex_graph, "graph JSON file")->required();
  simplex_temp.attach(simplex);
  simplex->add_option("--out", simplex_out, "write output to a file");
  simplex->callback([&] {
    run_simplex(load_graph(simplex_graph), simplex_temp.resolve(false), out, simplex_out);
  });

  auto* state = app.add_subcommand(
      "state", "the KMS state with a given boundary weight above critical temperature");
  std::string state_graph, state_eps, state_out;
  TemperatureOpt state_temp;
  VerifyOpt state_verify;
  bool state_do_verify = false;
  state->add_option("--graph", state_graph, "graph JSON file")->required();
  state_temp.attach(state);
  state->add_option("--epsilon", state_eps,
                    "boundary weight: extreme:<vertex>, uniform, inline JSON, or a file")
      ->required();
  state->add_flag("--verify", state_do_verify, "verify against the truncated representation");
  state_verify.attach(state);
  state->add_option("--out", state_out, "write output to a file");
  state->callback([&] {
    const DirectedGraph g = load_graph(state_graph);
    const double q = state_temp.resolve(false);
    const KmsStateDescriptor st = toeplitz_state(g, q, parse_epsilon_spec(g, q, state_eps));
    nlohmann::json j = state_to_json(g, st);
    if (state_do_verify) {
      bool ok = false;
      j["verification"] = run_verification(g, st, state_verify, ok);
      if (!ok) exit_code = 4;
    }
    emit(out, state_out, canonical_json(j));
  });

  // no --verify here: the representation oracle needs q rho(A) < 1, and a
  // critical state always sits on that boundary; its certificates are the
  // defining equations, which the state JSON carries (m, epsilon, q)
  auto* critical = app.add_subcommand("critical", "a KMS state at the critical temperature");
  std::string critical_graph, critical_measure, critical_out;
  critical->add_option("--graph", critical_graph, "graph JSON file")->required();
  critical->add_option("--measure", critical_measure,
                       "probability vector m (inline JSON or a file); default: built from "
                       "the graph structure");
  critical->add_option("--out", critical_out, "write output to a file");
  critical->callback([&] {
    const DirectedGraph g = load_graph(critical_graph);
    KmsStateDescriptor st;
    if (critical_measure.empty()) {
      st = strongly_connected(g) ? critical_state_irreducible(g)
                                 : critical_state_with_sources(g);
    } else {
      const std::string text = critical_measure.front() == '{' ? critical_measure
                                                               : read_file(critical_measure);
      nlohmann::json doc;
      try {
        doc = nlohmann::json::parse(text);
      } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("measure is not valid JSON: ") + e.what());
      }
      st = critical_state_from_measure(g, vector_from_json(g, doc));
    }
    emit(out, critical_out, canonical_json(state_to_json(g, st)));
  });

  auto* ground = app.add_subcommand("ground", "a ground state (the beta = infinity limit)");
  std::string ground_graph, ground_eps, ground_out;
  VerifyOpt ground_verify;
  bool ground_do_verify = false;
  ground->add_option("--graph", ground_graph, "graph JSON file")->required();
  ground->add_option("--epsilon", ground_eps,
                     "vertex distribution: extreme:<vertex>, uniform, inline JSON, or a file")
      ->required();
  ground->add_flag("--verify", ground_do_verify, "verify against the truncated representation");
  ground_verify.attach(ground);
  ground->add_option("--out", ground_out, "write output to a file");
  ground->callback([&] {
    const DirectedGraph g = load_graph(ground_graph);
    const KmsStateDescriptor st = ground_state(g, parse_epsilon_spec(g, 0.0, ground_eps));
    nlohmann::json j = state_to_json(g, st);
    if (ground_do_verify) {
      bool ok = false;
      j["verification"] = run_verification(g, st, ground_verify, ok);
      if (!ok) exit_code = 4;
    }
    emit(out, ground_out, canonical_json(j));
  });

  auto* verify = app.add_subcommand(
      "verify", "run the representation checks for a state and report deviations");
  std::string verify_graph, verify_eps, verify_out;
  TemperatureOpt verify_temp;
  VerifyOpt verify_opt;
  verify->add_option("--graph", verify_graph, "graph JSON file")->required();
  verify_temp.attach(verify);
  verify->add_option("--epsilon", verify_eps,
                     "boundary weight: extreme:<vertex>, uniform, inline JSON, or a file")
      ->required();
  verify_opt.attach(verify);
  verify->add_option("--out", verify_out, "write output to a file");
  verify->callback([&] {
    const DirectedGraph g = load_graph(verify_graph);
    const double q = verify_temp.resolve(true);
    const std::vector<double> eps = parse_epsilon_spec(g, q, verify_eps);
    const KmsStateDescriptor st = q == 0.0 ? ground_state(g, eps) : toeplitz_state(g, q, eps);
    bool ok = false;
    const nlohmann::json j = run_verification(g, st, verify_opt, ok);
    if (!ok) exit_code = 4;
    emit(out, verify_out, canonical_json(j));
  });

  auto* sweep = app.add_subcommand(
      "sweep", "tabulate y and the simplex barycenter over a range of temperatures");
  std::string sweep_graph, sweep_out, sweep_format = "csv";
  double sweep_from = 0.0, sweep_to = 0.0;
  int sweep_steps = 25;
  sweep->add_option("--graph", sweep_graph, "graph JSON file")->required();
  sweep->add_option("--from", sweep_from, "first inverse temperature")->required();
  sweep->add_option("--to", sweep_to, "last inverse temperature")->required();
  sweep->add_option("--steps", sweep_steps, "number of samples, endpoints included");
  sweep->add_option("--format", sweep_format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  sweep->add_option("--out", sweep_out, "write output to a file");
  sweep->callback([&] {
    run_sweep(load_graph(sweep_graph), sweep_from, sweep_to, sweep_steps, sweep_format, out,
              sweep_out);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? 0 : 2;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const AdmissibilityError& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return 1;
  }
  return exit_code;
}

}  // namespace kmsgraph
