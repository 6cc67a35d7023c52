#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "proptest/decompose.hpp"
#include "proptest/digraph.hpp"
#include "proptest/distribution.hpp"
#include "proptest/errors.hpp"
#include "proptest/experiments.hpp"
#include "proptest/reduction.hpp"
#include "proptest/sequence.hpp"
#include "proptest/subgraph.hpp"
#include "proptest/testers.hpp"

namespace {

std::string join_command_line(int argc, char** argv) {
  std::ostringstream os;
  for (int i = 0; i < argc; ++i) os << (i ? " " : "") << argv[i];
  return os.str();
}

void print_histogram(const proptest::Histogram& h) {
  std::cout << "histogram:";
  for (const auto& [freq, cnt] : h.counts) std::cout << ' ' << freq << ':' << cnt;
  std::cout << '\n';
}

int cmd_verify(int k_max, bool corrupt_q) {
  auto rows = proptest::run_identity_checks(k_max, corrupt_q);
  std::cout << proptest::render_identity_table(rows);
  bool all = true;
  for (const auto& row : rows) all = all && row.all_pass();
  std::cout << (all ? "all identity checks passed" : "identity checks FAILED") << '\n';
  return all ? 0 : 1;
}

int cmd_gen(const std::string& family, int k, long long n, std::uint64_t seed,
            const std::string& out) {
  proptest::FrequencyDistribution dist =
      family == "A" ? proptest::make_p(k) : proptest::make_q(k);
  proptest::IntSequence seq;
  try {
    seq = proptest::build_sequence_from_distribution(dist, n, seed);
  } catch (const proptest::Unrealizable& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  proptest::write_sequence_file(out, seq);
  std::cout << "wrote " << out << " (n=" << n << " k=" << k << " class=" << family
            << ")\n";
  print_histogram(proptest::histogram(seq));
  std::cout << "farness from " << k << "-occurrence-freeness: "
            << proptest::to_fraction_string(proptest::occurrence_farness(seq, k)) << '\n';
  return 0;
}

int cmd_reduce(const std::string& pattern_path, const std::string& sequence_path,
               std::uint64_t seed, const std::string& out,
               const std::string& command_line) {
  proptest::BoundedDigraph pattern = proptest::read_edge_list_file(pattern_path);
  proptest::IntSequence seq = proptest::read_sequence_file(sequence_path);
  proptest::PatternDecomposition dec = proptest::decompose_and_index(pattern);
  if (seq.cap != dec.k)
    throw proptest::InvalidParameter(
        "sequence cap " + std::to_string(seq.cap) + " does not match the pattern's " +
        std::to_string(dec.k) + " source components");
  std::cout << proptest::describe(dec);

  proptest::BoundedDigraph graph = proptest::build_offline(seq, dec, seed);
  proptest::write_edge_list_file(out, graph);
  std::cout << "wrote " << out << " (" << graph.vertex_count() << " vertices, "
            << graph.edge_count() << " edges, d=" << graph.degree_bound() << ")\n";

  std::vector<int> types = proptest::offline_type_assignment(seq, dec.k, seed);
  std::ostringstream sidecar;
  proptest::write_type_sidecar(sidecar, seed, types);
  proptest::write_text_file(out + ".types", sidecar.str());
  std::cout << "wrote " << out << ".types\n";

  unsigned long long copies = proptest::count_subgraph_copies(graph, pattern);
  proptest::Rational farness = proptest::occurrence_farness(seq, dec.k);
  std::cout << "pattern copies in reduced graph: " << copies << '\n';
  std::cout << "sequence farness (exact): " << proptest::to_fraction_string(farness)
            << '\n';
  std::cout << "transferred eps': "
            << proptest::to_fraction_string(proptest::distance_transfer(
                   farness, pattern.max_degree(), dec))
            << '\n';

  proptest::RunManifest manifest;
  manifest.command_line = command_line;
  manifest.seed = seed;
  manifest.outputs = {out, out + ".types"};
  proptest::write_text_file(out + ".manifest", proptest::render_manifest(manifest));
  std::cout << "wrote " << out << ".manifest\n";
  return 0;
}

int cmd_separation(const proptest::SeparationParams& params, const std::string& out,
                   const std::string& command_line) {
  const std::string manifest_path = out + ".manifest";
  proptest::SeparationOutcome outcome = proptest::run_separation(params, manifest_path);
  for (const auto& warning : outcome.warnings)
    std::cerr << "warning: " << warning << '\n';
  proptest::write_text_file(out, outcome.csv_body);

  proptest::RunManifest manifest;
  manifest.command_line = command_line;
  manifest.seed = params.seed;
  manifest.config_snapshot = params.config.snapshot();
  manifest.outputs = {out};
  proptest::write_text_file(manifest_path, proptest::render_manifest(manifest));
  std::cout << "wrote " << out << " and " << manifest_path << '\n';
  std::cout << outcome.csv_body;
  return 0;
}

int cmd_poisson(const proptest::PoissonParams& params, const std::string& out,
                const std::string& command_line) {
  const std::string manifest_path = out + ".manifest";
  proptest::PoissonOutcome outcome = proptest::run_poisson(params, manifest_path);
  proptest::write_text_file(out, outcome.csv_body);

  proptest::RunManifest manifest;
  manifest.command_line = command_line;
  manifest.seed = params.seed;
  manifest.config_snapshot = params.config.snapshot();
  manifest.outputs = {out};
  proptest::write_text_file(manifest_path, proptest::render_manifest(manifest));
  std::cout << "wrote " << out << " and " << manifest_path << '\n';
  std::cout << outcome.csv_body;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "desk-scale laboratory for subgraph-freeness testing in bounded-degree "
      "digraph oracle models"};
  app.require_subcommand(1);
  const std::string command_line = join_command_line(argc, argv);

  auto* verify = app.add_subcommand("verify", "exact identity checks for k = 2..kmax");
  int k_max = 12;
  bool corrupt_q = false;
  verify->add_option("--kmax", k_max, "largest k to check")->required();
  verify->add_flag("--corrupt-q", corrupt_q)->group("");  // negative-control hook

  auto* gen = app.add_subcommand("gen", "generate a hard-family sequence instance");
  std::string family;
  int gen_k = 3;
  long long gen_n = 0;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  gen->add_option("--class", family, "A (k-occurrence-free) or B (far)")
      ->required()
      ->check(CLI::IsMember({"A", "B"}));
  gen->add_option("--k", gen_k, "occurrence cap")->required();
  gen->add_option("--n", gen_n, "sequence length")->required();
  gen->add_option("--seed", gen_seed, "shuffle seed")->required();
  gen->add_option("--out", gen_out, "output sequence file")->required();

  auto* reduce = app.add_subcommand("reduce", "materialize the sequence->graph reduction");
  std::string pattern_path, sequence_path, reduce_out;
  std::uint64_t reduce_seed = 0;
  reduce->add_option("--pattern", pattern_path, "pattern edge-list file")->required();
  reduce->add_option("--sequence", sequence_path, "sequence file")->required();
  reduce->add_option("--seed", reduce_seed, "type-draw seed")->required();
  reduce->add_option("--out", reduce_out, "output graph file")->required();

  auto* separation = app.add_subcommand(
      "separation", "bidirectional vs unidirectional query-complexity experiment");
  proptest::SeparationParams sep_params;
  std::string sep_out, sep_config;
  separation->add_option("--k", sep_params.k, "number of star sources")->required();
  separation->add_option("--n", sep_params.n_list, "sequence length (repeatable)")
      ->required();
  separation->add_option("--trials", sep_params.trials, "trials per cell (>= 200)")
      ->required();
  separation->add_option("--seed", sep_params.seed, "master seed")->required();
  separation->add_option("--out", sep_out, "output CSV")->required();
  separation->add_option("--jobs", sep_params.jobs, "worker threads (0 = all cores)");
  separation->add_option("--config", sep_config, "tester config file (key=value)");

  auto* poisson =
      app.add_subcommand("poisson", "Poissonized histogram distinguisher experiment");
  proptest::PoissonParams poi_params;
  std::string poi_out, poi_config;
  poisson->add_option("--k", poi_params.k, "occurrence cap")->required();
  poisson->add_option("--n", poi_params.n, "sequence length")->required();
  poisson->add_option("--s", poi_params.s_list, "expected sample count (repeatable)")
      ->required();
  poisson->add_option("--trials", poi_params.trials, "trials per cell (>= 100)")
      ->required();
  poisson->add_option("--seed", poi_params.seed, "master seed")->required();
  poisson->add_option("--out", poi_out, "output CSV")->required();
  poisson->add_option("--jobs", poi_params.jobs, "worker threads (0 = all cores)");
  poisson->add_option("--config", poi_config, "tester config file (key=value)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (verify->parsed()) return cmd_verify(k_max, corrupt_q);
    if (gen->parsed()) return cmd_gen(family, gen_k, gen_n, gen_seed, gen_out);
    if (reduce->parsed())
      return cmd_reduce(pattern_path, sequence_path, reduce_seed, reduce_out,
                        command_line);
    if (separation->parsed()) {
      if (sep_params.trials < 200)
        throw proptest::InvalidParameter("separation needs --trials >= 200");
      if (!sep_config.empty())
        sep_params.config = proptest::load_tester_config(sep_config);
      return cmd_separation(sep_params, sep_out, command_line);
    }
    if (poisson->parsed()) {
      if (poi_params.trials < 100)
        throw proptest::InvalidParameter("poisson needs --trials >= 100");
      if (!poi_config.empty())
        poi_params.config = proptest::load_tester_config(poi_config);
      return cmd_poisson(poi_params, poi_out, command_line);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
