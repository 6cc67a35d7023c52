#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <variant>
#include <vector>

#include "proptest/decompose.hpp"
#include "proptest/digraph.hpp"
#include "proptest/distribution.hpp"
#include "proptest/errors.hpp"
#include "proptest/oracle.hpp"
#include "proptest/random.hpp"
#include "proptest/rational.hpp"
#include "proptest/sequence.hpp"
#include "proptest/subgraph.hpp"

namespace proptest {

// Tester constants, tuned once and frozen. A flat key=value file can
// override the defaults.
struct TesterConfig {
  double bidi_sample_scale = 1.0;        // vertex samples = ceil(scale / eps)
  double uni_budget_scale = 20.0;        // separation budget = ceil(scale * n^(1-1/k))
  double kocc_budget_scale = 4.0;        // collision-tester budget scale
  long long poisson_calibration_trials = 200;

  std::string snapshot() const {
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "bidi_sample_scale=%g\nuni_budget_scale=%g\nkocc_budget_scale=%g\n"
                  "poisson_calibration_trials=%lld\n",
                  bidi_sample_scale, uni_budget_scale, kocc_budget_scale,
                  poisson_calibration_trials);
    return buf;
  }
};

inline TesterConfig parse_tester_config(std::istream& is) {
  TesterConfig cfg;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw IoError("bad config line: " + line);
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    if (key == "bidi_sample_scale")
      cfg.bidi_sample_scale = std::stod(value);
    else if (key == "uni_budget_scale")
      cfg.uni_budget_scale = std::stod(value);
    else if (key == "kocc_budget_scale")
      cfg.kocc_budget_scale = std::stod(value);
    else if (key == "poisson_calibration_trials")
      cfg.poisson_calibration_trials = std::stoll(value);
    else
      throw IoError("unknown config key: " + key);
  }
  return cfg;
}

inline TesterConfig load_tester_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open config file: " + path);
  return parse_tester_config(is);
}

struct GraphWitness {
  std::vector<Vertex> mapping;  // mapping[i] = image of pattern vertex i+1
};

struct SequenceWitness {
  long long value = 0;
  std::vector<long long> positions;
};

using Witness = std::variant<std::monostate, GraphWitness, SequenceWitness>;

enum class Decision { accept, reject };

struct TesterVerdict {
  Decision decision = Decision::accept;
  long long queries_used = 0;
  Witness witness;

  bool rejected() const { return decision == Decision::reject; }
};

inline bool verify_graph_witness(const BoundedDigraph& g, const BoundedDigraph& pattern,
                                 const GraphWitness& w) {
  if (static_cast<Vertex>(w.mapping.size()) != pattern.vertex_count()) return false;
  std::unordered_set<Vertex> used;
  for (Vertex image : w.mapping) {
    if (image < 1 || image > g.vertex_count()) return false;
    if (!used.insert(image).second) return false;
  }
  for (const auto& [u, v] : pattern.edges())
    if (!g.has_edge(w.mapping[static_cast<std::size_t>(u - 1)],
                    w.mapping[static_cast<std::size_t>(v - 1)]))
      return false;
  return true;
}

inline bool verify_sequence_witness(const IntSequence& s, int k,
                                    const SequenceWitness& w) {
  if (static_cast<int>(w.positions.size()) != k) return false;
  std::unordered_set<long long> seen;
  for (long long pos : w.positions) {
    if (pos < 1 || pos > s.n()) return false;
    if (!seen.insert(pos).second) return false;
    if (s.at(pos) != w.value) return false;
  }
  return true;
}

namespace detail {

// Undirected BFS ball of the given radius; reads the full out- and
// in-adjacency of every vertex at depth < radius. All answers are recorded
// as directed edges of the collected subgraph.
template <typename G>
void explore_undirected_ball(OracleSession<G>& session, Vertex start, long long radius,
                             CollectedSubgraph& collected) {
  std::unordered_map<Vertex, long long> depth;
  std::vector<Vertex> queue{start};
  depth[start] = 0;
  collected.add_vertex(start);
  std::size_t head = 0;
  while (head < queue.size()) {
    Vertex v = queue[head++];
    long long dv = depth[v];
    if (dv >= radius) continue;
    auto visit = [&](Vertex w) {
      if (depth.emplace(w, dv + 1).second) queue.push_back(w);
    };
    for (long long i = 1;; ++i) {
      auto w = session.out_neighbor(v, i);
      if (!w) break;
      collected.add_edge(v, *w);
      visit(*w);
    }
    for (long long i = 1;; ++i) {
      auto w = session.in_neighbor(v, i);
      if (!w) break;
      collected.add_edge(*w, v);
      visit(*w);
    }
  }
}

}  // namespace detail

// One-sided H-freeness tester in the bidirectional model: samples
// ceil(scale/eps) vertices, explores the undirected radius-|V(H)| ball around
// each, and rejects iff a copy of H embeds into the explored subgraph.
template <typename G>
TesterVerdict bidirectional_hfree_tester(OracleSession<G>& session,
                                         const PatternDecomposition& dec,
                                         const Rational& eps, std::uint64_t seed,
                                         const TesterConfig& cfg = {}) {
  if (session.model() != QueryModel::bidirectional)
    throw ModelViolation("bidirectional tester needs a bidirectional session");
  if (eps <= 0) throw InvalidParameter("eps must be positive");
  const long long start_count = session.query_count();
  TesterVerdict verdict;
  const Vertex total = session.vertex_count();
  if (total == 0) return verdict;

  const long long samples = std::max<long long>(
      1, static_cast<long long>(std::ceil(cfg.bidi_sample_scale / to_double(eps))));
  const long long radius = dec.pattern.vertex_count();
  Rng rng(seed);
  CollectedSubgraph collected;
  for (long long s = 0; s < samples; ++s) {
    Vertex start = 1 + static_cast<Vertex>(rng.below(static_cast<std::uint64_t>(total)));
    detail::explore_undirected_ball(session, start, radius, collected);
  }
  if (auto embedding = find_embedding(collected, dec.pattern)) {
    verdict.decision = Decision::reject;
    verdict.witness = GraphWitness{*embedding};
  }
  verdict.queries_used = session.query_count() - start_count;
  return verdict;
}

// One-sided H-freeness tester in the unidirectional model: samples vertices
// uniformly and reads full out-neighborhoods, following discovered edges
// forward up to depth |V(H)|, until the query budget is exhausted. Rejects
// iff a copy of H lies in the collected subgraph.
template <typename G>
TesterVerdict unidirectional_hfree_tester(OracleSession<G>& session,
                                          const PatternDecomposition& dec,
                                          long long budget, std::uint64_t seed,
                                          const TesterConfig& cfg = {}) {
  (void)cfg;
  if (session.model() != QueryModel::unidirectional)
    throw ModelViolation("unidirectional tester must not use in-queries");
  const long long start_count = session.query_count();
  TesterVerdict verdict;
  const Vertex total = session.vertex_count();
  if (total == 0 || budget <= 0) return verdict;

  const long long radius = dec.pattern.vertex_count();
  Rng rng(seed);
  CollectedSubgraph collected;
  std::unordered_set<Vertex> scanned;
  auto spent = [&] { return session.query_count() - start_count; };
  long long idle_samples = 0;
  while (spent() < budget && idle_samples < 1000) {
    Vertex start = 1 + static_cast<Vertex>(rng.below(static_cast<std::uint64_t>(total)));
    long long before = spent();
    std::vector<std::pair<Vertex, long long>> stack{{start, 0}};
    while (!stack.empty() && spent() < budget) {
      auto [v, dv] = stack.back();
      stack.pop_back();
      if (dv >= radius) continue;
      if (!scanned.insert(v).second) continue;
      collected.add_vertex(v);
      for (long long i = 1; spent() < budget; ++i) {
        auto w = session.out_neighbor(v, i);
        if (!w) break;
        collected.add_edge(v, *w);
        stack.emplace_back(*w, dv + 1);
      }
    }
    idle_samples = spent() == before ? idle_samples + 1 : 0;
  }
  if (auto embedding = find_embedding(collected, dec.pattern)) {
    verdict.decision = Decision::reject;
    verdict.witness = GraphWitness{*embedding};
  }
  verdict.queries_used = spent();
  return verdict;
}

// One-sided k-occurrence tester: samples positions with replacement and
// rejects iff some value is seen at k distinct positions. A budget of n (the
// precondition's maximum) degenerates to an exhaustive left-to-right read.
inline TesterVerdict k_occurrence_tester(SequenceAccess& seq, int k, long long budget,
                                         std::uint64_t seed) {
  TesterVerdict verdict;
  const long long n = seq.n();
  if (budget > n) budget = n;
  if (n == 0 || budget <= 0) return verdict;
  Rng rng(seed);
  std::unordered_map<long long, std::vector<long long>> positions_seen;
  const bool exhaustive = budget == n;
  for (long long t = 1; t <= budget; ++t) {
    long long pos =
        exhaustive ? t : 1 + static_cast<long long>(rng.below(static_cast<std::uint64_t>(n)));
    long long value = seq.value_at(pos);
    ++verdict.queries_used;
    auto& seen = positions_seen[value];
    if (std::find(seen.begin(), seen.end(), pos) != seen.end()) continue;
    seen.push_back(pos);
    if (static_cast<int>(seen.size()) == k) {
      verdict.decision = Decision::reject;
      verdict.witness = SequenceWitness{value, seen};
      return verdict;
    }
  }
  return verdict;
}

struct ExperimentStats {
  long long trials = 0;
  double accept_rate_on_yes = 0.0;
  double reject_rate_on_no = 0.0;
  double mean_queries = 0.0;
  long long budget = 0;

  double advantage() const {
    return std::abs(accept_rate_on_yes - (1.0 - reject_rate_on_no));
  }
};

// Poissonized histogram distinguisher: per trial, draws Poisson(s) uniform
// positions from a fresh C_A and C_B instance, deduplicates positions (a
// repeated position carries no information), reduces the sampled values to
// their histogram, and thresholds the count of values seen >= ceil(k/2)
// times. The threshold is the midpoint of the statistic means on held-out
// calibration trials.
inline ExperimentStats poisson_histogram_distinguisher(const FrequencyDistribution& p,
                                                       const FrequencyDistribution& q,
                                                       int k, long long n, long long s,
                                                       long long trials,
                                                       std::uint64_t seed,
                                                       const TesterConfig& cfg = {}) {
  if (trials < 100) throw InvalidParameter("poisson distinguisher needs trials >= 100");
  if (!is_realizable(p, n) || !is_realizable(q, n)) {
    long long step_p = realizable_step(p);
    long long step_q = realizable_step(q);
    long long step = step_p * step_q / std::gcd(step_p, step_q);
    throw Unrealizable(n, std::max(step, (n / step) * step), (n / step + 1) * step);
  }
  const int collision_bar = (k + 1) / 2;

  long long total_samples = 0;
  long long sample_trials = 0;
  auto statistic = [&](const FrequencyDistribution& dist, std::uint64_t trial_seed,
                       bool count_samples) {
    IntSequence instance =
        build_sequence_from_distribution(dist, n, derive_seed(trial_seed, 1));
    Rng rng(derive_seed(trial_seed, 2));
    long long m = rng.poisson(static_cast<double>(s));
    if (count_samples) {
      total_samples += m;
      ++sample_trials;
    }
    std::unordered_set<long long> positions;
    for (long long i = 0; i < m; ++i)
      positions.insert(1 + static_cast<long long>(rng.below(static_cast<std::uint64_t>(n))));
    std::unordered_map<long long, int> value_counts;
    for (long long pos : positions) ++value_counts[instance.at(pos)];
    long long stat = 0;
    for (const auto& [value, count] : value_counts)
      if (count >= collision_bar) ++stat;
    return stat;
  };

  // Held-out calibration.
  const long long cal_trials = std::max<long long>(1, cfg.poisson_calibration_trials);
  double cal_a = 0, cal_b = 0;
  for (long long t = 0; t < cal_trials; ++t) {
    cal_a += static_cast<double>(statistic(p, derive_seed(seed, 0xCA1A, t), false));
    cal_b += static_cast<double>(statistic(q, derive_seed(seed, 0xCA1B, t), false));
  }
  cal_a /= static_cast<double>(cal_trials);
  cal_b /= static_cast<double>(cal_trials);
  const double threshold = (cal_a + cal_b) / 2.0;
  const bool yes_side_high = cal_a > cal_b;

  long long accept_a = 0, accept_b = 0;
  for (long long t = 0; t < trials; ++t) {
    auto classify_yes = [&](long long stat) {
      return yes_side_high ? static_cast<double>(stat) > threshold
                           : static_cast<double>(stat) <= threshold;
    };
    if (classify_yes(statistic(p, derive_seed(seed, 0xE7A, t), true))) ++accept_a;
    if (classify_yes(statistic(q, derive_seed(seed, 0xE7B, t), true))) ++accept_b;
  }

  ExperimentStats stats;
  stats.trials = trials;
  stats.budget = s;
  stats.accept_rate_on_yes = static_cast<double>(accept_a) / static_cast<double>(trials);
  stats.reject_rate_on_no =
      1.0 - static_cast<double>(accept_b) / static_cast<double>(trials);
  stats.mean_queries = sample_trials == 0 ? 0.0
                                          : static_cast<double>(total_samples) /
                                                static_cast<double>(sample_trials);
  return stats;
}

}  // namespace proptest
