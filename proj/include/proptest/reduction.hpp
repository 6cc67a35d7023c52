#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <ostream>
#include <unordered_map>
#include <utility>
#include <vector>

#include "proptest/decompose.hpp"
#include "proptest/digraph.hpp"
#include "proptest/errors.hpp"
#include "proptest/random.hpp"
#include "proptest/rational.hpp"
#include "proptest/sequence.hpp"

namespace proptest {

// Index layout of the reduced graph on n*(N_comp+N_center) vertices: the
// source part [1, n*N_comp] holds one N_comp-sized block per sequence
// position; the center part holds n copies of C_0.
struct ReducedIndexing {
  long long n = 0;
  Vertex n_comp = 0;
  Vertex n_center = 0;

  Vertex total_vertices() const { return n * (n_comp + n_center); }
  Vertex source_part_size() const { return n * n_comp; }
  bool in_center_part(Vertex v) const { return v > source_part_size(); }

  long long source_position(Vertex v) const { return (v - 1) / n_comp + 1; }
  Vertex source_local(Vertex v) const { return (v - 1) % n_comp + 1; }
  // The paper's (v - n*N_comp) mod N_center, shifted to stay 1-based.
  Vertex center_local(Vertex v) const {
    return (v - source_part_size() - 1) % n_center + 1;
  }
  long long center_copy(Vertex v) const {
    return (v - source_part_size() - 1) / n_center + 1;
  }
  Vertex source_vertex(long long position, Vertex local) const {
    return (position - 1) * n_comp + local;
  }
  Vertex center_vertex(long long copy, Vertex local) const {
    return source_part_size() + (copy - 1) * n_center + local;
  }

  void check(Vertex v) const {
    if (v < 1 || v > total_vertices())
      throw BadVertexIndex("reduced vertex " + std::to_string(v) + " out of range [1," +
                           std::to_string(total_vertices()) + "]");
  }
};

namespace detail {

// Per-H'-vertex answer tables. A source vertex's neighbors are enumerated
// block-internal first, then crossing: internal images stay in the source
// part and crossing images land in the center part, so this order is exactly
// ascending order of reduced-graph indices (matching the offline graph's
// sorted adjacency).
struct ReductionTables {
  int k = 0;
  Vertex n_comp = 0;
  Vertex n_center = 0;
  std::vector<std::vector<Vertex>> center_out;  // [local-1] -> C_0 local indices
  // [t-1][local-1]; internal targets as block-local indices, crossing targets
  // as C_0 local indices, each ascending.
  std::vector<std::vector<std::vector<Vertex>>> internal_out;
  std::vector<std::vector<std::vector<Vertex>>> crossing_out;

  explicit ReductionTables(const PatternDecomposition& dec)
      : k(dec.k), n_comp(dec.n_comp), n_center(dec.n_center) {
    center_out.assign(static_cast<std::size_t>(n_center), {});
    internal_out.assign(static_cast<std::size_t>(k), {});
    crossing_out.assign(static_cast<std::size_t>(k), {});
    for (int t = 0; t < k; ++t) {
      internal_out[static_cast<std::size_t>(t)].assign(static_cast<std::size_t>(n_comp),
                                                       {});
      crossing_out[static_cast<std::size_t>(t)].assign(static_cast<std::size_t>(n_comp),
                                                       {});
    }
    for (Vertex u = 1; u <= dec.padded.vertex_count(); ++u) {
      if (u <= n_center) {
        for (Vertex v : dec.padded.out_neighbors(u))
          center_out[static_cast<std::size_t>(u - 1)].push_back(v);
        continue;
      }
      Vertex offset = u - n_center - 1;
      int t = static_cast<int>(offset / n_comp);
      Vertex local = offset % n_comp + 1;
      for (Vertex v : dec.padded.out_neighbors(u)) {
        if (v <= n_center)
          crossing_out[static_cast<std::size_t>(t)][static_cast<std::size_t>(local - 1)]
              .push_back(v);
        else
          internal_out[static_cast<std::size_t>(t)][static_cast<std::size_t>(local - 1)]
              .push_back(v - n_center - t * n_comp);
      }
    }
  }
};

inline constexpr std::uint64_t kTypeStreamTag = 0x74797065;  // type-draw streams

inline std::vector<int> type_permutation(std::uint64_t seed, long long value, int k) {
  Rng rng(derive_seed(seed, kTypeStreamTag, static_cast<std::uint64_t>(value)));
  return rng.permutation(k);
}

}  // namespace detail

// Position-rank draw policy shared by the offline build and the lazy oracle:
// the r-th occurrence (in position order) of value b receives the r-th entry
// of a permutation of {1..k} seeded by (seed, b). Marginally this is uniform
// sampling without replacement from R_b, and it makes the assignment
// independent of the probe order.
inline std::vector<int> offline_type_assignment(const IntSequence& s, int k,
                                                std::uint64_t seed) {
  std::vector<int> types(static_cast<std::size_t>(s.n()) + 1, 0);
  std::unordered_map<long long, std::vector<int>> perms;
  std::unordered_map<long long, int> rank;
  for (long long a = 1; a <= s.n(); ++a) {
    long long b = s.at(a);
    int r = ++rank[b];
    if (r > k)
      throw OccurrenceCapExceeded("value " + std::to_string(b) + " occurs more than " +
                                  std::to_string(k) + " times");
    auto it = perms.find(b);
    if (it == perms.end())
      it = perms.emplace(b, detail::type_permutation(seed, b, k)).first;
    types[static_cast<std::size_t>(a)] = it->second[static_cast<std::size_t>(r - 1)];
  }
  return types;
}

// Materialized reduction: n copies of C_0, one typed source block per
// position, crossing edges into the value's center copy.
inline BoundedDigraph build_offline(const IntSequence& s, const PatternDecomposition& dec,
                                    std::uint64_t seed) {
  const long long n = s.n();
  const ReducedIndexing idx{n, dec.n_comp, dec.n_center};
  const detail::ReductionTables tables(dec);
  for (long long a = 1; a <= n; ++a)
    if (s.at(a) > n)
      throw ValueOutOfRange("sequence value " + std::to_string(s.at(a)) +
                            " exceeds length " + std::to_string(n) +
                            "; center copies are addressed by value");
  std::vector<int> types = offline_type_assignment(s, dec.k, seed);

  EdgeList edges;
  for (long long copy = 1; copy <= n; ++copy)
    for (Vertex local = 1; local <= dec.n_center; ++local)
      for (Vertex target : tables.center_out[static_cast<std::size_t>(local - 1)])
        edges.emplace_back(idx.center_vertex(copy, local), idx.center_vertex(copy, target));
  for (long long a = 1; a <= n; ++a) {
    long long b = s.at(a);
    int t = types[static_cast<std::size_t>(a)];
    for (Vertex local = 1; local <= dec.n_comp; ++local) {
      for (Vertex target :
           tables.internal_out[static_cast<std::size_t>(t - 1)]
                              [static_cast<std::size_t>(local - 1)])
        edges.emplace_back(idx.source_vertex(a, local), idx.source_vertex(a, target));
      for (Vertex target :
           tables.crossing_out[static_cast<std::size_t>(t - 1)]
                              [static_cast<std::size_t>(local - 1)])
        edges.emplace_back(idx.source_vertex(a, local), idx.center_vertex(b, target));
    }
  }
  return BoundedDigraph(idx.total_vertices(), dec.pattern.max_degree(), std::move(edges));
}

// Lazy sequence->graph oracle: answers each out-neighbor query with at most
// one charged sequence query. Center-part queries never touch the sequence.
class ReductionOracle {
 public:
  ReductionOracle(SequenceAccess& seq, const PatternDecomposition& dec,
                  std::uint64_t seed)
      : seq_(seq),
        idx_{seq.n(), dec.n_comp, dec.n_center},
        tables_(dec),
        seed_(seed),
        k_(dec.k),
        degree_bound_(dec.pattern.max_degree()),
        types_(static_cast<std::size_t>(seq.n()) + 1, 0),
        value_at_(static_cast<std::size_t>(seq.n()) + 1, 0) {
    // Bookkeeping index of the oracle's own instance: rank lookups are not
    // charged queries (only the value reads are).
    const IntSequence& raw = seq.raw();
    for (long long a = 1; a <= raw.n(); ++a)
      positions_of_[raw.at(a)].push_back(a);
  }

  std::optional<Vertex> out_neighbor(Vertex v, long long i) {
    idx_.check(v);
    if (i < 1) throw InvalidParameter("neighbor index must be positive");
    if (idx_.in_center_part(v)) {
      Vertex local = idx_.center_local(v);
      const auto& targets = tables_.center_out[static_cast<std::size_t>(local - 1)];
      if (i > static_cast<long long>(targets.size())) return std::nullopt;
      return v - local + targets[static_cast<std::size_t>(i - 1)];
    }
    long long a = idx_.source_position(v);
    auto [b, t] = resolve(a);
    Vertex local = idx_.source_local(v);
    const auto& internal =
        tables_.internal_out[static_cast<std::size_t>(t - 1)]
                            [static_cast<std::size_t>(local - 1)];
    const auto& crossing =
        tables_.crossing_out[static_cast<std::size_t>(t - 1)]
                            [static_cast<std::size_t>(local - 1)];
    if (i <= static_cast<long long>(internal.size()))
      return idx_.source_vertex(a, internal[static_cast<std::size_t>(i - 1)]);
    i -= static_cast<long long>(internal.size());
    if (i <= static_cast<long long>(crossing.size()))
      return idx_.center_vertex(b, crossing[static_cast<std::size_t>(i - 1)]);
    return std::nullopt;
  }

  long long out_degree(Vertex v) {
    idx_.check(v);
    if (idx_.in_center_part(v)) {
      Vertex local = idx_.center_local(v);
      return static_cast<long long>(
          tables_.center_out[static_cast<std::size_t>(local - 1)].size());
    }
    long long a = idx_.source_position(v);
    auto [b, t] = resolve(a);
    (void)b;
    Vertex local = idx_.source_local(v);
    return static_cast<long long>(
        tables_.internal_out[static_cast<std::size_t>(t - 1)]
                            [static_cast<std::size_t>(local - 1)].size() +
        tables_.crossing_out[static_cast<std::size_t>(t - 1)]
                            [static_cast<std::size_t>(local - 1)].size());
  }

  Vertex vertex_count() const { return idx_.total_vertices(); }
  long long degree_bound() const { return degree_bound_; }
  const ReducedIndexing& indexing() const { return idx_; }

  // Number of distinct sequence positions read (the charged queries).
  long long sequence_query_count() const { return charged_positions_; }

  // T array; entry 0 unused, 0 = unassigned.
  const std::vector<int>& type_array() const { return types_; }

  // R_b: types still unassigned for the value, ascending.
  std::vector<int> remaining_types(long long value) const {
    std::uint32_t mask = 0;
    auto it = assigned_mask_.find(value);
    if (it != assigned_mask_.end()) mask = it->second;
    std::vector<int> rest;
    for (int t = 1; t <= k_; ++t)
      if (!(mask & (1u << t))) rest.push_back(t);
    return rest;
  }

 private:
  std::pair<long long, int> resolve(long long a) {
    if (types_[static_cast<std::size_t>(a)] != 0)
      return {value_at_[static_cast<std::size_t>(a)],
              types_[static_cast<std::size_t>(a)]};
    long long b = seq_.value_at(a);
    ++charged_positions_;
    if (b > idx_.n)
      throw ValueOutOfRange("sequence value " + std::to_string(b) + " exceeds length " +
                            std::to_string(idx_.n));
    const auto& positions = positions_of_.at(b);
    auto where = std::lower_bound(positions.begin(), positions.end(), a);
    int rank = static_cast<int>(where - positions.begin()) + 1;
    if (rank > k_)
      throw OccurrenceCapExceeded("value " + std::to_string(b) + " occurs more than " +
                                  std::to_string(k_) + " times");
    auto perm = perms_.find(b);
    if (perm == perms_.end())
      perm = perms_.emplace(b, detail::type_permutation(seed_, b, k_)).first;
    int t = perm->second[static_cast<std::size_t>(rank - 1)];
    types_[static_cast<std::size_t>(a)] = t;
    value_at_[static_cast<std::size_t>(a)] = b;
    assigned_mask_[b] |= 1u << t;
    return {b, t};
  }

  SequenceAccess& seq_;
  ReducedIndexing idx_;
  detail::ReductionTables tables_;
  std::uint64_t seed_;
  int k_;
  long long degree_bound_;
  std::vector<int> types_;
  std::vector<long long> value_at_;
  std::unordered_map<long long, std::vector<long long>> positions_of_;
  std::unordered_map<long long, std::vector<int>> perms_;
  std::unordered_map<long long, std::uint32_t> assigned_mask_;
  long long charged_positions_ = 0;
};

// epsilon' = epsilon / (d * (N_center + N_comp)).
inline Rational distance_transfer(const Rational& eps, long long d,
                                  const PatternDecomposition& dec) {
  if (eps < 0) throw InvalidParameter("eps must be non-negative");
  if (d < 1) throw InvalidParameter("degree bound must be positive");
  return eps / (Rational(d) * Rational(dec.n_center + dec.n_comp));
}

// Full (v, i) probe sweep: the lazy oracle must agree with the offline graph
// built from the same seed. probe_budget caps the number of probes (0 = all).
inline bool consistency_check(const IntSequence& s, const PatternDecomposition& dec,
                              std::uint64_t seed, long long probe_budget = 0) {
  BoundedDigraph offline = build_offline(s, dec, seed);
  SequenceAccess access(s);
  ReductionOracle lazy(access, dec, seed);
  if (lazy.vertex_count() != offline.vertex_count()) return false;
  long long probes = 0;
  const long long max_i = dec.pattern.max_degree() + 1;
  for (Vertex v = 1; v <= offline.vertex_count(); ++v) {
    if (probe_budget > 0 && probes >= probe_budget) return true;
    ++probes;
    if (lazy.out_degree(v) != offline.out_degree(v)) return false;
    for (long long i = 1; i <= max_i; ++i) {
      if (probe_budget > 0 && probes >= probe_budget) return true;
      ++probes;
      if (lazy.out_neighbor(v, i) != offline.out_neighbor(v, i)) return false;
    }
  }
  return true;
}

// Sidecar for replay: the seed and the full T array.
inline void write_type_sidecar(std::ostream& os, std::uint64_t seed,
                               const std::vector<int>& types) {
  os << "seed " << seed << '\n';
  for (std::size_t a = 1; a < types.size(); ++a)
    os << (a > 1 ? " " : "") << types[a];
  os << '\n';
}

}  // namespace proptest
