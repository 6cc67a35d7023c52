#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "proptest/digraph.hpp"
#include "proptest/errors.hpp"

namespace proptest {

// Patterns are constant-size; the embedding search is exponential in |V(H)|.
inline constexpr Vertex kMaxPatternVertices = 10;

struct DigraphView {
  const BoundedDigraph& g;

  std::vector<Vertex> all_vertices() const {
    std::vector<Vertex> vs(static_cast<std::size_t>(g.vertex_count()));
    std::iota(vs.begin(), vs.end(), Vertex{1});
    return vs;
  }
  std::span<const Vertex> out(Vertex v) const { return g.out_neighbors(v); }
  std::span<const Vertex> in(Vertex v) const { return g.in_neighbors(v); }
  bool contains_edge(Vertex u, Vertex v) const { return g.has_edge(u, v); }
  long long odeg(Vertex v) const { return g.out_degree(v); }
  long long ideg(Vertex v) const { return g.in_degree(v); }
};

// Directed subgraph assembled from confirmed oracle answers. Vertex ids are
// arbitrary; insertion order is preserved so searches are deterministic.
class CollectedSubgraph {
 public:
  void add_vertex(Vertex v) {
    if (known_.insert(v).second) vertices_.push_back(v);
  }

  void add_edge(Vertex u, Vertex v) {
    add_vertex(u);
    add_vertex(v);
    auto& outs = out_[u];
    if (std::find(outs.begin(), outs.end(), v) != outs.end()) return;
    outs.push_back(v);
    in_[v].push_back(u);
    ++edge_count_;
  }

  const std::vector<Vertex>& all_vertices() const { return vertices_; }

  std::span<const Vertex> out(Vertex v) const { return adjacency(out_, v); }
  std::span<const Vertex> in(Vertex v) const { return adjacency(in_, v); }

  bool contains_edge(Vertex u, Vertex v) const {
    auto outs = out(u);
    return std::find(outs.begin(), outs.end(), v) != outs.end();
  }

  long long odeg(Vertex v) const { return static_cast<long long>(out(v).size()); }
  long long ideg(Vertex v) const { return static_cast<long long>(in(v).size()); }
  long long edge_count() const { return edge_count_; }
  long long vertex_count() const { return static_cast<long long>(vertices_.size()); }

 private:
  static std::span<const Vertex> adjacency(
      const std::unordered_map<Vertex, std::vector<Vertex>>& table, Vertex v) {
    auto it = table.find(v);
    if (it == table.end()) return {};
    return it->second;
  }

  std::vector<Vertex> vertices_;
  std::unordered_set<Vertex> known_;
  std::unordered_map<Vertex, std::vector<Vertex>> out_;
  std::unordered_map<Vertex, std::vector<Vertex>> in_;
  long long edge_count_ = 0;
};

namespace detail {

// Match order over the pattern: connectivity-first so every placement after
// the first is anchored through an already-mapped neighbor when one exists.
struct PatternPlan {
  struct Step {
    Vertex pattern_vertex = 0;
    int anchor_slot = -1;        // earlier step index, -1 if unanchored
    bool anchor_out = false;     // true: pattern edge anchor->this
    // edges between this vertex and earlier-mapped ones: (slot, true)=this->slot
    std::vector<std::pair<int, bool>> edge_checks;
    long long need_out = 0;
    long long need_in = 0;
  };
  std::vector<Step> steps;
};

inline PatternPlan make_pattern_plan(const BoundedDigraph& h) {
  const Vertex hn = h.vertex_count();
  PatternPlan plan;
  std::vector<char> placed(static_cast<std::size_t>(hn) + 1, 0);
  std::vector<Vertex> slot_of(static_cast<std::size_t>(hn) + 1, -1);

  auto undirected_links = [&](Vertex u) {
    long long links = 0;
    for (Vertex w : h.out_neighbors(u))
      if (placed[static_cast<std::size_t>(w)]) ++links;
    for (Vertex w : h.in_neighbors(u))
      if (placed[static_cast<std::size_t>(w)] && !h.has_edge(u, w)) ++links;
    return links;
  };

  for (Vertex step = 0; step < hn; ++step) {
    Vertex best = -1;
    long long best_links = -1, best_deg = -1;
    for (Vertex u = 1; u <= hn; ++u) {
      if (placed[static_cast<std::size_t>(u)]) continue;
      long long links = step == 0 ? 0 : undirected_links(u);
      long long deg = h.out_degree(u) + h.in_degree(u);
      if (links > best_links || (links == best_links && deg > best_deg)) {
        best = u;
        best_links = links;
        best_deg = deg;
      }
    }
    PatternPlan::Step s;
    s.pattern_vertex = best;
    s.need_out = h.out_degree(best);
    s.need_in = h.in_degree(best);
    for (Vertex w : h.out_neighbors(best)) {
      if (!placed[static_cast<std::size_t>(w)]) continue;
      int slot = static_cast<int>(slot_of[static_cast<std::size_t>(w)]);
      s.edge_checks.emplace_back(slot, true);
      if (s.anchor_slot < 0) {
        s.anchor_slot = slot;
        s.anchor_out = false;  // edge this->w, so candidates come from in(image(w))
      }
    }
    for (Vertex w : h.in_neighbors(best)) {
      if (!placed[static_cast<std::size_t>(w)]) continue;
      int slot = static_cast<int>(slot_of[static_cast<std::size_t>(w)]);
      s.edge_checks.emplace_back(slot, false);
      if (s.anchor_slot < 0) {
        s.anchor_slot = slot;
        s.anchor_out = true;  // edge w->this, so candidates come from out(image(w))
      }
    }
    placed[static_cast<std::size_t>(best)] = 1;
    slot_of[static_cast<std::size_t>(best)] = step;
    plan.steps.push_back(std::move(s));
  }
  return plan;
}

}  // namespace detail

struct AllowAnyVertex {
  bool operator()(Vertex) const { return true; }
};

// Enumerates injective edge-preserving maps of pattern h into g (non-induced).
// callback receives map[i] = image of pattern vertex i+1 and returns false to
// stop. Returns true iff the enumeration was not stopped early.
template <typename GV, typename Callback, typename Allowed = AllowAnyVertex>
bool for_each_embedding(const GV& g, const BoundedDigraph& h, Callback&& callback,
                        Allowed allowed = {}) {
  const Vertex hn = h.vertex_count();
  if (hn > kMaxPatternVertices)
    throw PatternTooLarge("pattern has " + std::to_string(hn) + " vertices (limit " +
                          std::to_string(kMaxPatternVertices) + ")");
  if (hn == 0) return true;

  const detail::PatternPlan plan = detail::make_pattern_plan(h);
  std::vector<Vertex> image(static_cast<std::size_t>(hn), 0);
  std::vector<Vertex> first_candidates;

  auto fits = [&](const detail::PatternPlan::Step& step, Vertex c, int depth) {
    if (!allowed(c)) return false;
    for (int s = 0; s < depth; ++s)
      if (image[static_cast<std::size_t>(s)] == c) return false;
    if (g.odeg(c) < step.need_out || g.ideg(c) < step.need_in) return false;
    for (const auto& [slot, outgoing] : step.edge_checks) {
      Vertex other = image[static_cast<std::size_t>(slot)];
      if (outgoing ? !g.contains_edge(c, other) : !g.contains_edge(other, c))
        return false;
    }
    return true;
  };

  // Iterative backtracking would obscure the recursion; depth is <= 10.
  auto recurse = [&](auto&& self, int depth) -> bool {
    if (depth == static_cast<int>(hn)) {
      std::vector<Vertex> by_pattern_vertex(static_cast<std::size_t>(hn));
      for (int s = 0; s < static_cast<int>(hn); ++s)
        by_pattern_vertex[static_cast<std::size_t>(
            plan.steps[static_cast<std::size_t>(s)].pattern_vertex - 1)] =
            image[static_cast<std::size_t>(s)];
      return callback(by_pattern_vertex);
    }
    const auto& step = plan.steps[static_cast<std::size_t>(depth)];
    auto try_candidates = [&](const auto& candidates) -> bool {
      for (Vertex c : candidates) {
        if (!fits(step, c, depth)) continue;
        image[static_cast<std::size_t>(depth)] = c;
        if (!self(self, depth + 1)) return false;
      }
      return true;
    };
    if (step.anchor_slot >= 0) {
      Vertex anchor_image = image[static_cast<std::size_t>(step.anchor_slot)];
      return step.anchor_out ? try_candidates(g.out(anchor_image))
                             : try_candidates(g.in(anchor_image));
    }
    if (first_candidates.empty()) first_candidates = g.all_vertices();
    return try_candidates(first_candidates);
  };
  return recurse(recurse, 0);
}

template <typename GV>
unsigned long long count_embeddings(const GV& g, const BoundedDigraph& h) {
  unsigned long long count = 0;
  for_each_embedding(g, h, [&](const std::vector<Vertex>&) {
    ++count;
    return true;
  });
  return count;
}

inline unsigned long long automorphism_count(const BoundedDigraph& h) {
  return count_embeddings(DigraphView{h}, h);
}

// Number of copies (distinct subgraphs isomorphic to H): injective embeddings
// divided by |Aut(H)|. Zero iff G is H-free.
inline unsigned long long count_subgraph_copies(const BoundedDigraph& g,
                                                const BoundedDigraph& h) {
  if (h.vertex_count() == 0) throw InvalidParameter("empty pattern");
  unsigned long long embeddings = count_embeddings(DigraphView{g}, h);
  return embeddings / automorphism_count(h);
}

template <typename GV>
std::optional<std::vector<Vertex>> find_embedding(const GV& g, const BoundedDigraph& h) {
  std::optional<std::vector<Vertex>> found;
  for_each_embedding(g, h, [&](const std::vector<Vertex>& image) {
    found = image;
    return false;
  });
  return found;
}

// Greedy maximal set of vertex-disjoint copies. Each copy forces at least one
// edge deletion and disjoint copies share none, so the size lower-bounds the
// edge-deletion distance to H-freeness.
inline unsigned long long disjoint_copy_lower_bound(const BoundedDigraph& g,
                                                    const BoundedDigraph& h) {
  if (h.vertex_count() == 0) throw InvalidParameter("empty pattern");
  std::unordered_set<Vertex> used;
  auto allowed = [&](Vertex v) { return used.find(v) == used.end(); };
  unsigned long long copies = 0;
  for (;;) {
    std::optional<std::vector<Vertex>> image;
    for_each_embedding(
        DigraphView{g}, h,
        [&](const std::vector<Vertex>& found) {
          image = found;
          return false;
        },
        allowed);
    if (!image) break;
    ++copies;
    for (Vertex v : *image) used.insert(v);
  }
  return copies;
}

}  // namespace proptest
