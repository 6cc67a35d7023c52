#pragma once

#include <algorithm>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "proptest/digraph.hpp"
#include "proptest/errors.hpp"

namespace proptest {

// Tarjan's algorithm, iterative. Components are returned sorted by their
// smallest member, members ascending.
inline std::vector<std::vector<Vertex>> strongly_connected_components(
    const BoundedDigraph& g) {
  const Vertex n = g.vertex_count();
  std::vector<long long> index(static_cast<std::size_t>(n) + 1, -1);
  std::vector<long long> lowlink(static_cast<std::size_t>(n) + 1, 0);
  std::vector<char> on_stack(static_cast<std::size_t>(n) + 1, 0);
  std::vector<Vertex> stack;
  std::vector<std::vector<Vertex>> components;
  long long next_index = 0;

  struct Frame {
    Vertex v;
    std::size_t child = 0;
  };
  std::vector<Frame> call_stack;

  for (Vertex root = 1; root <= n; ++root) {
    if (index[static_cast<std::size_t>(root)] != -1) continue;
    call_stack.push_back({root});
    index[static_cast<std::size_t>(root)] = lowlink[static_cast<std::size_t>(root)] =
        next_index++;
    stack.push_back(root);
    on_stack[static_cast<std::size_t>(root)] = 1;
    while (!call_stack.empty()) {
      Frame& frame = call_stack.back();
      auto outs = g.out_neighbors(frame.v);
      if (frame.child < outs.size()) {
        Vertex w = outs[frame.child++];
        if (index[static_cast<std::size_t>(w)] == -1) {
          index[static_cast<std::size_t>(w)] = lowlink[static_cast<std::size_t>(w)] =
              next_index++;
          stack.push_back(w);
          on_stack[static_cast<std::size_t>(w)] = 1;
          call_stack.push_back({w});
        } else if (on_stack[static_cast<std::size_t>(w)]) {
          lowlink[static_cast<std::size_t>(frame.v)] =
              std::min(lowlink[static_cast<std::size_t>(frame.v)],
                       index[static_cast<std::size_t>(w)]);
        }
      } else {
        Vertex v = frame.v;
        call_stack.pop_back();
        if (!call_stack.empty()) {
          Vertex parent = call_stack.back().v;
          lowlink[static_cast<std::size_t>(parent)] =
              std::min(lowlink[static_cast<std::size_t>(parent)],
                       lowlink[static_cast<std::size_t>(v)]);
        }
        if (lowlink[static_cast<std::size_t>(v)] == index[static_cast<std::size_t>(v)]) {
          std::vector<Vertex> component;
          for (;;) {
            Vertex w = stack.back();
            stack.pop_back();
            on_stack[static_cast<std::size_t>(w)] = 0;
            component.push_back(w);
            if (w == v) break;
          }
          std::sort(component.begin(), component.end());
          components.push_back(std::move(component));
        }
      }
    }
  }
  std::sort(components.begin(), components.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return components;
}

inline bool is_weakly_connected(const BoundedDigraph& g) {
  const Vertex n = g.vertex_count();
  if (n <= 1) return true;
  std::vector<char> seen(static_cast<std::size_t>(n) + 1, 0);
  std::vector<Vertex> queue{1};
  seen[1] = 1;
  std::size_t head = 0;
  while (head < queue.size()) {
    Vertex v = queue[head++];
    auto visit = [&](Vertex w) {
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = 1;
        queue.push_back(w);
      }
    };
    for (Vertex w : g.out_neighbors(v)) visit(w);
    for (Vertex w : g.in_neighbors(v)) visit(w);
  }
  return static_cast<Vertex>(queue.size()) == n;
}

// Pattern H split into k source components and the center component, padded
// to uniform source size and reindexed for the reduction. In the padded
// pattern H', C_0 occupies [1, N_center] and the i-th source block occupies
// [N_center+(i-1)*N_comp+1, N_center+i*N_comp], padding vertices at each
// block tail. Within every component vertices keep ascending original order.
struct PatternDecomposition {
  BoundedDigraph pattern;
  int k = 0;
  std::vector<std::vector<Vertex>> sources;  // C_1..C_k, ordered by smallest member
  std::vector<Vertex> center;                // C_0, ascending
  Vertex n_comp = 0;
  Vertex n_center = 0;
  BoundedDigraph padded;                     // H'
  std::vector<Vertex> index_map;             // original vertex -> H' index ([0] unused)
  EdgeList crossing_edges;                   // H' indices, ascending (source, target)

  Vertex padded_vertex_count() const { return n_center + k * n_comp; }
};

inline PatternDecomposition decompose_pattern(const BoundedDigraph& h) {
  if (h.vertex_count() == 0) throw InvalidParameter("empty pattern");
  if (!is_weakly_connected(h))
    throw NotWeaklyConnected("pattern is not weakly connected");

  PatternDecomposition dec;
  dec.pattern = h;
  auto components = strongly_connected_components(h);
  std::vector<char> in_source(static_cast<std::size_t>(h.vertex_count()) + 1, 0);
  for (const auto& component : components) {
    bool source = true;
    for (Vertex v : component) {
      for (Vertex u : h.in_neighbors(v)) {
        if (!std::binary_search(component.begin(), component.end(), u)) {
          source = false;
          break;
        }
      }
      if (!source) break;
    }
    if (source) {
      for (Vertex v : component) in_source[static_cast<std::size_t>(v)] = 1;
      dec.sources.push_back(component);
    }
  }
  dec.k = static_cast<int>(dec.sources.size());
  if (dec.k < 2)
    throw TooFewSources("pattern has " + std::to_string(dec.k) +
                        " source component(s); need at least 2");
  for (Vertex v = 1; v <= h.vertex_count(); ++v)
    if (!in_source[static_cast<std::size_t>(v)]) dec.center.push_back(v);
  for (const auto& src : dec.sources)
    dec.n_comp = std::max(dec.n_comp, static_cast<Vertex>(src.size()));
  dec.n_center = static_cast<Vertex>(dec.center.size());
  return dec;
}

inline PatternDecomposition pad_and_index(PatternDecomposition dec) {
  const BoundedDigraph& h = dec.pattern;
  dec.index_map.assign(static_cast<std::size_t>(h.vertex_count()) + 1, 0);
  for (std::size_t i = 0; i < dec.center.size(); ++i)
    dec.index_map[static_cast<std::size_t>(dec.center[i])] = static_cast<Vertex>(i + 1);
  for (int c = 0; c < dec.k; ++c) {
    const Vertex base = dec.n_center + c * dec.n_comp;
    const auto& src = dec.sources[static_cast<std::size_t>(c)];
    for (std::size_t i = 0; i < src.size(); ++i)
      dec.index_map[static_cast<std::size_t>(src[i])] = base + static_cast<Vertex>(i + 1);
  }

  EdgeList padded_edges;
  dec.crossing_edges.clear();
  for (const auto& [u, v] : h.edges()) {
    Vertex pu = dec.index_map[static_cast<std::size_t>(u)];
    Vertex pv = dec.index_map[static_cast<std::size_t>(v)];
    padded_edges.emplace_back(pu, pv);
    if (pu > dec.n_center && pv <= dec.n_center) dec.crossing_edges.emplace_back(pu, pv);
  }
  std::sort(dec.crossing_edges.begin(), dec.crossing_edges.end());
  dec.padded =
      BoundedDigraph(dec.padded_vertex_count(), h.max_degree(), std::move(padded_edges));
  return dec;
}

inline PatternDecomposition decompose_and_index(const BoundedDigraph& h) {
  return pad_and_index(decompose_pattern(h));
}

inline std::string describe(const PatternDecomposition& dec) {
  std::ostringstream os;
  os << "pattern: " << dec.pattern.vertex_count() << " vertices, "
     << dec.pattern.edge_count() << " edges, max degree " << dec.pattern.max_degree()
     << "\n";
  os << "source components: k=" << dec.k << "\n";
  auto list = [&](const std::vector<Vertex>& vs) {
    os << "{";
    for (std::size_t i = 0; i < vs.size(); ++i) os << (i ? "," : "") << vs[i];
    os << "}";
  };
  for (int c = 0; c < dec.k; ++c) {
    os << "  C_" << (c + 1) << " = ";
    list(dec.sources[static_cast<std::size_t>(c)]);
    os << "\n";
  }
  os << "center C_0 = ";
  list(dec.center);
  os << "\nN_comp=" << dec.n_comp << " N_center=" << dec.n_center
     << " padded_vertices=" << dec.padded_vertex_count() << "\n";
  os << "crossing edges (H' indices):";
  for (const auto& [u, v] : dec.crossing_edges) os << " (" << u << "," << v << ")";
  os << "\n";
  return os.str();
}

}  // namespace proptest
