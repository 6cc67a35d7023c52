#pragma once

#include <algorithm>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "proptest/errors.hpp"

namespace proptest {

using Vertex = long long;
using EdgeList = std::vector<std::pair<Vertex, Vertex>>;

// d-bounded digraph on vertices 1..n. Immutable after construction; adjacency
// lists are kept sorted ascending so "the i-th neighbor" is well defined.
class BoundedDigraph {
 public:
  BoundedDigraph() = default;

  BoundedDigraph(Vertex n, long long d, EdgeList edges) : n_(n), d_(d) {
    if (n < 0) throw BadVertexIndex("vertex count must be non-negative");
    if (d < 0) throw InvalidParameter("degree bound must be non-negative");
    out_.assign(static_cast<std::size_t>(n) + 1, {});
    in_.assign(static_cast<std::size_t>(n) + 1, {});
    for (const auto& [u, v] : edges) {
      if (u < 1 || u > n || v < 1 || v > n)
        throw BadVertexIndex("edge endpoint out of range: (" + std::to_string(u) +
                             "," + std::to_string(v) + ")");
      if (u == v)
        throw BadVertexIndex("self-loop rejected at vertex " + std::to_string(u));
      out_[static_cast<std::size_t>(u)].push_back(v);
    }
    for (Vertex u = 1; u <= n; ++u) {
      auto& lst = out_[static_cast<std::size_t>(u)];
      std::sort(lst.begin(), lst.end());
      lst.erase(std::unique(lst.begin(), lst.end()), lst.end());
      if (static_cast<long long>(lst.size()) > d)
        throw DegreeBoundViolated(u, static_cast<long long>(lst.size()), d);
      for (Vertex v : lst) in_[static_cast<std::size_t>(v)].push_back(u);
      edge_count_ += static_cast<long long>(lst.size());
    }
    for (Vertex v = 1; v <= n; ++v) {
      auto& lst = in_[static_cast<std::size_t>(v)];
      std::sort(lst.begin(), lst.end());
      if (static_cast<long long>(lst.size()) > d)
        throw DegreeBoundViolated(v, static_cast<long long>(lst.size()), d);
    }
  }

  Vertex vertex_count() const { return n_; }
  long long degree_bound() const { return d_; }
  long long edge_count() const { return edge_count_; }

  std::span<const Vertex> out_neighbors(Vertex v) const {
    check_vertex(v);
    return out_[static_cast<std::size_t>(v)];
  }

  std::span<const Vertex> in_neighbors(Vertex v) const {
    check_vertex(v);
    return in_[static_cast<std::size_t>(v)];
  }

  long long out_degree(Vertex v) const {
    return static_cast<long long>(out_neighbors(v).size());
  }

  long long in_degree(Vertex v) const {
    return static_cast<long long>(in_neighbors(v).size());
  }

  // i-th smallest out-neighbor (1-based); NONE past the degree.
  std::optional<Vertex> out_neighbor(Vertex v, long long i) const {
    auto lst = out_neighbors(v);
    if (i < 1) throw InvalidParameter("neighbor index must be positive");
    if (i > static_cast<long long>(lst.size())) return std::nullopt;
    return lst[static_cast<std::size_t>(i - 1)];
  }

  std::optional<Vertex> in_neighbor(Vertex v, long long i) const {
    auto lst = in_neighbors(v);
    if (i < 1) throw InvalidParameter("neighbor index must be positive");
    if (i > static_cast<long long>(lst.size())) return std::nullopt;
    return lst[static_cast<std::size_t>(i - 1)];
  }

  bool has_edge(Vertex u, Vertex v) const {
    auto lst = out_neighbors(u);
    return std::binary_search(lst.begin(), lst.end(), v);
  }

  long long max_out_degree() const {
    long long m = 0;
    for (Vertex v = 1; v <= n_; ++v) m = std::max(m, out_degree(v));
    return m;
  }

  long long max_in_degree() const {
    long long m = 0;
    for (Vertex v = 1; v <= n_; ++v) m = std::max(m, in_degree(v));
    return m;
  }

  long long max_degree() const { return std::max(max_out_degree(), max_in_degree()); }

  // Ascending lexicographic edge enumeration (the canonical write order).
  EdgeList edges() const {
    EdgeList es;
    es.reserve(static_cast<std::size_t>(edge_count_));
    for (Vertex u = 1; u <= n_; ++u)
      for (Vertex v : out_neighbors(u)) es.emplace_back(u, v);
    return es;
  }

  bool operator==(const BoundedDigraph& other) const {
    return n_ == other.n_ && d_ == other.d_ && out_ == other.out_;
  }

 private:
  void check_vertex(Vertex v) const {
    if (v < 1 || v > n_)
      throw BadVertexIndex("vertex " + std::to_string(v) + " out of range [1," +
                           std::to_string(n_) + "]");
  }

  Vertex n_ = 0;
  long long d_ = 0;
  long long edge_count_ = 0;
  std::vector<std::vector<Vertex>> out_;
  std::vector<std::vector<Vertex>> in_;
};

inline BoundedDigraph build_digraph(Vertex n, long long d, EdgeList edges) {
  return BoundedDigraph(n, d, std::move(edges));
}

// k leaves 1..k, center k+1, one edge from each leaf into the center.
inline BoundedDigraph make_k_star(int k) {
  if (k < 1) throw InvalidParameter("k-star needs k >= 1");
  EdgeList edges;
  for (Vertex leaf = 1; leaf <= k; ++leaf) edges.emplace_back(leaf, k + 1);
  return BoundedDigraph(k + 1, k, std::move(edges));
}

// Edge-list text format: first line "n m d", then m lines "u v". Readers
// accept any edge order; writers emit ascending lexicographic order.
inline BoundedDigraph read_edge_list(std::istream& is) {
  Vertex n;
  long long m, d;
  if (!(is >> n >> m >> d)) throw IoError("bad edge-list header (want: n m d)");
  EdgeList edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (long long i = 0; i < m; ++i) {
    Vertex u, v;
    if (!(is >> u >> v)) throw IoError("truncated edge list");
    edges.emplace_back(u, v);
  }
  return BoundedDigraph(n, d, std::move(edges));
}

inline void write_edge_list(std::ostream& os, const BoundedDigraph& g) {
  os << g.vertex_count() << ' ' << g.edge_count() << ' ' << g.degree_bound() << '\n';
  for (Vertex u = 1; u <= g.vertex_count(); ++u)
    for (Vertex v : g.out_neighbors(u)) os << u << ' ' << v << '\n';
}

inline BoundedDigraph read_edge_list_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open graph file: " + path);
  return read_edge_list(is);
}

inline void write_edge_list_file(const std::string& path, const BoundedDigraph& g) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot write graph file: " + path);
  write_edge_list(os, g);
}

}  // namespace proptest
