#pragma once

#include <optional>

#include "proptest/digraph.hpp"
#include "proptest/errors.hpp"

namespace proptest {

enum class QueryModel { unidirectional, bidirectional };

inline const char* to_string(QueryModel m) {
  return m == QueryModel::unidirectional ? "unidirectional" : "bidirectional";
}

// Query-metered access to a graph under a chosen model. G is either a
// BoundedDigraph or a virtual graph such as ReductionOracle (out-queries
// only). Every successful neighbor or degree query costs exactly 1; a
// rejected in-query in unidirectional mode costs nothing.
template <typename G>
class OracleSession {
 public:
  OracleSession(G& graph, QueryModel model) : graph_(graph), model_(model) {}

  std::optional<Vertex> out_neighbor(Vertex v, long long i) {
    auto answer = graph_.out_neighbor(v, i);
    ++query_count_;
    return answer;
  }

  std::optional<Vertex> in_neighbor(Vertex v, long long i) {
    if (model_ != QueryModel::bidirectional)
      throw ModelViolation("in-neighbor query in unidirectional mode");
    if constexpr (requires(G& g) { g.in_neighbor(v, i); }) {
      auto answer = graph_.in_neighbor(v, i);
      ++query_count_;
      return answer;
    } else {
      throw ModelViolation("oracle does not expose in-neighbor access");
    }
  }

  long long out_degree(Vertex v) {
    long long deg = graph_.out_degree(v);
    ++query_count_;
    return deg;
  }

  long long in_degree(Vertex v) {
    if (model_ != QueryModel::bidirectional)
      throw ModelViolation("in-degree query in unidirectional mode");
    if constexpr (requires(G& g) { g.in_degree(v); }) {
      long long deg = graph_.in_degree(v);
      ++query_count_;
      return deg;
    } else {
      throw ModelViolation("oracle does not expose in-neighbor access");
    }
  }

  // Free metadata: n and d are public knowledge, not charged.
  Vertex vertex_count() const { return graph_.vertex_count(); }
  long long degree_bound() const { return graph_.degree_bound(); }

  QueryModel model() const { return model_; }
  long long query_count() const { return query_count_; }
  G& graph() { return graph_; }
  const G& graph() const { return graph_; }

 private:
  G& graph_;
  QueryModel model_;
  long long query_count_ = 0;
};

}  // namespace proptest
