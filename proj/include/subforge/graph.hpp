#pragma once

#include "subforge/rational.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace subforge {

using Vertex = int;

/// Sorted, duplicate-free vertex id sequence with O(log) membership.
class VertexSet {
  public:
    VertexSet() = default;
    explicit VertexSet(std::vector<Vertex> ids);

    static VertexSet single(Vertex v) { return VertexSet({v}); }
    static VertexSet full(int n);

    bool contains(Vertex v) const;
    int size() const { return static_cast<int>(ids_.size()); }
    bool empty() const { return ids_.empty(); }
    const std::vector<Vertex> &ids() const { return ids_; }

    VertexSet unite(const VertexSet &other) const;
    VertexSet minus(const VertexSet &other) const;
    VertexSet intersect(const VertexSet &other) const;
    bool disjoint_from(const VertexSet &other) const;

    void insert(Vertex v);

    auto begin() const { return ids_.begin(); }
    auto end() const { return ids_.end(); }

    friend bool operator==(const VertexSet &a, const VertexSet &b) { return a.ids_ == b.ids_; }

  private:
    std::vector<Vertex> ids_;
};

struct DegreeStats {
    Rational avg;
    int min = 0;
    int max = 0;
};

/// Immutable undirected simple graph with dense ids 0..n-1, per-vertex
/// sorted neighbor lists and an optional two-coloring. "Removal" is always
/// expressed as avoid-sets passed to operations, never by mutating a graph.
///
/// origin_ids maps local ids back to the graph this one was carved from
/// (identity for graphs built directly), so certificates found in extracted
/// subgraphs can be translated back to the caller's vertex space.
class HostGraph {
  public:
    HostGraph() = default;

    /// Edges as (u,v) pairs; loops/duplicates rejected. side, when present,
    /// must have one 0/1 entry per vertex and every edge must cross.
    HostGraph(int n, std::vector<std::pair<Vertex, Vertex>> edges,
              std::optional<std::vector<std::int8_t>> side = std::nullopt);

    int vertex_count() const { return n_; }
    long long edge_count() const { return m_; }
    const std::vector<Vertex> &neighbors(Vertex v) const;
    int degree(Vertex v) const { return static_cast<int>(neighbors(v).size()); }
    bool adjacent(Vertex u, Vertex v) const;

    bool has_bipartition() const { return !side_.empty(); }
    /// 0 or 1; only valid when has_bipartition().
    int side(Vertex v) const { return side_[static_cast<std::size_t>(v)]; }
    VertexSet side_set(int s) const;

    std::vector<std::pair<Vertex, Vertex>> edges() const;

    const std::vector<Vertex> &origin_ids() const { return origin_; }
    Vertex origin_of(Vertex v) const { return origin_[static_cast<std::size_t>(v)]; }

    /// Induced subgraph on `keep`, relabeled to 0..|keep|-1 with origin ids
    /// composed through this graph's own origin map.
    HostGraph induced(const VertexSet &keep) const;

    /// Spanning subgraph keeping only the given edges (same vertex set).
    HostGraph spanning(const std::vector<std::pair<Vertex, Vertex>> &edges,
                       std::optional<std::vector<std::int8_t>> side = std::nullopt) const;

    bool is_connected() const;
    std::vector<std::vector<Vertex>> components() const;

    /// Attempt a proper 2-coloring; nullopt when an odd cycle exists.
    std::optional<std::vector<std::int8_t>> two_coloring() const;

    /// Same graph with bipartition metadata attached (validated).
    HostGraph with_bipartition(std::vector<std::int8_t> side) const;

  private:
    int n_ = 0;
    long long m_ = 0;
    std::vector<std::vector<Vertex>> adj_;
    std::vector<std::int8_t> side_;
    std::vector<Vertex> origin_;
};

using PatternGraph = HostGraph;

// Basic statistics and set primitives.

DegreeStats stats(const HostGraph &g);
Rational pair_density(const HostGraph &g, const VertexSet &a, const VertexSet &b);
int codegree(const HostGraph &g, Vertex u, Vertex v);

/// Ball of radius r around W; layers() gives N^0(W)=W, N^1, ..., N^r.
struct BallResult {
    VertexSet ball;
    std::vector<VertexSet> layers;
};
BallResult ball_layers(const HostGraph &g, const VertexSet &w, int r);
VertexSet ball(const HostGraph &g, const VertexSet &w, int r);

/// Spanning bipartite subgraph with at least half the edges, found by
/// deterministic local-search max cut seeded from a componentwise
/// 2-coloring attempt (so bipartite inputs keep every edge).
HostGraph max_cut_bipartite(const HostGraph &g);

} // namespace subforge
