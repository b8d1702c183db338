#pragma once

#include "subforge/graph.hpp"

#include <string>
#include <vector>

namespace subforge {

/// Simple path as an explicit vertex sequence; length is the edge count.
class Path {
  public:
    Path() = default;
    explicit Path(std::vector<Vertex> vertices) : vertices_(std::move(vertices)) {}

    const std::vector<Vertex> &vertices() const { return vertices_; }
    int length() const { return static_cast<int>(vertices_.size()) - 1; }
    bool empty() const { return vertices_.empty(); }
    Vertex front() const { return vertices_.front(); }
    Vertex back() const { return vertices_.back(); }

    /// Internal vertices (everything but the endpoints).
    std::vector<Vertex> interior() const;

    Path reversed() const;

    /// this ++ other, where other starts at this->back().
    Path concat(const Path &other) const;

    /// Adjacency of consecutive vertices plus no repeats.
    bool valid_in(const HostGraph &g, std::string *why = nullptr) const;

    friend bool operator==(const Path &a, const Path &b) { return a.vertices_ == b.vertices_; }

  private:
    std::vector<Vertex> vertices_;
};

/// Collection of pairwise internally vertex-disjoint paths.
class PathSystem {
  public:
    PathSystem() = default;

    void add(Path p);
    const std::vector<Path> &paths() const { return paths_; }
    int size() const { return static_cast<int>(paths_.size()); }

    /// Union of interiors of all paths.
    const VertexSet &interior() const { return interior_; }
    /// Union of all vertices of all paths.
    VertexSet all_vertices() const;

    /// Pairwise internal disjointness (endpoints may coincide).
    bool internally_disjoint(std::string *why = nullptr) const;

  private:
    std::vector<Path> paths_;
    VertexSet interior_;
};

namespace audit {

/// Global parity bookkeeping: whenever an operation finalizes a path inside
/// a bipartite host, it reports it here. Same-side endpoints must give even
/// length; the acceptance suite asserts zero violations across everything.
void note_path(const HostGraph &g, const Path &p);
long long paths_checked();
long long parity_violations();
/// Paths that failed adjacency/simplicity re-validation at the hook.
long long structure_violations();
void reset();

} // namespace audit

} // namespace subforge
