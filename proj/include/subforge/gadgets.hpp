#pragma once

#include "subforge/expander_params.hpp"
#include "subforge/path.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace subforge {

/// Connected D-vertex set in which every vertex sits within distance m of
/// the center, distances measured inside the set.
struct Expansion {
    Vertex center = -1;
    VertexSet vertices; // includes center
    int declared_size = 0;
    int radius = 0;
};

struct Star {
    Vertex center = -1;
    std::vector<Vertex> leaves;
};

/// Core u with h1 internally disjoint branches of length <= h3, each ending
/// at the center of a pendant h2-star; star leaves stay off every branch.
struct Unit {
    Vertex core = -1;
    std::vector<Path> branches; // u, x_i-paths
    std::vector<Star> stars;    // S_i centered at x_i
    int h1 = 0, h2 = 0, h3 = 0;

    VertexSet exterior() const; // union of star leaves
    VertexSet interior() const; // everything else
    VertexSet all_vertices() const;
};

/// Two-level analogue: core v, h0 branches to unit cores, the units
/// vertex-disjoint and clear of the branch paths.
struct Web {
    Vertex core = -1;
    std::vector<Path> branches; // v, u_i-paths
    std::vector<Unit> units;    // F_i with core u_i
    int h0 = 0, h1 = 0, h2 = 0, h3 = 0;

    VertexSet center_set() const; // V of branch paths (core alone when h0 = 0)
    VertexSet exterior() const;
    VertexSet interior() const;
    VertexSet all_vertices() const;
};

/// Length-control gadget: center set A realizes v1,v2-paths of every length
/// ell_min + 2i for i <= k, with a (D,m)-expansion hanging off each core.
struct Adjuster {
    Vertex v1 = -1, v2 = -1;
    Expansion f1, f2;
    VertexSet center; // A
    int d_size = 0, radius = 0, k = 0;
    int ell_min = 0;
    std::vector<Path> witnesses; // i-th has length ell_min + 2i

    VertexSet all_vertices() const;
    const Expansion &end(int i) const { return i == 0 ? f1 : f2; }
};

/// Core adjuster whose chosen end R reaches a family of disjoint adjusters
/// through short paths that stay clear of every center set.
struct Octopus {
    Adjuster core;
    int end_index = 0; // 0 -> f1, 1 -> f2
    std::vector<Adjuster> family;
    std::vector<Path> links;
    int r1 = 0, r2 = 0, r3 = 0, r4 = 0;
};

using GadgetRecord = std::variant<Expansion, Unit, Web, Adjuster, Octopus>;

struct GadgetVerdict {
    bool valid = false;
    std::string violated_clause; // first violated definitional clause
};

/// Checks every definitional clause literally; adjuster ladders are
/// re-established by exhaustive exact-length search inside the center set.
GadgetVerdict validate_gadget(const HostGraph &g, const GadgetRecord &record,
                              long long ladder_budget = 10'000'000);

template <typename T> struct BuildResult {
    std::optional<T> value;
    std::string stage;  // which construction stage starved, empty on success
    std::string detail;

    explicit operator bool() const { return value.has_value(); }
};

/// BFS-grown (D,m)-expansion at center inside G - avoid.
BuildResult<Expansion> grow_expansion(const HostGraph &g, Vertex center, int size, int radius_cap,
                                      const VertexSet &avoid);

/// Greedy star harvest around a high-degree core plus consecutive shortest
/// branch paths; overused stars are discarded. side_constrained pins the
/// core (and star centers) to side 0 of a bipartite host.
BuildResult<Unit> build_unit(const HostGraph &g, const VertexSet &avoid, int h1, int h2, int h3,
                             bool side_constrained = true);

BuildResult<Web> build_web(const HostGraph &g, const VertexSet &avoid, int h0, int h1, int h2,
                           int h3, bool side_constrained = true);

/// Shortest even cycle (via the bipartite max-cut subgraph when the host is
/// not two-colored), cores at distance r-1 along it, expansions grown off
/// both cores.
BuildResult<Adjuster> build_simple_adjuster(const HostGraph &g, const VertexSet &avoid, int d_size,
                                            int m);

/// r simple adjusters chained by short connector paths; the ladder composes
/// additively and is re-verified exhaustively.
BuildResult<Adjuster> chain_adjusters(const HostGraph &g, const VertexSet &avoid, int d_size,
                                      int m, int r);

BuildResult<Octopus> build_octopus(const HostGraph &g, const VertexSet &avoid, int r1, int r2,
                                   int r3, int r4);

struct AdjustConnectResult {
    std::optional<Path> p; // Z1 -> I1 center
    std::optional<Path> q; // Z2 -> I2 center
    int total_length = -1; // achieved ell(P) + ell(Q)
    int window_low = 0, window_high = 0;
    std::string miss_reason;

    bool ok() const { return p && q; }
};

/// Vertex-disjoint P (Z1 to I1's center) and Q (Z2 to I2's center) with
/// total length in [ell, ell + window]; Q is found by an iterative
/// lengthening walk landing on Z2, so the achieved total is reported
/// exactly. A parity-infeasible window is reported as a miss.
AdjustConnectResult adjust_connect(const HostGraph &g, const VertexSet &avoid, const VertexSet &z1,
                                   const VertexSet &z2, const Expansion &i1, const Expansion &i2,
                                   int ell, int window, long long budget = 200'000);

std::string gadget_to_json(const GadgetRecord &record);
GadgetRecord gadget_from_json(const std::string &text);

} // namespace subforge
