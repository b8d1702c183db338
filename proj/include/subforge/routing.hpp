#pragma once

#include "subforge/config.hpp"
#include "subforge/expander_params.hpp"
#include "subforge/path.hpp"

#include <optional>
#include <string>
#include <vector>

namespace subforge {

/// Short X1,X2-path through G-W. When the expander connection guarantee applies
/// (both sets of size >= k, |W| <= rho(x)x/4) an absence is flagged as a
/// theory violation rather than silently swallowed; both the theoretical
/// length bound and the realized length are reported.
struct ConnectResult {
    std::optional<Path> path;
    bool hypotheses_hold = false;
    double theory_maxlen = 0.0; // (2/eps1) log^3(15n/k)
    bool theory_violation = false;
};

ConnectResult connect_avoiding(const HostGraph &g, const VertexSet &x1, const VertexSet &x2,
                               const VertexSet &w, int maxlen,
                               const std::optional<ExpanderParams> &p = std::nullopt);

/// Plain deterministic multi-source BFS shortest path, no reporting.
std::optional<Path> bfs_shortest_path(const HostGraph &g, const VertexSet &sources,
                                      const VertexSet &targets, const VertexSet &avoid,
                                      int maxlen);

struct CspTargetStatus {
    Vertex target = -1;
    bool reached = false;
    int residual_checked_length = -1; // re-run BFS length in recorded residual
};

struct CspResult {
    PathSystem system;
    std::vector<CspTargetStatus> statuses;
};

/// Paths from v, the i-th a shortest path to its target inside
/// domain \ (union of earlier paths' vertices) + {v}. Unreachable targets
/// are reported per index; earlier paths are kept.
CspResult consecutive_shortest_paths(const HostGraph &g, Vertex v, const VertexSet &domain,
                                     const std::vector<Vertex> &targets);

struct RobustBallReport {
    long long ball_size = 0;
    long long bound = 0;
    bool pass = false;
};

/// Size of the radius-m ball around v after deleting the system's vertices
/// (except v itself).
RobustBallReport robust_ball_check(const HostGraph &g, Vertex v, const PathSystem &system, int m,
                                   long long bound);

struct ExactPathResult {
    std::optional<Path> path;
    bool exhausted = false; // absence proven (search space fully explored)
    long long expansions = 0;
};

/// Simple u,v-path with exactly ell edges in G-avoid, by depth-bounded DFS
/// with layered-distance pruning. Exponential worst case; `budget` caps node
/// expansions and budget exhaustion is distinguished from proven absence.
/// With parity_check set, a bipartite host with mismatched endpoint parity
/// returns proven absence immediately.
ExactPathResult path_of_length(const HostGraph &g, Vertex u, Vertex v, int ell,
                               const VertexSet &avoid, bool parity_check = true,
                               long long budget = 1'000'000);

} // namespace subforge
