#pragma once

#include "subforge/graph.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace subforge {

struct SbmParams {
    int n = 0;        // must equal 2 * k_blocks * t
    int t = 0;        // half block size
    int k_blocks = 0;
    double p = 0.0;   // inter-block edge probability
    double q = 0.0;   // intra-block (bipartite) edge probability
    std::uint64_t seed = 0;
};

/// Bipartite-block stochastic block model: k blocks of 2t vertices, each
/// block an independent G(t,t,q) across its aligned halves, and every
/// cross-block pair sampled with probability p. Bipartition metadata is
/// attached exactly when the sample respects the aligned two-coloring
/// (always true for p = 0).
HostGraph gen_sbm(const SbmParams &params);

/// r-fold Cartesian power; vertices are r-tuples in row-major order.
/// Bipartiteness of the factor is preserved via coordinate-parity sides.
HostGraph cartesian_power(const HostGraph &f, int r, long long vertex_cap = 2'000'000);

struct DegeneracyResult {
    int degeneracy = 0;
    std::vector<Vertex> order; // each vertex has <= degeneracy later neighbors
};

DegeneracyResult degeneracy(const HostGraph &g);

// Edge pairs are kept normalized (u < v).
using HEdgePair = std::pair<Vertex, Vertex>;

struct Biseparation {
    std::vector<HEdgePair> e1;
    int component_cap = 0;
    std::vector<std::vector<Vertex>> components; // of H minus E1
};

struct BiseparationVerdict {
    bool accepted = false;
    std::string violation;
};

BiseparationVerdict verify_biseparable(const HostGraph &h, const std::vector<HEdgePair> &e1,
                                       long long s_cap, int k_cap);

enum class SeparatorMode { exact, heuristic, auto_select };

/// Recursive balanced-separator partition: components over k_target are
/// split (exact minimum balanced separator up to 16 vertices, BFS-layer /
/// greedy bisection above), all separator-incident edges go to E1, and
/// non-bipartite small components are repaired by exact max cut. The result
/// always passes verify_biseparable or is absent.
std::optional<Biseparation> biseparate(const HostGraph &h, int k_target,
                                       SeparatorMode mode = SeparatorMode::auto_select);

/// E2 lift of a factor biseparation to the r-th Cartesian power: an edge of
/// the power joins tuples differing in one coordinate along a factor edge,
/// and lands in E2 exactly when that factor edge lies in E1.
Biseparation lift_biseparation(const HostGraph &f, const Biseparation &b, int r);

/// {"e1": [[u,v]...], "component_cap": k, "components": [...]}.
std::string biseparation_to_json(const Biseparation &b);
Biseparation biseparation_from_json(const std::string &text);

struct StandardFamily {
    enum Kind {
        clique,
        complete_bipartite,
        random_bipartite,
        grid,
        hypercube,
        cycle,
        path,
        erdos_renyi
    } kind = clique;
    int a = 1;
    int b = 1;
    double p = 0.0;
    std::uint64_t seed = 0;
};

HostGraph gen_standard(const StandardFamily &family);

// Convenience constructors used all over the tests.
HostGraph make_clique(int k);
HostGraph make_complete_bipartite(int a, int b);
HostGraph make_random_bipartite(int a, int b, double p, std::uint64_t seed);
HostGraph make_grid(int a, int b);
HostGraph make_hypercube(int d);
HostGraph make_cycle(int n);
HostGraph make_path(int n);
HostGraph make_erdos_renyi(int n, double p, std::uint64_t seed);
HostGraph make_star(int leaves);

} // namespace subforge
