#pragma once

#include "subforge/expander_params.hpp"
#include "subforge/graph.hpp"
#include "subforge/rational.hpp"

#include <optional>
#include <string>

namespace subforge {

enum class ExpanderVerdict { verified_exact, verified_sampled, refuted };

struct ExpanderReport {
    ExpanderVerdict verdict = ExpanderVerdict::refuted;
    std::optional<VertexSet> witness; // violating X when refuted
    long long trials = 0;             // sampled candidates inspected
    double rho_at_n = 0.0;
    ExpanderParams params;

    std::string to_json() const;
};

struct CheckMode {
    enum Kind { exact, sampled } kind = exact;
    int trials = 10000;
    std::uint64_t seed = 0;

    static CheckMode make_exact() { return {exact, 0, 0}; }
    static CheckMode make_sampled(int trials, std::uint64_t seed = 0) {
        return {sampled, trials, seed};
    }
};

/// Exhaustive check enumerates every X with k/2 <= |X| <= n/2 (n capped);
/// sampled mode combines deterministic structural scans (components, BFS
/// balls) with random subsets and BFS-grown sets, refuting on any violation.
/// A sampled pass is not a proof; a refutation witness always is.
ExpanderReport check_expander(const HostGraph &g, const ExpanderParams &p, CheckMode mode,
                              int exact_cap = 18);

/// Re-validate a claimed witness arithmetically.
bool witness_violates(const HostGraph &g, const ExpanderParams &p, const VertexSet &x);

struct ExtractResult {
    std::optional<HostGraph> graph;
    ExpanderReport report;
    Rational input_avg;
    Rational output_avg;
    int output_min_degree = 0;
    bool degree_floor_met = false;   // d(out) >= d(in)/2 (enforced)
    bool min_degree_met = false;     // delta(out) >= d(out)/2 (enforced)
    bool eps0_floor_met = false;     // d(out) >= d(in)/(1+eps0), reported only
    std::string diagnostic;          // failure stage when graph absent
};

/// Iterative refinement: trim vertices below half the current average
/// degree, then while a violating set X is found keep whichever of
/// G[X u N(X)] and G - X has the larger average degree. Output is returned
/// only after its degree inequalities and expansion have been verified;
/// otherwise a diagnostic is produced.
ExtractResult extract_expander(const HostGraph &g, const ExpanderParams &p, bool want_bipartite,
                               int exact_cap = 18, int sample_trials = 20000,
                               std::uint64_t seed = 0, double eps0 = 0.25);

struct RestrictResult {
    VertexSet y;
    ExpanderReport report; // at halved eps1
    bool degree_ok = false;
    bool size_threshold_ok = false; // |X| below n rho(n) d / (4 Delta)
};

/// Restriction of an expander to Y = V - X, verified at eps1/2.
RestrictResult robust_restrict(const HostGraph &g, const VertexSet &x, const ExpanderParams &p,
                               int exact_cap = 18, int sample_trials = 10000,
                               std::uint64_t seed = 0);

struct SparseWitnessResult {
    std::optional<VertexSet> witness; // W with |W| <= alpha, d(G-W) < beta
    bool exhaustive = false;          // absence is a proof only when set
    Rational best_density;            // smallest d(G-W) seen
};

enum class WitnessMode { exact, heuristic, auto_select };

/// Search for a density witness refuting (alpha, beta)-density. Exact mode
/// enumerates all subsets (n <= 14); the heuristic removes highest-degree
/// vertices greedily with single-vertex swap improvement.
SparseWitnessResult find_sparse_witness(const HostGraph &g, int alpha, Rational beta,
                                        WitnessMode mode = WitnessMode::auto_select);

struct BallGrowthReport {
    bool skipped = false;     // degree precondition not met
    std::string skip_reason;
    int m = 0;
    long long ball_size = 0;
    long long bound = 0;
    bool pass = false;
    // This check assumes the host expands; it does not verify it.
    std::string caveat = "expansion of the host assumed, not verified here";
};

/// |B^m(v)| >= n/2 with m the smallest even integer above log^4(n/d);
/// requires d(v) >= eps2 * d, otherwise reports a skip.
BallGrowthReport ball_growth_check(const HostGraph &g, Vertex v, const ExpanderParams &p,
                                   std::optional<int> m_override = std::nullopt);

} // namespace subforge
