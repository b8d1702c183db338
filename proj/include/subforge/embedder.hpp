#pragma once

#include "subforge/certify.hpp"
#include "subforge/config.hpp"
#include "subforge/expander.hpp"
#include "subforge/gadgets.hpp"
#include "subforge/patterns.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace subforge {

struct EmbeddingOutcome {
    std::optional<SubdivisionCertificate> certificate; // in the input graph's ids
    CertMode achieved;
    bool hypotheses_ok = true; // best-effort flag when stated hypotheses failed
    std::string failure_stage; // empty on success
    std::vector<std::string> stage_log;

    explicit operator bool() const { return certificate.has_value(); }
};

/// Bipartite dependent-random-choice embedding: scan the second side for the
/// vertex maximizing X^2 - (E[X]^2 / 2E[Y]) Y over exact codegree counts,
/// embed into its neighborhood minus the low-codegree core, and connect each
/// pattern edge through a fresh midpoint with two fresh codegree vertices,
/// giving paths of length 4 (a balanced subdivision with ell = 3).
EmbeddingOutcome drc_th3(const HostGraph &g, const PatternGraph &h, int scan_cap = 50000);

struct DenseReduceResult {
    bool dense_verdict = false; // no witness found: (alpha, beta)-dense
    bool exhaustive = false;    // witness search was exhaustive
    std::optional<VertexSet> witness;
    std::optional<SubdivisionCertificate> certificate; // rescue subdivision
    CertMode achieved;
    std::string diagnostic;
};

/// Either certify that G is (d*m^x, d/2)-dense (up to search mode), or use a
/// density witness W to rescue a short subdivision: bipartite DRC across
/// (W, G-W), then the codegree auxiliary-graph route with length-2
/// replacement paths.
DenseReduceResult dense_reduce(const HostGraph &g, const PatternGraph &h, int x_exp,
                               const RunConfig &cfg);

struct EmbedMode {
    enum Kind { balanced, bounded } kind = balanced;
    int path_len = 0; // balanced: exact edge count per path; bounded: max

    static EmbedMode make_balanced(int path_len) { return {balanced, path_len}; }
    static EmbedMode make_bounded(int maxlen) { return {bounded, maxlen}; }
};

/// Anchor every pattern vertex at a distinct same-side large-degree vertex
/// and realize each pattern edge as an anchor-to-anchor path: exact common
/// length in balanced mode (direct exact-length search first, adjuster
/// ladder when the length is out of direct reach), short paths in bounded
/// mode. degree_threshold defines the large-degree pool.
EmbeddingOutcome embed_large_degree(const HostGraph &g, const PatternGraph &h, EmbedMode mode,
                                    const RunConfig &cfg, int degree_threshold);

/// Degree classes of pattern vertices. Large takes precedence, then middle,
/// then small.
struct DegreeClassSplit {
    VertexSet large, middle, small;
    double large_threshold = 0.0;
    double small_threshold = 0.0;
};

DegreeClassSplit split_degrees(const PatternGraph &h, double large_threshold,
                               double small_threshold);

/// Anchoring gadgets: units for large-degree pattern vertices, webs for
/// middle ones, and a pool of spare webs (two per small vertex) consumed by
/// the first connection round.
struct GadgetAssignment {
    std::map<Vertex, Unit> units;  // for split.large
    std::map<Vertex, Web> webs;    // for split.middle
    std::vector<Web> spares;       // 2|small| spare webs
    VertexSet protected_interiors; // union of interiors/centers: paths avoid
};

struct BuildPlanResult {
    std::optional<GadgetAssignment> assignment;
    std::string failure_stage;
    std::vector<std::string> log;
};

/// reserved: host vertices (typically the large-degree pool) every builder
/// must avoid; they join the protected set the connection rounds honor.
BuildPlanResult build_gadget_assignment(const HostGraph &g, const PatternGraph &h,
                                        const DegreeClassSplit &split, const RunConfig &cfg,
                                        int m, const VertexSet &reserved = VertexSet());

/// Bookkeeping of the first connection round.
struct PathSystemState {
    VertexSet x;               // embedded small vertices
    std::vector<int> used;     // spare web indices in use (I)
    std::vector<int> demoted;  // bad web indices (I')
    PathSystem q;              // all round-1 paths
    std::map<Vertex, int> f;   // small vertex -> spare web index
    std::map<HEdge, Path> edge_paths;
    bool complete = false;     // x covers every small vertex
    std::string diagnosis;
    std::vector<std::string> audit_log;
};

PathSystemState round1_good_path_system(const HostGraph &g, const PatternGraph &h,
                                        GadgetAssignment &assignment,
                                        const DegreeClassSplit &split, EmbedMode mode,
                                        const RunConfig &cfg, int m);

struct Round2Result {
    std::map<HEdge, Path> edge_paths;
    bool complete = false;
    std::string diagnosis;
};

Round2Result round2_paths(const HostGraph &g, const std::vector<HEdge> &h2_edges,
                          GadgetAssignment &assignment, const DegreeClassSplit &split,
                          PathSystemState &state, EmbedMode mode, const RunConfig &cfg, int m);

/// Full balanced orchestration: max-cut, expander extraction, the
/// large-degree shortcut or the gadget pipeline, smallest parity-feasible
/// common length. Certificates are translated back to the input ids and
/// verified before return.
EmbeddingOutcome embed_balanced(const HostGraph &g, const PatternGraph &h, const RunConfig &cfg);

/// Bounded-length subdivision inside an expander host (the caller extracts
/// first): large-degree anchors when available, two-round gadget pipeline
/// otherwise.
EmbeddingOutcome embed_sparse_th(const HostGraph &g, const PatternGraph &h, const RunConfig &cfg);

/// Extraction wrapper around embed_sparse_th for raw hosts.
EmbeddingOutcome find_subdivision_sparse(const HostGraph &g, const PatternGraph &h,
                                         const RunConfig &cfg);

/// Dense-host short subdivision via a sampled-regular dense pair:
/// biseparate the pattern, embed the bipartite components into greedy
/// complete-bipartite blocks inside the pair, connect the removed edges by
/// paths of length at most 4.
EmbeddingOutcome embed_dense_short(const HostGraph &g, const PatternGraph &h, const RunConfig &cfg,
                                   const std::optional<Biseparation> &bisep = std::nullopt);

} // namespace subforge
