#pragma once

#include "subforge/path.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>

namespace subforge {

using HEdge = std::pair<Vertex, Vertex>; // normalized x < y

/// balanced: every edge path has exactly ell internal vertices (length
/// ell+1). bounded: every path has length at most ell+1. ell = 0 means H
/// appears as a plain subgraph.
struct CertMode {
    enum Kind { balanced, bounded } kind = balanced;
    int ell = 0;

    static CertMode make_balanced(int ell) { return {balanced, ell}; }
    static CertMode make_bounded(int ellmax) { return {bounded, ellmax}; }
    friend bool operator==(const CertMode &a, const CertMode &b) {
        return a.kind == b.kind && a.ell == b.ell;
    }
};

struct SubdivisionCertificate {
    std::map<Vertex, Vertex> branch_map;  // V(H) -> V(G), injective
    std::map<HEdge, Path> edge_paths;     // E(H) -> path in G
    CertMode mode;
};

struct Verdict {
    bool accepted = false;
    std::string violation; // first violated clause, empty when accepted

    static Verdict ok() { return {true, ""}; }
    static Verdict fail(std::string why) { return {false, std::move(why)}; }
};

/// Checks, in order: branch map totality/injectivity/range, edge coverage,
/// per-path validity in G, endpoint correctness, the mode's length law,
/// pairwise internal disjointness and avoidance of all branch images. Total:
/// never throws on malformed certificates.
Verdict verify_subdivision(const HostGraph &g, const PatternGraph &h,
                           const SubdivisionCertificate &cert);

struct OracleResult {
    std::optional<SubdivisionCertificate> certificate;
    bool exhausted = false; // true: absence of a subdivision is certified
    long long nodes_explored = 0;
};

struct OracleGuard {
    int max_host = 12;
    int max_pattern = 4;
    int max_path_len = 6; // edges per subdivision path
};

/// Exhaustive backtracking over branch injections and edge-path assignments
/// with occupancy pruning. Within the guard, a nullopt certificate together
/// with exhausted=true is a proof of absence.
OracleResult brute_force_subdivision(const HostGraph &g, const PatternGraph &h, CertMode mode,
                                     const OracleGuard &guard = {});

/// Certificate JSON: {"mode","ell","branch_map":[[h,g]...],
/// "paths":[{"edge":[x,y],"vertices":[...]}...]}; round-trips bit-exact.
std::string certificate_to_json(const SubdivisionCertificate &cert);
SubdivisionCertificate certificate_from_json(const std::string &text);

} // namespace subforge
