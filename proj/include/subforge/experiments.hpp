#pragma once

#include "subforge/config.hpp"
#include "subforge/graph.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace subforge {

struct LowerBoundReport {
    int n1 = 0;
    long long samples = 0;      // injections actually evaluated
    bool exhaustive = false;    // all injections enumerated
    long long min_missing = 0;
    double mean_missing = 0.0;
    double frac_below_quarter = 0.0; // fraction with X_f <= q/4
    long long edge_count = 0;
    bool edge_bound_held = false;    // e(G) >= n1^2 / 4
    double mean_expectation_bound = 0.0; // average of m(f) + (q - m(f))/2

    std::string to_json() const;
    std::string to_csv_row() const;
    static std::string csv_header();
};

/// Sample a random bipartite host G(n1, n1, 1/2), then sample (or enumerate,
/// when feasible) injections of the pattern's vertices and count missing
/// pattern edges per injection. Each missing edge would force a distinct
/// internal vertex on any subdivision, which is the counting engine of the
/// lower-bound construction.
LowerBoundReport lowerbound_experiment(const PatternGraph &h, int n1, long long samples,
                                       std::uint64_t seed);

struct SbmDemoReport {
    int trials = 0;
    int successes = 0;
    std::vector<std::string> per_seed;
};

struct SbmDemoParams {
    int t = 3;
    int k_blocks = 4;
    double q = 0.5;
    double p = 0.0;
    int host_n = 200;
    double host_p = 0.5;
    int seeds = 5;
    bool sparse_host = false; // run the expander route instead of the dense one
};

/// Pattern from the block model, biseparation, then the dense (or sparse)
/// embedding route on a random host; every certificate re-verified.
SbmDemoReport sbm_pipeline_demo(const SbmDemoParams &params, const RunConfig &cfg);

} // namespace subforge
