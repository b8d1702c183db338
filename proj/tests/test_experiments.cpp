#include "doctest.h"

#include "subforge/experiments.hpp"
#include "subforge/patterns.hpp"

using namespace subforge;

TEST_CASE("lowerbound counting mechanics on the K4 into 2+2 corner") {
    // With n1 = 2 every injection uses all four host vertices, so exactly
    // the two same-side pairs of K4 are always missing, and the expectation
    // lower bound m(f) + (q - m(f))/2 equals 4 for every injection.
    auto k4 = make_clique(4);
    auto rep = lowerbound_experiment(k4, 2, 1000, 0);
    CHECK(rep.exhaustive);
    CHECK(rep.min_missing >= 2);
    CHECK(rep.mean_expectation_bound == doctest::Approx(4.0));
}

TEST_CASE("lowerbound statistics for K10 hold with margin") {
    auto k10 = make_clique(10);
    for (std::uint64_t seed = 0; seed < 2; ++seed) {
        auto rep = lowerbound_experiment(k10, 100, 10000, seed);
        CHECK(rep.samples == 10000);
        CHECK(rep.mean_missing >= 22.5 * 0.95);
        CHECK(rep.frac_below_quarter == 0.0);
        CHECK(rep.edge_bound_held);
        CHECK(rep.mean_missing >= rep.min_missing);
    }
}

TEST_CASE("lowerbound with zero samples reports edge stats only") {
    auto rep = lowerbound_experiment(make_clique(4), 20, 0, 1);
    CHECK(rep.samples == 0);
    CHECK(rep.edge_count > 0);
}

TEST_CASE("sampled support is no stronger than the exhaustive one") {
    PatternGraph edge(2, {{0, 1}});
    auto exhaustive = lowerbound_experiment(edge, 3, 1000, 7); // 30 injections, enumerated
    CHECK(exhaustive.exhaustive);
    auto sampled = lowerbound_experiment(edge, 3, 25, 7);
    CHECK_FALSE(sampled.exhaustive);
    CHECK(sampled.min_missing >= exhaustive.min_missing);
}

TEST_CASE("report serialization") {
    auto rep = lowerbound_experiment(make_clique(4), 10, 100, 0);
    CHECK(rep.to_json().find("mean_missing") != std::string::npos);
    CHECK(LowerBoundReport::csv_header().find("frac_below_quarter") != std::string::npos);
    CHECK_FALSE(rep.to_csv_row().empty());
}

TEST_CASE("sbm pipeline demo on a dense host") {
    RunConfig cfg;
    cfg.seed = 0;
    SbmDemoParams params;
    params.t = 3;
    params.k_blocks = 4;
    params.q = 0.5;
    params.p = 0.0;
    params.host_n = 300;
    params.host_p = 0.5;
    params.seeds = 3;
    auto rep = sbm_pipeline_demo(params, cfg);
    CHECK(rep.trials == 3);
    CHECK(rep.successes >= 2);
}

TEST_CASE("sbm pipeline demo trivial and undersized corners") {
    RunConfig cfg;
    SbmDemoParams empty;
    empty.q = 0.0;
    empty.p = 0.0;
    empty.seeds = 1;
    auto rep = sbm_pipeline_demo(empty, cfg);
    CHECK(rep.successes == 1); // edgeless pattern is trivially embedded

    SbmDemoParams tiny;
    tiny.t = 5;
    tiny.k_blocks = 6;
    tiny.q = 1.0;
    tiny.host_n = 10; // host smaller than the pattern
    tiny.seeds = 1;
    auto small = sbm_pipeline_demo(tiny, cfg);
    CHECK(small.successes == 0);
    CHECK(small.per_seed[0].find("smaller") != std::string::npos);
}
