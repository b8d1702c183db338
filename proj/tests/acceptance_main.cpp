// Acceptance suite: runs every top-level criterion at its pinned tolerance
// and prints one PASS/FAIL line per criterion. Exit status is the number of
// failed criteria.

#include "subforge/certify.hpp"
#include "subforge/embedder.hpp"
#include "subforge/experiments.hpp"
#include "subforge/patterns.hpp"
#include "subforge/rng.hpp"
#include "subforge/routing.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace subforge;

namespace {

int g_failures = 0;

void report(int index, const std::string &name, bool pass, const std::string &detail) {
    std::cout << (pass ? "PASS" : "FAIL") << "  [" << index << "] " << name;
    if (!detail.empty())
        std::cout << "  (" << detail << ")";
    std::cout << std::endl;
    if (!pass)
        ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

RunConfig accept_cfg(std::uint64_t seed) {
    RunConfig cfg;
    cfg.seed = seed;
    cfg.sample_trials = 2000; // extraction-internal refutation search
    return cfg;
}

PatternGraph pattern_for(int which) {
    switch (which % 5) {
    case 0: return make_clique(3);
    case 1: return make_clique(4);
    case 2: return make_cycle(4);
    case 3: return make_path(4);
    default: return make_star(3);
    }
}

HostGraph host_for(std::uint64_t seed) {
    switch (seed % 4) {
    case 0: return make_complete_bipartite(40 + static_cast<int>(seed % 30), 60);
    case 1: return make_erdos_renyi(120, 0.25, seed);
    case 2: {
        SbmParams sp;
        sp.t = 10;
        sp.k_blocks = 5;
        sp.n = 100;
        sp.q = 0.8;
        sp.p = 0.15;
        sp.seed = seed;
        return gen_sbm(sp);
    }
    default: return make_random_bipartite(70, 70, 0.35, seed);
    }
}

// 1. Certificate soundness over >= 500 randomized end-to-end runs.
void criterion_soundness() {
    auto start = std::chrono::steady_clock::now();
    int runs = 0, produced = 0, bad = 0;
    for (std::uint64_t seed = 0; seed < 500; ++seed) {
        HostGraph g = host_for(seed);
        PatternGraph h = pattern_for(static_cast<int>(seed));
        RunConfig cfg = accept_cfg(seed);
        EmbeddingOutcome out;
        switch (seed % 3) {
        case 0: out = embed_balanced(g, h, cfg); break;
        case 1: out = find_subdivision_sparse(g, h, cfg); break;
        default: out = embed_dense_short(g, h, cfg); break;
        }
        ++runs;
        if (out.certificate) {
            ++produced;
            if (!verify_subdivision(g, h, *out.certificate).accepted)
                ++bad;
        }
    }
    std::ostringstream detail;
    detail << runs << " runs, " << produced << " certificates, " << bad << " verifier failures, "
           << seconds_since(start) << "s";
    report(1, "certificate soundness", bad == 0 && runs >= 500 && seconds_since(start) < 600.0,
           detail.str());
}

// 2. Oracle agreement on the exhaustive small corpus.
void criterion_oracle_agreement() {
    std::vector<HostGraph> hosts;
    hosts.push_back(make_cycle(9));
    hosts.push_back(make_cycle(10));
    hosts.push_back(make_complete_bipartite(3, 3));
    hosts.push_back(make_complete_bipartite(4, 5));
    hosts.push_back(make_clique(5));
    hosts.push_back(make_grid(2, 4));
    hosts.push_back(make_grid(3, 3));
    hosts.push_back(make_hypercube(3));
    hosts.push_back(HostGraph(10, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {0, 4}, {0, 5}, {1, 6},
                                   {2, 7}, {3, 8}, {4, 9}, {5, 7}, {7, 9}, {5, 8}, {6, 8},
                                   {6, 9}})); // Petersen
    for (std::uint64_t seed = 0; seed < 4; ++seed)
        hosts.push_back(make_erdos_renyi(9, 0.35, seed));

    std::vector<PatternGraph> patterns{make_clique(3), make_path(3), make_cycle(4)};
    int contradictions = 0, claims = 0, oracle_hits = 0, misses = 0;
    for (const auto &g : hosts) {
        for (const auto &h : patterns) {
            for (int ell = 0; ell <= 3; ++ell) {
                OracleGuard guard;
                guard.max_host = 10;
                guard.max_pattern = 4;
                guard.max_path_len = 6;
                auto oracle = brute_force_subdivision(g, h, CertMode::make_balanced(ell), guard);
                if (oracle.certificate)
                    ++oracle_hits;
                RunConfig cfg = accept_cfg(0);
                cfg.ell_search_cap = ell + 1;
                EmbeddingOutcome out;
                try {
                    out = embed_balanced(g, h, cfg);
                } catch (const std::exception &) {
                    continue;
                }
                if (out.certificate && out.achieved == CertMode::make_balanced(ell)) {
                    ++claims;
                    if (!oracle.certificate)
                        ++contradictions;
                } else if (oracle.certificate) {
                    ++misses; // completeness gap: reported, not bounded
                }
            }
        }
    }
    std::ostringstream detail;
    detail << claims << " exact-ell claims, " << oracle_hits << " oracle hits, " << misses
           << " completeness gaps, " << contradictions << " contradictions";
    report(2, "oracle agreement", contradictions == 0, detail.str());
}

// 3. Expander extraction contract on random and structured fixtures.
void criterion_extraction() {
    int violations = 0, failures = 0, runs = 0;
    auto check_instance = [&](const HostGraph &g, std::uint64_t seed) {
        ++runs;
        double d_in = stats(g).avg.to_double();
        ExpanderParams p{0.125, 0.1, std::max(0.05, 0.1 * d_in / 8.0), LogBase::two};
        auto res = extract_expander(g, p, false, 16, 2000, seed);
        if (!res.graph) {
            ++failures;
            return;
        }
        bool ok = res.degree_floor_met && res.min_degree_met;
        // Independent re-verification at the acceptance's own strength.
        const HostGraph &h = *res.graph;
        Rational floor = Rational(2 * g.edge_count(), g.vertex_count()) / Rational(2);
        if (Rational(2 * h.edge_count(), h.vertex_count()) < floor)
            ok = false;
        DegreeStats st = stats(h);
        if (Rational(2 * st.min) < st.avg)
            ok = false;
        CheckMode mode = h.vertex_count() <= 16 ? CheckMode::make_exact()
                                                : CheckMode::make_sampled(10000, seed + 991);
        auto rep = check_expander(h, p, mode, 16);
        if (rep.verdict == ExpanderVerdict::refuted)
            ok = false;
        if (!ok)
            ++violations;
    };
    for (std::uint64_t seed = 0; seed < 100; ++seed)
        check_instance(make_erdos_renyi(200, 0.05, seed), seed);
    // Structured fixtures, including sub-16 graphs that get the exact check.
    for (int k = 4; k <= 9; ++k)
        check_instance(make_clique(k), 1000 + static_cast<std::uint64_t>(k));
    for (int a = 3; a <= 8; ++a)
        check_instance(make_complete_bipartite(a, a), 2000 + static_cast<std::uint64_t>(a));
    check_instance(make_grid(3, 4), 3001);
    check_instance(make_grid(4, 4), 3002);
    check_instance(make_hypercube(3), 3003);
    check_instance(make_hypercube(4), 3004);
    check_instance(make_cycle(12), 3005);
    check_instance(make_cycle(16), 3006);
    check_instance(make_path(14), 3007);
    check_instance(make_star(12), 3008);
    std::ostringstream detail;
    detail << runs << " instances, " << failures << " diagnostic failures, " << violations
           << " contract violations";
    report(3, "expander extraction contract", violations == 0, detail.str());
}

// 4. DRC quantitative check at the stated scale.
void criterion_drc() {
    auto k4 = make_clique(4);
    int successes = 0;
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto g = make_random_bipartite(120, 8000, 0.5, seed);
        auto start = std::chrono::steady_clock::now();
        auto out = drc_th3(g, k4);
        double elapsed = seconds_since(start);
        worst = std::max(worst, elapsed);
        if (out.certificate && elapsed < 10.0 &&
            verify_subdivision(g, k4, *out.certificate).accepted)
            ++successes;
    }
    std::ostringstream detail;
    detail << successes << "/20 verified, worst " << worst << "s";
    report(4, "dependent random choice", successes >= 19, detail.str());
}

// 5. Adjuster ladder over 50 built adjusters.
void criterion_adjusters() {
    int built = 0, violations = 0;
    std::uint64_t seed = 0;
    while (built < 50 && seed < 200) {
        HostGraph g = seed % 2 == 0
                          ? make_random_bipartite(40 + static_cast<int>(seed % 20),
                                                  40 + static_cast<int>(seed % 20), 0.3, seed)
                          : make_erdos_renyi(60 + static_cast<int>(seed % 30), 0.25, seed);
        ++seed;
        int d_size = 2 + static_cast<int>(seed % 5);       // <= 20 by construction
        int m = 2 + static_cast<int>(seed % 3);            // <= 4
        int k = 1 + static_cast<int>(seed % 3);            // <= 3
        auto res = k == 1 ? build_simple_adjuster(g, VertexSet(), d_size, m)
                          : chain_adjusters(g, VertexSet(), d_size, m, k);
        if (!res.value)
            continue;
        ++built;
        const Adjuster &a = *res.value;
        if (a.center.size() > 10 * m * a.k)
            ++violations;
        // Exhaustive re-search of every rung inside the center set.
        VertexSet outside =
            VertexSet::full(g.vertex_count()).minus(a.center.unite(VertexSet({a.v1, a.v2})));
        for (int i = 0; i <= a.k; ++i) {
            auto rung = path_of_length(g, a.v1, a.v2, a.ell_min + 2 * i, outside, true,
                                       10'000'000);
            if (!rung.path)
                ++violations;
        }
    }
    std::ostringstream detail;
    detail << built << " adjusters, " << violations << " violations";
    report(5, "adjuster ladder", built >= 50 && violations == 0, detail.str());
}

// 6. Cartesian power and biseparation arithmetic, exact.
void criterion_cartesian() {
    int violations = 0;
    std::vector<HostGraph> factors{make_path(3), make_path(4), make_cycle(6), make_clique(2)};
    for (const auto &f : factors) {
        long long fv = f.vertex_count(), fe = f.edge_count();
        for (int r = 1; r <= 3; ++r) {
            auto h = cartesian_power(f, r);
            long long vexp = 1;
            for (int i = 0; i < r; ++i)
                vexp *= fv;
            if (h.vertex_count() != vexp || h.edge_count() != r * (vexp / fv) * fe)
                ++violations;
            if (degeneracy(h).degeneracy > r * degeneracy(f).degeneracy)
                ++violations;
        }
        auto bisep = biseparate(f, std::max(2, static_cast<int>(fv) / 2));
        if (!bisep) {
            ++violations;
            continue;
        }
        for (int r = 2; r <= 3; ++r) {
            auto lifted = lift_biseparation(f, *bisep, r);
            long long expected = r;
            for (int i = 0; i < r - 1; ++i)
                expected *= fv;
            expected *= static_cast<long long>(bisep->e1.size());
            if (static_cast<long long>(lifted.e1.size()) != expected)
                ++violations;
        }
    }
    report(6, "cartesian and biseparation arithmetic", violations == 0,
           violations == 0 ? "all counts exact" : std::to_string(violations) + " mismatches");
}

// 7. Lower-bound statistics at the stated scale.
void criterion_lowerbound() {
    auto start = std::chrono::steady_clock::now();
    auto k10 = make_clique(10);
    int bad = 0;
    double worst_mean = 1e9;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto rep = lowerbound_experiment(k10, 100, 10000, seed);
        worst_mean = std::min(worst_mean, rep.mean_missing);
        if (rep.mean_missing < 22.5 * 0.95 || rep.frac_below_quarter != 0.0 ||
            !rep.edge_bound_held)
            ++bad;
    }
    std::ostringstream detail;
    detail << "worst mean " << worst_mean << ", " << bad << " bad seeds, "
           << seconds_since(start) << "s";
    report(7, "lower-bound statistics", bad == 0 && seconds_since(start) < 120.0, detail.str());
}

// 8. rho monotonicity (1e5 pairs) and the global parity law.
void criterion_rho_parity() {
    ExpanderParams p{0.11, 0.1, 5.0, LogBase::two};
    Rng rng(13, "rho_acceptance");
    int bad = 0;
    for (int t = 0; t < 100000; ++t) {
        double a = p.k / 5.0 + rng.next_double() * 1e6;
        double b = a + rng.next_double() * 1e6;
        if (rho(a, p) < rho(b, p))
            ++bad;
    }
    long long parity = audit::parity_violations();
    long long checked = audit::paths_checked();
    long long malformed = audit::structure_violations();
    std::ostringstream detail;
    detail << bad << " monotonicity violations, parity " << parity << "/" << checked
           << ", malformed paths " << malformed;
    report(8, "rho monotone and parity law", bad == 0 && parity == 0 && checked > 0 &&
               malformed == 0,
           detail.str());
}

// 9. Determinism: byte-identical artifacts under identical seeds.
void criterion_determinism() {
    auto run_once = [&](std::uint64_t seed) {
        std::ostringstream blob;
        auto g = make_complete_bipartite(40, 40);
        auto h = make_clique(3);
        auto out = embed_balanced(g, h, accept_cfg(seed));
        if (out.certificate)
            blob << certificate_to_json(*out.certificate);
        auto sparse_host = make_erdos_renyi(150, 0.08, seed);
        auto sparse = find_subdivision_sparse(sparse_host, make_cycle(4), accept_cfg(seed));
        if (sparse.certificate)
            blob << certificate_to_json(*sparse.certificate);
        auto rep = lowerbound_experiment(make_clique(6), 40, 2000, seed);
        blob << rep.to_json();
        return blob.str();
    };
    bool same = true;
    for (std::uint64_t seed = 0; seed < 3; ++seed)
        same &= run_once(seed) == run_once(seed);
    report(9, "determinism", same, same ? "byte-identical artifacts" : "divergent outputs");
}

} // namespace

int main() {
    audit::reset();
    criterion_soundness();
    criterion_oracle_agreement();
    criterion_extraction();
    criterion_drc();
    criterion_adjusters();
    criterion_cartesian();
    criterion_lowerbound();
    // Parity audit covers everything the suites above produced.
    criterion_rho_parity();
    criterion_determinism();
    std::cout << (g_failures == 0 ? "ALL CRITERIA PASSED" : "FAILURES: ") << (g_failures == 0 ? "" : std::to_string(g_failures))
              << std::endl;
    return g_failures;
}
