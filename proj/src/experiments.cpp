#include "subforge/experiments.hpp"

#include "subforge/certify.hpp"
#include "subforge/embedder.hpp"
#include "subforge/patterns.hpp"
#include "subforge/rng.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace subforge {

std::string LowerBoundReport::to_json() const {
    nlohmann::ordered_json j;
    j["n1"] = n1;
    j["samples"] = samples;
    j["exhaustive"] = exhaustive;
    j["min_missing"] = min_missing;
    j["mean_missing"] = mean_missing;
    j["frac_below_quarter"] = frac_below_quarter;
    j["edge_count"] = edge_count;
    j["edge_bound_held"] = edge_bound_held;
    j["mean_expectation_bound"] = mean_expectation_bound;
    return j.dump(2) + "\n";
}

std::string LowerBoundReport::csv_header() {
    return "n1,samples,exhaustive,min_missing,mean_missing,frac_below_quarter,edge_count,"
           "edge_bound_held,mean_expectation_bound";
}

std::string LowerBoundReport::to_csv_row() const {
    std::ostringstream os;
    os << n1 << ',' << samples << ',' << (exhaustive ? 1 : 0) << ',' << min_missing << ','
       << mean_missing << ',' << frac_below_quarter << ',' << edge_count << ','
       << (edge_bound_held ? 1 : 0) << ',' << mean_expectation_bound;
    return os.str();
}

LowerBoundReport lowerbound_experiment(const PatternGraph &h, int n1, long long samples,
                                       std::uint64_t seed) {
    if (n1 < 2)
        throw std::invalid_argument("lowerbound_experiment: n1 >= 2 required");
    if (h.vertex_count() == 0 || h.edge_count() == 0)
        throw std::invalid_argument("lowerbound_experiment: pattern must have edges");
    int hn = h.vertex_count();
    int n = 2 * n1;
    if (hn > n)
        throw std::invalid_argument("lowerbound_experiment: pattern larger than the host");

    HostGraph g = make_random_bipartite(n1, n1, 0.5, seed);
    LowerBoundReport rep;
    rep.n1 = n1;
    rep.edge_count = g.edge_count();
    rep.edge_bound_held = 4 * g.edge_count() >= static_cast<long long>(n1) * n1;
    if (samples <= 0)
        return rep;

    auto h_edges = h.edges();
    long long q = h.edge_count();
    auto eval = [&](const std::vector<Vertex> &image) {
        long long missing = 0, same_side = 0;
        for (auto [x, y] : h_edges) {
            Vertex gu = image[static_cast<std::size_t>(x)];
            Vertex gv = image[static_cast<std::size_t>(y)];
            if (g.side(gu) == g.side(gv)) {
                ++same_side;
                ++missing;
            } else if (!g.adjacent(gu, gv)) {
                ++missing;
            }
        }
        return std::make_pair(missing, same_side);
    };

    long long count = 0, total_missing = 0, below_quarter = 0;
    long long min_missing = -1;
    double total_bound = 0.0;

    // Enumerate every injection when that is cheaper than sampling.
    double log_total = 0.0;
    for (int i = 0; i < hn; ++i)
        log_total += std::log2(static_cast<double>(n - i));
    bool enumerate = log_total <= std::log2(static_cast<double>(samples));
    if (enumerate) {
        std::vector<Vertex> image(static_cast<std::size_t>(hn), -1);
        std::vector<char> taken(static_cast<std::size_t>(n), 0);
        std::function<void(int)> go = [&](int x) {
            if (x == hn) {
                auto [missing, same_side] = eval(image);
                ++count;
                total_missing += missing;
                min_missing = min_missing < 0 ? missing : std::min(min_missing, missing);
                if (4 * missing <= q)
                    ++below_quarter;
                total_bound += static_cast<double>(same_side) +
                               static_cast<double>(q - same_side) / 2.0;
                return;
            }
            for (Vertex v = 0; v < n; ++v) {
                if (taken[static_cast<std::size_t>(v)])
                    continue;
                taken[static_cast<std::size_t>(v)] = 1;
                image[static_cast<std::size_t>(x)] = v;
                go(x + 1);
                taken[static_cast<std::size_t>(v)] = 0;
            }
        };
        go(0);
        rep.exhaustive = true;
    } else {
        Rng rng(seed, "lowerbound_injections");
        for (long long s = 0; s < samples; ++s) {
            std::vector<int> ids = rng.sample_without_replacement(n, hn);
            rng.shuffle(ids);
            std::vector<Vertex> image(ids.begin(), ids.end());
            auto [missing, same_side] = eval(image);
            ++count;
            total_missing += missing;
            min_missing = min_missing < 0 ? missing : std::min(min_missing, missing);
            if (4 * missing <= q)
                ++below_quarter;
            total_bound +=
                static_cast<double>(same_side) + static_cast<double>(q - same_side) / 2.0;
        }
    }
    rep.samples = count;
    rep.min_missing = min_missing;
    rep.mean_missing = count ? static_cast<double>(total_missing) / count : 0.0;
    rep.frac_below_quarter = count ? static_cast<double>(below_quarter) / count : 0.0;
    rep.mean_expectation_bound = count ? total_bound / count : 0.0;
    return rep;
}

SbmDemoReport sbm_pipeline_demo(const SbmDemoParams &params, const RunConfig &cfg) {
    SbmDemoReport rep;
    for (int s = 0; s < params.seeds; ++s) {
        ++rep.trials;
        SbmParams sp;
        sp.t = params.t;
        sp.k_blocks = params.k_blocks;
        sp.n = 2 * params.t * params.k_blocks;
        sp.p = params.p;
        sp.q = params.q;
        sp.seed = cfg.seed + static_cast<std::uint64_t>(s);
        HostGraph pattern_raw = gen_sbm(sp);
        // Strip isolated vertices; the embedding routes assume none.
        std::vector<Vertex> keep;
        for (Vertex v = 0; v < pattern_raw.vertex_count(); ++v)
            if (pattern_raw.degree(v) > 0)
                keep.push_back(v);
        if (keep.empty()) {
            rep.per_seed.push_back("seed " + std::to_string(s) + ": empty pattern, trivial");
            ++rep.successes;
            continue;
        }
        HostGraph pattern = pattern_raw.induced(VertexSet(keep));
        PatternGraph h(pattern.vertex_count(), pattern.edges());
        if (h.vertex_count() > params.host_n) {
            rep.per_seed.push_back("seed " + std::to_string(s) +
                                   ": host smaller than the pattern");
            continue;
        }
        RunConfig run = cfg;
        run.seed = cfg.seed + 1000 + static_cast<std::uint64_t>(s);
        EmbeddingOutcome outcome;
        HostGraph host = make_erdos_renyi(params.host_n, params.host_p, run.seed);
        if (params.sparse_host)
            outcome = find_subdivision_sparse(host, h, run);
        else
            outcome = embed_dense_short(host, h, run);
        if (outcome.certificate) {
            auto verdict = verify_subdivision(host, h, *outcome.certificate);
            if (verdict.accepted) {
                ++rep.successes;
                rep.per_seed.push_back("seed " + std::to_string(s) + ": verified");
            } else {
                rep.per_seed.push_back("seed " + std::to_string(s) +
                                       ": REJECTED: " + verdict.violation);
            }
        } else {
            rep.per_seed.push_back("seed " + std::to_string(s) + ": miss: " +
                                   outcome.failure_stage);
        }
    }
    return rep;
}

} // namespace subforge
