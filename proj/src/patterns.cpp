#include "subforge/patterns.hpp"

#include "subforge/rng.hpp"

#include "json.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <stdexcept>

namespace subforge {

HostGraph gen_sbm(const SbmParams &params) {
    if (params.n != 2 * params.k_blocks * params.t || params.t < 1 || params.k_blocks < 1)
        throw std::invalid_argument("gen_sbm: need n = 2 * k_blocks * t with positive t, k");
    if (params.p < 0.0 || params.p > 1.0 || params.q < 0.0 || params.q > 1.0)
        throw std::invalid_argument("gen_sbm: probabilities must lie in [0,1]");
    Rng rng(params.seed, "sbm");
    int t = params.t;
    std::vector<std::pair<Vertex, Vertex>> edges;
    auto block_first = [&](int i) { return 2 * t * i; };
    // Vertex layout per block i: [first, first+t) is the aligned 0-side,
    // [first+t, first+2t) the 1-side.
    for (int i = 0; i < params.k_blocks; ++i) {
        int f = block_first(i);
        for (int a = 0; a < t; ++a)
            for (int b = 0; b < t; ++b)
                if (rng.bernoulli(params.q))
                    edges.emplace_back(f + a, f + t + b);
    }
    for (int i = 0; i < params.k_blocks; ++i) {
        for (int j = i + 1; j < params.k_blocks; ++j) {
            int fi = block_first(i);
            int fj = block_first(j);
            for (int a = 0; a < 2 * t; ++a)
                for (int b = 0; b < 2 * t; ++b)
                    if (rng.bernoulli(params.p))
                        edges.emplace_back(fi + a, fj + b);
        }
    }
    std::vector<std::int8_t> side(static_cast<std::size_t>(params.n));
    for (int i = 0; i < params.k_blocks; ++i)
        for (int a = 0; a < 2 * t; ++a)
            side[static_cast<std::size_t>(block_first(i) + a)] = a < t ? 0 : 1;
    bool aligned = true;
    for (auto [u, v] : edges)
        if (side[static_cast<std::size_t>(u)] == side[static_cast<std::size_t>(v)])
            aligned = false;
    if (aligned)
        return HostGraph(params.n, std::move(edges), std::move(side));
    return HostGraph(params.n, std::move(edges));
}

HostGraph cartesian_power(const HostGraph &f, int r, long long vertex_cap) {
    if (r < 1)
        throw std::invalid_argument("cartesian_power: r >= 1 required");
    long long nf = f.vertex_count();
    long long total = 1;
    for (int i = 0; i < r; ++i) {
        total *= nf;
        if (total > vertex_cap)
            throw std::invalid_argument("cartesian_power: vertex cap exceeded");
    }
    // Row-major tuple index: coordinate 0 varies slowest.
    std::vector<long long> stride(static_cast<std::size_t>(r), 1);
    for (int i = r - 2; i >= 0; --i)
        stride[static_cast<std::size_t>(i)] = stride[static_cast<std::size_t>(i) + 1] * nf;
    std::vector<std::pair<Vertex, Vertex>> edges;
    for (long long base = 0; base < total; ++base) {
        long long rem = base;
        for (int c = 0; c < r; ++c) {
            long long coord = rem / stride[static_cast<std::size_t>(c)];
            rem %= stride[static_cast<std::size_t>(c)];
            for (Vertex nb : f.neighbors(static_cast<Vertex>(coord))) {
                if (nb > coord) {
                    long long other = base + (nb - coord) * stride[static_cast<std::size_t>(c)];
                    edges.emplace_back(static_cast<Vertex>(base), static_cast<Vertex>(other));
                }
            }
        }
    }
    std::optional<std::vector<std::int8_t>> side;
    if (f.has_bipartition()) {
        std::vector<std::int8_t> s(static_cast<std::size_t>(total));
        for (long long v = 0; v < total; ++v) {
            long long rem = v;
            int parity = 0;
            for (int c = 0; c < r; ++c) {
                long long coord = rem / stride[static_cast<std::size_t>(c)];
                rem %= stride[static_cast<std::size_t>(c)];
                parity ^= f.side(static_cast<Vertex>(coord));
            }
            s[static_cast<std::size_t>(v)] = static_cast<std::int8_t>(parity);
        }
        side = std::move(s);
    }
    return HostGraph(static_cast<int>(total), std::move(edges), std::move(side));
}

DegeneracyResult degeneracy(const HostGraph &g) {
    int n = g.vertex_count();
    DegeneracyResult res;
    std::vector<int> deg(static_cast<std::size_t>(n));
    std::vector<char> gone(static_cast<std::size_t>(n), 0);
    for (int v = 0; v < n; ++v)
        deg[static_cast<std::size_t>(v)] = g.degree(v);
    for (int step = 0; step < n; ++step) {
        int best = -1;
        for (int v = 0; v < n; ++v)
            if (!gone[static_cast<std::size_t>(v)] &&
                (best == -1 || deg[static_cast<std::size_t>(v)] < deg[static_cast<std::size_t>(best)]))
                best = v;
        res.degeneracy = std::max(res.degeneracy, deg[static_cast<std::size_t>(best)]);
        res.order.push_back(best);
        gone[static_cast<std::size_t>(best)] = 1;
        for (Vertex u : g.neighbors(best))
            if (!gone[static_cast<std::size_t>(u)])
                --deg[static_cast<std::size_t>(u)];
    }
    // Certify the order by re-scan.
    std::vector<int> pos(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        pos[static_cast<std::size_t>(res.order[static_cast<std::size_t>(i)])] = i;
    for (int v = 0; v < n; ++v) {
        int later = 0;
        for (Vertex u : g.neighbors(v))
            if (pos[static_cast<std::size_t>(u)] > pos[static_cast<std::size_t>(v)])
                ++later;
        if (later > res.degeneracy)
            throw std::logic_error("degeneracy: order certification failed");
    }
    return res;
}

BiseparationVerdict verify_biseparable(const HostGraph &h, const std::vector<HEdgePair> &e1,
                                       long long s_cap, int k_cap) {
    BiseparationVerdict out;
    std::set<HEdgePair> removed;
    for (auto [u, v] : e1) {
        if (u > v)
            std::swap(u, v);
        if (u < 0 || v >= h.vertex_count() || !h.adjacent(u, v)) {
            out.violation = "E1 contains a non-edge";
            return out;
        }
        removed.insert({u, v});
    }
    if (static_cast<long long>(removed.size()) > s_cap) {
        out.violation = "|E1| exceeds the size cap";
        return out;
    }
    std::vector<std::pair<Vertex, Vertex>> rest;
    for (auto e : h.edges())
        if (!removed.count(e))
            rest.push_back(e);
    HostGraph hr(h.vertex_count(), rest);
    if (!hr.two_coloring()) {
        out.violation = "H minus E1 is not bipartite";
        return out;
    }
    for (const auto &comp : hr.components()) {
        if (static_cast<int>(comp.size()) > k_cap) {
            out.violation = "component of size " + std::to_string(comp.size()) + " exceeds cap " +
                            std::to_string(k_cap);
            return out;
        }
    }
    out.accepted = true;
    return out;
}

namespace {

/// Exact max cut by enumeration; returns the set of non-crossing edges of a
/// best cut (the edges to delete for bipartiteness). Component must be small.
std::vector<HEdgePair> odd_cut_edges_exact(const HostGraph &h, const std::vector<Vertex> &comp) {
    int c = static_cast<int>(comp.size());
    if (c > 20)
        throw std::invalid_argument("odd_cut_edges_exact: component too large");
    std::vector<int> local(static_cast<std::size_t>(h.vertex_count()), -1);
    for (int i = 0; i < c; ++i)
        local[static_cast<std::size_t>(comp[static_cast<std::size_t>(i)])] = i;
    std::vector<HEdgePair> comp_edges;
    for (Vertex u : comp)
        for (Vertex v : h.neighbors(u))
            if (u < v && local[static_cast<std::size_t>(v)] >= 0)
                comp_edges.emplace_back(u, v);
    long long best_cut = -1;
    std::uint32_t best_bits = 0;
    for (std::uint32_t bits = 0; bits < (1U << (c - 1)); ++bits) { // vertex 0 fixed on side 0
        long long cut = 0;
        for (auto [u, v] : comp_edges) {
            int lu = local[static_cast<std::size_t>(u)];
            int lv = local[static_cast<std::size_t>(v)];
            int su = lu == 0 ? 0 : (bits >> (lu - 1)) & 1;
            int sv = lv == 0 ? 0 : (bits >> (lv - 1)) & 1;
            if (su != sv)
                ++cut;
        }
        if (cut > best_cut) {
            best_cut = cut;
            best_bits = bits;
        }
    }
    std::vector<HEdgePair> stay;
    for (auto [u, v] : comp_edges) {
        int lu = local[static_cast<std::size_t>(u)];
        int lv = local[static_cast<std::size_t>(v)];
        int su = lu == 0 ? 0 : (best_bits >> (lu - 1)) & 1;
        int sv = lv == 0 ? 0 : (best_bits >> (lv - 1)) & 1;
        if (su == sv)
            stay.emplace_back(u, v);
    }
    return stay;
}

/// Minimum balanced separator by subset enumeration (component <= 16).
std::optional<std::vector<Vertex>> min_balanced_separator_exact(const HostGraph &h,
                                                                const std::vector<Vertex> &comp) {
    int c = static_cast<int>(comp.size());
    if (c > 16)
        return std::nullopt;
    std::vector<int> local(static_cast<std::size_t>(h.vertex_count()), -1);
    for (int i = 0; i < c; ++i)
        local[static_cast<std::size_t>(comp[static_cast<std::size_t>(i)])] = i;
    int limit = 2 * c / 3;
    for (int size = 1; size < c; ++size) {
        for (std::uint32_t bits = 0; bits < (1U << c); ++bits) {
            if (__builtin_popcount(bits) != size)
                continue;
            // Components of comp minus separator must all be <= 2c/3.
            std::vector<char> sep(static_cast<std::size_t>(c), 0);
            for (int i = 0; i < c; ++i)
                if ((bits >> i) & 1)
                    sep[static_cast<std::size_t>(i)] = 1;
            std::vector<char> seen(static_cast<std::size_t>(c), 0);
            bool ok = true;
            for (int i = 0; i < c && ok; ++i) {
                if (sep[static_cast<std::size_t>(i)] || seen[static_cast<std::size_t>(i)])
                    continue;
                int sz = 0;
                std::queue<int> q;
                q.push(i);
                seen[static_cast<std::size_t>(i)] = 1;
                while (!q.empty()) {
                    int a = q.front();
                    q.pop();
                    ++sz;
                    for (Vertex nb : h.neighbors(comp[static_cast<std::size_t>(a)])) {
                        int lb = local[static_cast<std::size_t>(nb)];
                        if (lb < 0 || sep[static_cast<std::size_t>(lb)] ||
                            seen[static_cast<std::size_t>(lb)])
                            continue;
                        seen[static_cast<std::size_t>(lb)] = 1;
                        q.push(lb);
                    }
                }
                if (sz > limit)
                    ok = false;
            }
            if (ok) {
                std::vector<Vertex> out;
                for (int i = 0; i < c; ++i)
                    if ((bits >> i) & 1)
                        out.push_back(comp[static_cast<std::size_t>(i)]);
                return out;
            }
        }
    }
    return std::nullopt;
}

/// Smallest edge set (up to 4 edges) whose removal leaves all components of
/// the given component at size <= k_target. Exact enumeration.
std::optional<std::vector<HEdgePair>> min_edge_cut_exact(const HostGraph &h,
                                                         const std::vector<Vertex> &comp,
                                                         const std::vector<HEdgePair> &comp_edges,
                                                         int k_target) {
    int ec = static_cast<int>(comp_edges.size());
    if (ec > 28)
        return std::nullopt;
    auto pieces_ok = [&](const std::vector<char> &cut) {
        std::set<Vertex> in_comp(comp.begin(), comp.end());
        std::map<Vertex, std::vector<Vertex>> adj;
        for (int i = 0; i < ec; ++i) {
            if (cut[static_cast<std::size_t>(i)])
                continue;
            adj[comp_edges[static_cast<std::size_t>(i)].first].push_back(
                comp_edges[static_cast<std::size_t>(i)].second);
            adj[comp_edges[static_cast<std::size_t>(i)].second].push_back(
                comp_edges[static_cast<std::size_t>(i)].first);
        }
        std::set<Vertex> seen;
        for (Vertex s : comp) {
            if (seen.count(s))
                continue;
            int size = 0;
            std::queue<Vertex> q;
            q.push(s);
            seen.insert(s);
            while (!q.empty()) {
                Vertex u = q.front();
                q.pop();
                ++size;
                for (Vertex v : adj[u]) {
                    if (!seen.count(v)) {
                        seen.insert(v);
                        q.push(v);
                    }
                }
            }
            if (size > k_target)
                return false;
        }
        (void)h;
        return true;
    };
    for (int size = 1; size <= std::min(4, ec); ++size) {
        std::vector<int> pick(static_cast<std::size_t>(size));
        std::function<std::optional<std::vector<HEdgePair>>(int, int)> choose =
            [&](int from, int slot) -> std::optional<std::vector<HEdgePair>> {
            if (slot == size) {
                std::vector<char> cut(static_cast<std::size_t>(ec), 0);
                for (int i : pick)
                    cut[static_cast<std::size_t>(i)] = 1;
                if (pieces_ok(cut)) {
                    std::vector<HEdgePair> out;
                    for (int i : pick)
                        out.push_back(comp_edges[static_cast<std::size_t>(i)]);
                    return out;
                }
                return std::nullopt;
            }
            for (int i = from; i < ec; ++i) {
                pick[static_cast<std::size_t>(slot)] = i;
                if (auto got = choose(i + 1, slot + 1))
                    return got;
            }
            return std::nullopt;
        };
        if (auto got = choose(0, 0))
            return got;
    }
    return std::nullopt;
}

/// BFS-layer heuristic separator: middle distance layer from a peripheral
/// vertex; falls back to a greedy half split.
std::vector<Vertex> separator_heuristic(const HostGraph &h, const std::vector<Vertex> &comp) {
    std::vector<int> local(static_cast<std::size_t>(h.vertex_count()), -1);
    int c = static_cast<int>(comp.size());
    for (int i = 0; i < c; ++i)
        local[static_cast<std::size_t>(comp[static_cast<std::size_t>(i)])] = i;
    auto bfs_far = [&](Vertex s) {
        std::vector<int> dist(static_cast<std::size_t>(c), -1);
        std::queue<Vertex> q;
        dist[static_cast<std::size_t>(local[static_cast<std::size_t>(s)])] = 0;
        q.push(s);
        Vertex far = s;
        while (!q.empty()) {
            Vertex u = q.front();
            q.pop();
            for (Vertex v : h.neighbors(u)) {
                int lv = local[static_cast<std::size_t>(v)];
                if (lv < 0 || dist[static_cast<std::size_t>(lv)] != -1)
                    continue;
                dist[static_cast<std::size_t>(lv)] =
                    dist[static_cast<std::size_t>(local[static_cast<std::size_t>(u)])] + 1;
                far = v;
                q.push(v);
            }
        }
        return std::make_pair(far, dist);
    };
    auto [far, d0] = bfs_far(comp[0]);
    auto [far2, dist] = bfs_far(far);
    (void)far2;
    int maxd = 0;
    for (int i = 0; i < c; ++i)
        maxd = std::max(maxd, dist[static_cast<std::size_t>(i)]);
    if (maxd >= 2) {
        int mid = maxd / 2;
        std::vector<Vertex> layer;
        for (int i = 0; i < c; ++i)
            if (dist[static_cast<std::size_t>(i)] == mid)
                layer.push_back(comp[static_cast<std::size_t>(i)]);
        if (!layer.empty() && static_cast<int>(layer.size()) < c)
            return layer;
    }
    // Dense blob: greedily peel highest-degree vertices into the separator
    // until the remainder splits or shrinks below 2/3.
    std::vector<Vertex> sep;
    std::set<Vertex> left(comp.begin(), comp.end());
    while (static_cast<int>(left.size()) > 2 * c / 3) {
        Vertex best = -1;
        int bestd = -1;
        for (Vertex v : left) {
            int d = 0;
            for (Vertex u : h.neighbors(v))
                if (left.count(u))
                    ++d;
            if (d > bestd) {
                bestd = d;
                best = v;
            }
        }
        sep.push_back(best);
        left.erase(best);
    }
    std::sort(sep.begin(), sep.end());
    return sep;
}

} // namespace

std::optional<Biseparation> biseparate(const HostGraph &h, int k_target, SeparatorMode mode) {
    if (k_target < 1)
        throw std::invalid_argument("biseparate: k_target >= 1 required");
    std::set<HEdgePair> e1;
    std::queue<std::vector<Vertex>> work;
    for (auto &comp : h.components())
        work.push(comp);
    int rounds = 0;
    while (!work.empty()) {
        if (++rounds > 4 * h.vertex_count() + 16)
            return std::nullopt;
        std::vector<Vertex> comp = work.front();
        work.pop();
        int c = static_cast<int>(comp.size());
        if (c == 1)
            continue;
        // Induced edges of this component, minus anything already in E1.
        std::set<Vertex> in_comp(comp.begin(), comp.end());
        std::vector<HEdgePair> comp_edges;
        for (Vertex u : comp)
            for (Vertex v : h.neighbors(u))
                if (u < v && in_comp.count(v) && !e1.count({u, v}))
                    comp_edges.emplace_back(u, v);
        if (c <= k_target) {
            // Size is fine; repair bipartiteness if needed.
            HostGraph sub(h.vertex_count(), comp_edges);
            if (sub.two_coloring())
                continue;
            if (c <= 20) {
                for (auto e : odd_cut_edges_exact(sub, comp))
                    e1.insert(e);
                continue;
            }
            // Too large for exact repair: split further below.
        }
        bool use_exact = mode == SeparatorMode::exact ||
                         (mode == SeparatorMode::auto_select && c <= 16);
        if (use_exact && c <= 16) {
            // Prefer the cheapest split: a minimum edge cut reaching the
            // size bound directly.
            if (auto cut = min_edge_cut_exact(h, comp, comp_edges, k_target)) {
                std::set<HEdgePair> cut_set(cut->begin(), cut->end());
                for (auto e : *cut)
                    e1.insert(e);
                std::vector<HEdgePair> rest_edges;
                for (auto e : comp_edges)
                    if (!cut_set.count(e))
                        rest_edges.push_back(e);
                HostGraph rest(h.vertex_count(), rest_edges);
                std::set<Vertex> done;
                for (Vertex s : comp) {
                    if (done.count(s))
                        continue;
                    std::vector<Vertex> piece;
                    std::queue<Vertex> q;
                    q.push(s);
                    done.insert(s);
                    while (!q.empty()) {
                        Vertex u = q.front();
                        q.pop();
                        piece.push_back(u);
                        for (Vertex v : rest.neighbors(u)) {
                            if (!done.count(v)) {
                                done.insert(v);
                                q.push(v);
                            }
                        }
                    }
                    std::sort(piece.begin(), piece.end());
                    if (piece.size() > 1)
                        work.push(piece);
                }
                continue;
            }
        }
        std::vector<Vertex> sep;
        if (use_exact) {
            auto found = min_balanced_separator_exact(HostGraph(h.vertex_count(), comp_edges), comp);
            if (found)
                sep = *found;
        }
        if (sep.empty())
            sep = separator_heuristic(HostGraph(h.vertex_count(), comp_edges), comp);
        if (sep.empty() || static_cast<int>(sep.size()) >= c)
            return std::nullopt;
        std::set<Vertex> sep_set(sep.begin(), sep.end());
        for (auto [u, v] : comp_edges)
            if (sep_set.count(u) || sep_set.count(v))
                e1.insert({u, v});
        // Recurse on the components of comp - sep.
        std::vector<HEdgePair> rest_edges;
        for (auto [u, v] : comp_edges)
            if (!sep_set.count(u) && !sep_set.count(v))
                rest_edges.emplace_back(u, v);
        HostGraph rest(h.vertex_count(), rest_edges);
        std::vector<char> seen(static_cast<std::size_t>(h.vertex_count()), 0);
        for (Vertex s : comp) {
            if (sep_set.count(s) || seen[static_cast<std::size_t>(s)])
                continue;
            std::vector<Vertex> piece;
            std::queue<Vertex> q;
            q.push(s);
            seen[static_cast<std::size_t>(s)] = 1;
            while (!q.empty()) {
                Vertex u = q.front();
                q.pop();
                piece.push_back(u);
                for (Vertex v : rest.neighbors(u)) {
                    if (!seen[static_cast<std::size_t>(v)]) {
                        seen[static_cast<std::size_t>(v)] = 1;
                        q.push(v);
                    }
                }
            }
            std::sort(piece.begin(), piece.end());
            if (static_cast<int>(piece.size()) > 1)
                work.push(piece);
        }
    }
    Biseparation out;
    out.e1.assign(e1.begin(), e1.end());
    out.component_cap = k_target;
    auto verdict = verify_biseparable(h, out.e1, static_cast<long long>(out.e1.size()), k_target);
    if (!verdict.accepted)
        return std::nullopt;
    // Record the components of H minus E1.
    std::vector<std::pair<Vertex, Vertex>> rest;
    for (auto e : h.edges())
        if (!e1.count(e))
            rest.push_back(e);
    out.components = HostGraph(h.vertex_count(), rest).components();
    return out;
}

Biseparation lift_biseparation(const HostGraph &f, const Biseparation &b, int r) {
    HostGraph h = cartesian_power(f, r);
    std::set<HEdgePair> factor_e1(b.e1.begin(), b.e1.end());
    long long nf = f.vertex_count();
    std::vector<long long> stride(static_cast<std::size_t>(r), 1);
    for (int i = r - 2; i >= 0; --i)
        stride[static_cast<std::size_t>(i)] = stride[static_cast<std::size_t>(i) + 1] * nf;
    Biseparation out;
    for (auto [u, v] : h.edges()) {
        long long diff = v - u;
        // Identify the differing coordinate and the factor edge.
        for (int c = 0; c < r; ++c) {
            long long sc = stride[static_cast<std::size_t>(c)];
            if (diff % sc != 0)
                continue;
            long long delta = diff / sc;
            long long cu = (u / sc) % nf;
            long long cv = cu + delta;
            if (cv < 0 || cv >= nf)
                continue;
            // Same everywhere else iff u + delta*sc == v, which holds; check
            // the coordinate change is within this coordinate's digit.
            if ((u / (sc * nf)) != (v / (sc * nf)))
                continue;
            HEdgePair fe{static_cast<Vertex>(std::min(cu, cv)), static_cast<Vertex>(std::max(cu, cv))};
            if (f.adjacent(fe.first, fe.second)) {
                if (factor_e1.count(fe))
                    out.e1.emplace_back(u, v);
                break;
            }
        }
    }
    std::sort(out.e1.begin(), out.e1.end());
    out.e1.erase(std::unique(out.e1.begin(), out.e1.end()), out.e1.end());
    long long cap = 1;
    for (int i = 0; i < r; ++i)
        cap *= b.component_cap;
    out.component_cap = static_cast<int>(std::min<long long>(cap, 1'000'000'000));
    std::set<HEdgePair> e2(out.e1.begin(), out.e1.end());
    std::vector<std::pair<Vertex, Vertex>> rest;
    for (auto e : h.edges())
        if (!e2.count(e))
            rest.push_back(e);
    out.components = HostGraph(h.vertex_count(), rest).components();
    return out;
}

std::string biseparation_to_json(const Biseparation &b) {
    nlohmann::ordered_json j;
    auto &e1 = j["e1"] = nlohmann::ordered_json::array();
    for (auto [u, v] : b.e1)
        e1.push_back({u, v});
    j["component_cap"] = b.component_cap;
    auto &comps = j["components"] = nlohmann::ordered_json::array();
    for (const auto &c : b.components)
        comps.push_back(c);
    return j.dump(2) + "\n";
}

Biseparation biseparation_from_json(const std::string &text) {
    auto j = nlohmann::json::parse(text);
    Biseparation b;
    for (const auto &pair : j.at("e1")) {
        if (!pair.is_array() || pair.size() != 2)
            throw std::invalid_argument("biseparation: malformed e1 entry");
        b.e1.emplace_back(pair[0].get<Vertex>(), pair[1].get<Vertex>());
    }
    b.component_cap = j.at("component_cap").get<int>();
    for (const auto &c : j.at("components"))
        b.components.push_back(c.get<std::vector<Vertex>>());
    return b;
}

HostGraph make_clique(int k) {
    std::vector<std::pair<Vertex, Vertex>> edges;
    for (int u = 0; u < k; ++u)
        for (int v = u + 1; v < k; ++v)
            edges.emplace_back(u, v);
    return HostGraph(k, std::move(edges));
}

HostGraph make_complete_bipartite(int a, int b) {
    std::vector<std::pair<Vertex, Vertex>> edges;
    for (int u = 0; u < a; ++u)
        for (int v = 0; v < b; ++v)
            edges.emplace_back(u, a + v);
    std::vector<std::int8_t> side(static_cast<std::size_t>(a + b), 0);
    for (int v = a; v < a + b; ++v)
        side[static_cast<std::size_t>(v)] = 1;
    return HostGraph(a + b, std::move(edges), std::move(side));
}

HostGraph make_random_bipartite(int a, int b, double p, std::uint64_t seed) {
    Rng rng(seed, "random_bipartite");
    std::vector<std::pair<Vertex, Vertex>> edges;
    for (int u = 0; u < a; ++u)
        for (int v = 0; v < b; ++v)
            if (rng.bernoulli(p))
                edges.emplace_back(u, a + v);
    std::vector<std::int8_t> side(static_cast<std::size_t>(a + b), 0);
    for (int v = a; v < a + b; ++v)
        side[static_cast<std::size_t>(v)] = 1;
    return HostGraph(a + b, std::move(edges), std::move(side));
}

HostGraph make_grid(int a, int b) {
    std::vector<std::pair<Vertex, Vertex>> edges;
    auto id = [&](int i, int j) { return i * b + j; };
    for (int i = 0; i < a; ++i) {
        for (int j = 0; j < b; ++j) {
            if (j + 1 < b)
                edges.emplace_back(id(i, j), id(i, j + 1));
            if (i + 1 < a)
                edges.emplace_back(id(i, j), id(i + 1, j));
        }
    }
    std::vector<std::int8_t> side(static_cast<std::size_t>(a) * b);
    for (int i = 0; i < a; ++i)
        for (int j = 0; j < b; ++j)
            side[static_cast<std::size_t>(id(i, j))] = static_cast<std::int8_t>((i + j) % 2);
    return HostGraph(a * b, std::move(edges), std::move(side));
}

HostGraph make_hypercube(int d) {
    int n = 1 << d;
    std::vector<std::pair<Vertex, Vertex>> edges;
    for (int v = 0; v < n; ++v)
        for (int bit = 0; bit < d; ++bit)
            if (!(v & (1 << bit)))
                edges.emplace_back(v, v | (1 << bit));
    std::vector<std::int8_t> side(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v)
        side[static_cast<std::size_t>(v)] = static_cast<std::int8_t>(__builtin_popcount(v) % 2);
    return HostGraph(n, std::move(edges), std::move(side));
}

HostGraph make_cycle(int n) {
    if (n < 3)
        throw std::invalid_argument("make_cycle: n >= 3");
    std::vector<std::pair<Vertex, Vertex>> edges;
    for (int v = 0; v + 1 < n; ++v)
        edges.emplace_back(v, v + 1);
    edges.emplace_back(0, n - 1);
    if (n % 2 == 0) {
        std::vector<std::int8_t> side(static_cast<std::size_t>(n));
        for (int v = 0; v < n; ++v)
            side[static_cast<std::size_t>(v)] = static_cast<std::int8_t>(v % 2);
        return HostGraph(n, std::move(edges), std::move(side));
    }
    return HostGraph(n, std::move(edges));
}

HostGraph make_path(int n) {
    std::vector<std::pair<Vertex, Vertex>> edges;
    for (int v = 0; v + 1 < n; ++v)
        edges.emplace_back(v, v + 1);
    std::vector<std::int8_t> side(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v)
        side[static_cast<std::size_t>(v)] = static_cast<std::int8_t>(v % 2);
    return HostGraph(n, std::move(edges), std::move(side));
}

HostGraph make_erdos_renyi(int n, double p, std::uint64_t seed) {
    Rng rng(seed, "erdos_renyi");
    std::vector<std::pair<Vertex, Vertex>> edges;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (rng.bernoulli(p))
                edges.emplace_back(u, v);
    return HostGraph(n, std::move(edges));
}

HostGraph make_star(int leaves) {
    std::vector<std::pair<Vertex, Vertex>> edges;
    for (int v = 1; v <= leaves; ++v)
        edges.emplace_back(0, v);
    std::vector<std::int8_t> side(static_cast<std::size_t>(leaves) + 1, 1);
    side[0] = 0;
    return HostGraph(leaves + 1, std::move(edges), std::move(side));
}

HostGraph gen_standard(const StandardFamily &family) {
    switch (family.kind) {
    case StandardFamily::clique: return make_clique(family.a);
    case StandardFamily::complete_bipartite: return make_complete_bipartite(family.a, family.b);
    case StandardFamily::random_bipartite:
        return make_random_bipartite(family.a, family.b, family.p, family.seed);
    case StandardFamily::grid: return make_grid(family.a, family.b);
    case StandardFamily::hypercube: return make_hypercube(family.a);
    case StandardFamily::cycle: return make_cycle(family.a);
    case StandardFamily::path: return make_path(family.a);
    case StandardFamily::erdos_renyi: return make_erdos_renyi(family.a, family.p, family.seed);
    }
    throw std::invalid_argument("gen_standard: unknown family");
}

} // namespace subforge
