#include "subforge/routing.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace subforge {

std::optional<Path> bfs_shortest_path(const HostGraph &g, const VertexSet &sources,
                                      const VertexSet &targets, const VertexSet &avoid,
                                      int maxlen) {
    int n = g.vertex_count();
    std::vector<int> dist(static_cast<std::size_t>(n), -1);
    std::vector<Vertex> parent(static_cast<std::size_t>(n), -1);
    std::vector<char> is_target(static_cast<std::size_t>(n), 0);
    for (Vertex t : targets)
        is_target[static_cast<std::size_t>(t)] = 1;
    std::queue<Vertex> q;
    for (Vertex s : sources) {
        if (avoid.contains(s))
            continue;
        if (is_target[static_cast<std::size_t>(s)])
            return Path({s});
        dist[static_cast<std::size_t>(s)] = 0;
        q.push(s);
    }
    while (!q.empty()) {
        Vertex u = q.front();
        q.pop();
        int du = dist[static_cast<std::size_t>(u)];
        if (du >= maxlen)
            continue;
        for (Vertex v : g.neighbors(u)) {
            if (dist[static_cast<std::size_t>(v)] != -1 || avoid.contains(v))
                continue;
            dist[static_cast<std::size_t>(v)] = du + 1;
            parent[static_cast<std::size_t>(v)] = u;
            if (is_target[static_cast<std::size_t>(v)]) {
                std::vector<Vertex> rev;
                for (Vertex a = v; a != -1; a = parent[static_cast<std::size_t>(a)])
                    rev.push_back(a);
                std::reverse(rev.begin(), rev.end());
                return Path(std::move(rev));
            }
            q.push(v);
        }
    }
    return std::nullopt;
}

ConnectResult connect_avoiding(const HostGraph &g, const VertexSet &x1, const VertexSet &x2,
                               const VertexSet &w, int maxlen,
                               const std::optional<ExpanderParams> &p) {
    if (!x1.disjoint_from(x2) || !x1.disjoint_from(w) || !x2.disjoint_from(w))
        throw std::invalid_argument("connect_avoiding: X1, X2, W must be pairwise disjoint");
    ConnectResult out;
    if (p) {
        double x = std::min(x1.size(), x2.size());
        double r = rho(x, *p);
        out.hypotheses_hold = x >= p->k && static_cast<double>(w.size()) <= r * x / 4.0;
        double n = g.vertex_count();
        double lg = log_base(p->base, 15.0 * n / p->k);
        out.theory_maxlen = (2.0 / p->eps1) * lg * lg * lg;
    }
    out.path = bfs_shortest_path(g, x1, x2, w, maxlen);
    if (out.path)
        audit::note_path(g, *out.path);
    else if (out.hypotheses_hold)
        out.theory_violation = true;
    return out;
}

CspResult consecutive_shortest_paths(const HostGraph &g, Vertex v, const VertexSet &domain,
                                     const std::vector<Vertex> &targets) {
    if (!domain.contains(v))
        throw std::invalid_argument("consecutive_shortest_paths: v not in domain");
    CspResult out;
    VertexSet outside = VertexSet::full(g.vertex_count()).minus(domain);
    VertexSet used; // vertices of earlier paths, v excluded
    for (Vertex t : targets) {
        if (!domain.contains(t))
            throw std::invalid_argument("consecutive_shortest_paths: target outside domain");
        CspTargetStatus st;
        st.target = t;
        VertexSet blocked = outside.unite(used);
        if (blocked.contains(t) || t == v) {
            if (t == v) {
                st.reached = true;
                st.residual_checked_length = 0;
                out.system.add(Path({v}));
            }
            out.statuses.push_back(st);
            continue;
        }
        auto path = bfs_shortest_path(g, VertexSet::single(v), VertexSet::single(t), blocked,
                                      g.vertex_count());
        if (path) {
            st.reached = true;
            st.residual_checked_length = path->length();
            audit::note_path(g, *path);
            for (Vertex u : path->vertices())
                if (u != v)
                    used.insert(u);
            out.system.add(std::move(*path));
        }
        out.statuses.push_back(st);
    }
    return out;
}

RobustBallReport robust_ball_check(const HostGraph &g, Vertex v, const PathSystem &system, int m,
                                   long long bound) {
    VertexSet removed = system.all_vertices().minus(VertexSet::single(v));
    if (removed.contains(v))
        throw std::invalid_argument("robust_ball_check: v was removed");
    std::vector<int> dist(static_cast<std::size_t>(g.vertex_count()), -1);
    std::queue<Vertex> q;
    dist[static_cast<std::size_t>(v)] = 0;
    q.push(v);
    long long count = 1;
    while (!q.empty()) {
        Vertex u = q.front();
        q.pop();
        if (dist[static_cast<std::size_t>(u)] >= m)
            continue;
        for (Vertex w : g.neighbors(u)) {
            if (dist[static_cast<std::size_t>(w)] != -1 || removed.contains(w))
                continue;
            dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(u)] + 1;
            ++count;
            q.push(w);
        }
    }
    RobustBallReport rep;
    rep.ball_size = count;
    rep.bound = bound;
    rep.pass = count >= bound;
    return rep;
}

namespace {

struct ExactSearch {
    const HostGraph &g;
    Vertex target;
    int ell;
    long long budget;
    bool parity_prune; // valid only when a two-coloring exists
    long long expansions = 0;
    bool truncated = false;
    std::vector<int> dist_to_target;
    std::vector<char> blocked;
    std::vector<Vertex> stack;

    bool dfs() {
        ++expansions;
        if (expansions > budget) {
            truncated = true;
            return false;
        }
        Vertex at = stack.back();
        int remaining = ell - (static_cast<int>(stack.size()) - 1);
        if (at == target)
            return remaining == 0;
        if (remaining <= 0)
            return false;
        int dt = dist_to_target[static_cast<std::size_t>(at)];
        if (dt < 0 || dt > remaining)
            return false;
        if (parity_prune && (remaining - dt) % 2 != 0)
            return false; // in a bipartite host a detour cannot change parity
        for (Vertex nxt : g.neighbors(at)) {
            if (blocked[static_cast<std::size_t>(nxt)])
                continue;
            if (nxt == target && remaining != 1)
                continue;
            blocked[static_cast<std::size_t>(nxt)] = 1;
            stack.push_back(nxt);
            if (dfs())
                return true;
            stack.pop_back();
            blocked[static_cast<std::size_t>(nxt)] = 0;
            if (truncated)
                return false;
        }
        return false;
    }
};

} // namespace

ExactPathResult path_of_length(const HostGraph &g, Vertex u, Vertex v, int ell,
                               const VertexSet &avoid, bool parity_check, long long budget) {
    if (avoid.contains(u) || avoid.contains(v))
        throw std::invalid_argument("path_of_length: endpoint inside avoid set");
    if (u == v || ell <= 0)
        throw std::invalid_argument("path_of_length: need distinct endpoints and ell >= 1");
    ExactPathResult out;
    bool bipartite = g.has_bipartition();
    if (parity_check && bipartite) {
        int need = g.side(u) == g.side(v) ? 0 : 1;
        if (ell % 2 != need) {
            out.exhausted = true;
            return out;
        }
    }
    std::vector<int> dist(static_cast<std::size_t>(g.vertex_count()), -1);
    {
        std::queue<Vertex> q;
        dist[static_cast<std::size_t>(v)] = 0;
        q.push(v);
        while (!q.empty()) {
            Vertex a = q.front();
            q.pop();
            for (Vertex b : g.neighbors(a)) {
                if (dist[static_cast<std::size_t>(b)] != -1 || avoid.contains(b))
                    continue;
                dist[static_cast<std::size_t>(b)] = dist[static_cast<std::size_t>(a)] + 1;
                q.push(b);
            }
        }
    }
    if (dist[static_cast<std::size_t>(u)] == -1) {
        out.exhausted = true;
        return out;
    }
    ExactSearch search{g, v, ell, budget, bipartite, 0, false, {}, {}, {}};
    search.dist_to_target = std::move(dist);
    search.blocked.assign(static_cast<std::size_t>(g.vertex_count()), 0);
    for (Vertex a : avoid)
        search.blocked[static_cast<std::size_t>(a)] = 1;
    search.blocked[static_cast<std::size_t>(u)] = 1;
    search.stack.push_back(u);
    bool ok = search.dfs();
    out.expansions = search.expansions;
    if (ok) {
        out.path = Path(search.stack);
        audit::note_path(g, *out.path);
    } else {
        out.exhausted = !search.truncated;
    }
    return out;
}

} // namespace subforge
