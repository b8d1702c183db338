#include "subforge/graph.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

namespace subforge {

VertexSet::VertexSet(std::vector<Vertex> ids) : ids_(std::move(ids)) {
    std::sort(ids_.begin(), ids_.end());
    ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
    if (!ids_.empty() && ids_.front() < 0)
        throw std::invalid_argument("VertexSet: negative id");
}

VertexSet VertexSet::full(int n) {
    std::vector<Vertex> ids(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        ids[static_cast<std::size_t>(i)] = i;
    VertexSet s;
    s.ids_ = std::move(ids);
    return s;
}

bool VertexSet::contains(Vertex v) const {
    return std::binary_search(ids_.begin(), ids_.end(), v);
}

VertexSet VertexSet::unite(const VertexSet &other) const {
    VertexSet out;
    out.ids_.reserve(ids_.size() + other.ids_.size());
    std::set_union(ids_.begin(), ids_.end(), other.ids_.begin(), other.ids_.end(),
                   std::back_inserter(out.ids_));
    return out;
}

VertexSet VertexSet::minus(const VertexSet &other) const {
    VertexSet out;
    std::set_difference(ids_.begin(), ids_.end(), other.ids_.begin(), other.ids_.end(),
                        std::back_inserter(out.ids_));
    return out;
}

VertexSet VertexSet::intersect(const VertexSet &other) const {
    VertexSet out;
    std::set_intersection(ids_.begin(), ids_.end(), other.ids_.begin(), other.ids_.end(),
                          std::back_inserter(out.ids_));
    return out;
}

bool VertexSet::disjoint_from(const VertexSet &other) const {
    auto it = ids_.begin();
    auto jt = other.ids_.begin();
    while (it != ids_.end() && jt != other.ids_.end()) {
        if (*it < *jt)
            ++it;
        else if (*jt < *it)
            ++jt;
        else
            return false;
    }
    return true;
}

void VertexSet::insert(Vertex v) {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), v);
    if (it == ids_.end() || *it != v)
        ids_.insert(it, v);
}

HostGraph::HostGraph(int n, std::vector<std::pair<Vertex, Vertex>> edges,
                     std::optional<std::vector<std::int8_t>> side)
    : n_(n) {
    if (n < 0)
        throw std::invalid_argument("HostGraph: negative vertex count");
    adj_.assign(static_cast<std::size_t>(n), {});
    for (auto &[u, v] : edges) {
        if (u == v)
            throw std::invalid_argument("HostGraph: loop at vertex " + std::to_string(u));
        if (u < 0 || v < 0 || u >= n || v >= n)
            throw std::invalid_argument("HostGraph: edge endpoint out of range");
        if (u > v)
            std::swap(u, v);
    }
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
        throw std::invalid_argument("HostGraph: duplicate edge");
    for (auto [u, v] : edges) {
        adj_[static_cast<std::size_t>(u)].push_back(v);
        adj_[static_cast<std::size_t>(v)].push_back(u);
    }
    for (auto &nbrs : adj_)
        std::sort(nbrs.begin(), nbrs.end());
    m_ = static_cast<long long>(edges.size());
    origin_.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        origin_[static_cast<std::size_t>(i)] = i;
    if (side) {
        if (static_cast<int>(side->size()) != n)
            throw std::invalid_argument("HostGraph: side assignment length mismatch");
        for (auto s : *side)
            if (s != 0 && s != 1)
                throw std::invalid_argument("HostGraph: side values must be 0/1");
        for (auto [u, v] : edges)
            if ((*side)[static_cast<std::size_t>(u)] == (*side)[static_cast<std::size_t>(v)])
                throw std::invalid_argument("HostGraph: edge inside one side of bipartition");
        side_ = std::move(*side);
    }
}

const std::vector<Vertex> &HostGraph::neighbors(Vertex v) const {
    if (v < 0 || v >= n_)
        throw std::out_of_range("HostGraph: vertex out of range");
    return adj_[static_cast<std::size_t>(v)];
}

bool HostGraph::adjacent(Vertex u, Vertex v) const {
    const auto &nbrs = neighbors(u);
    return std::binary_search(nbrs.begin(), nbrs.end(), v);
}

VertexSet HostGraph::side_set(int s) const {
    std::vector<Vertex> ids;
    for (int v = 0; v < n_; ++v)
        if (side_[static_cast<std::size_t>(v)] == s)
            ids.push_back(v);
    return VertexSet(std::move(ids));
}

std::vector<std::pair<Vertex, Vertex>> HostGraph::edges() const {
    std::vector<std::pair<Vertex, Vertex>> out;
    out.reserve(static_cast<std::size_t>(m_));
    for (int u = 0; u < n_; ++u)
        for (Vertex v : adj_[static_cast<std::size_t>(u)])
            if (u < v)
                out.emplace_back(u, v);
    return out;
}

HostGraph HostGraph::induced(const VertexSet &keep) const {
    std::vector<int> local(static_cast<std::size_t>(n_), -1);
    int idx = 0;
    for (Vertex v : keep) {
        if (v < 0 || v >= n_)
            throw std::invalid_argument("HostGraph::induced: vertex out of range");
        local[static_cast<std::size_t>(v)] = idx++;
    }
    std::vector<std::pair<Vertex, Vertex>> es;
    for (Vertex u : keep)
        for (Vertex v : adj_[static_cast<std::size_t>(u)])
            if (u < v && local[static_cast<std::size_t>(v)] >= 0)
                es.emplace_back(local[static_cast<std::size_t>(u)], local[static_cast<std::size_t>(v)]);
    std::optional<std::vector<std::int8_t>> sub_side;
    if (!side_.empty()) {
        std::vector<std::int8_t> s(static_cast<std::size_t>(keep.size()));
        for (Vertex v : keep)
            s[static_cast<std::size_t>(local[static_cast<std::size_t>(v)])] =
                side_[static_cast<std::size_t>(v)];
        sub_side = std::move(s);
    }
    HostGraph out(keep.size(), std::move(es), std::move(sub_side));
    for (Vertex v : keep)
        out.origin_[static_cast<std::size_t>(local[static_cast<std::size_t>(v)])] =
            origin_[static_cast<std::size_t>(v)];
    return out;
}

HostGraph HostGraph::spanning(const std::vector<std::pair<Vertex, Vertex>> &edges,
                              std::optional<std::vector<std::int8_t>> side) const {
    HostGraph out(n_, edges, std::move(side));
    out.origin_ = origin_;
    return out;
}

std::vector<std::vector<Vertex>> HostGraph::components() const {
    std::vector<std::vector<Vertex>> comps;
    std::vector<char> seen(static_cast<std::size_t>(n_), 0);
    for (int s = 0; s < n_; ++s) {
        if (seen[static_cast<std::size_t>(s)])
            continue;
        std::vector<Vertex> comp;
        std::queue<Vertex> q;
        q.push(s);
        seen[static_cast<std::size_t>(s)] = 1;
        while (!q.empty()) {
            Vertex u = q.front();
            q.pop();
            comp.push_back(u);
            for (Vertex v : adj_[static_cast<std::size_t>(u)]) {
                if (!seen[static_cast<std::size_t>(v)]) {
                    seen[static_cast<std::size_t>(v)] = 1;
                    q.push(v);
                }
            }
        }
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
    }
    return comps;
}

bool HostGraph::is_connected() const { return n_ <= 1 || components().size() == 1; }

std::optional<std::vector<std::int8_t>> HostGraph::two_coloring() const {
    std::vector<std::int8_t> color(static_cast<std::size_t>(n_), -1);
    for (int s = 0; s < n_; ++s) {
        if (color[static_cast<std::size_t>(s)] != -1)
            continue;
        color[static_cast<std::size_t>(s)] = 0;
        std::queue<Vertex> q;
        q.push(s);
        while (!q.empty()) {
            Vertex u = q.front();
            q.pop();
            for (Vertex v : adj_[static_cast<std::size_t>(u)]) {
                if (color[static_cast<std::size_t>(v)] == -1) {
                    color[static_cast<std::size_t>(v)] =
                        static_cast<std::int8_t>(1 - color[static_cast<std::size_t>(u)]);
                    q.push(v);
                } else if (color[static_cast<std::size_t>(v)] == color[static_cast<std::size_t>(u)]) {
                    return std::nullopt;
                }
            }
        }
    }
    return color;
}

HostGraph HostGraph::with_bipartition(std::vector<std::int8_t> side) const {
    HostGraph out(n_, edges(), std::move(side));
    out.origin_ = origin_;
    return out;
}

DegreeStats stats(const HostGraph &g) {
    if (g.vertex_count() == 0)
        throw std::invalid_argument("stats: empty graph");
    DegreeStats s;
    s.avg = Rational(2 * g.edge_count(), g.vertex_count());
    s.min = g.degree(0);
    s.max = g.degree(0);
    for (int v = 1; v < g.vertex_count(); ++v) {
        s.min = std::min(s.min, g.degree(v));
        s.max = std::max(s.max, g.degree(v));
    }
    return s;
}

Rational pair_density(const HostGraph &g, const VertexSet &a, const VertexSet &b) {
    if (a.empty() || b.empty())
        throw std::invalid_argument("pair_density: empty side");
    if (!a.disjoint_from(b))
        throw std::invalid_argument("pair_density: overlapping sides");
    long long cross = 0;
    for (Vertex u : a)
        for (Vertex v : g.neighbors(u))
            if (b.contains(v))
                ++cross;
    return Rational(cross, static_cast<long long>(a.size()) * b.size());
}

int codegree(const HostGraph &g, Vertex u, Vertex v) {
    if (u == v)
        throw std::invalid_argument("codegree: identical vertices");
    const auto &nu = g.neighbors(u);
    const auto &nv = g.neighbors(v);
    int count = 0;
    auto it = nu.begin();
    auto jt = nv.begin();
    while (it != nu.end() && jt != nv.end()) {
        if (*it < *jt)
            ++it;
        else if (*jt < *it)
            ++jt;
        else {
            ++count;
            ++it;
            ++jt;
        }
    }
    return count;
}

BallResult ball_layers(const HostGraph &g, const VertexSet &w, int r) {
    if (r < 0)
        throw std::invalid_argument("ball: negative radius");
    if (w.empty())
        throw std::invalid_argument("ball: empty center set");
    std::vector<int> dist(static_cast<std::size_t>(g.vertex_count()), -1);
    std::queue<Vertex> q;
    for (Vertex v : w) {
        if (v < 0 || v >= g.vertex_count())
            throw std::invalid_argument("ball: center out of range");
        dist[static_cast<std::size_t>(v)] = 0;
        q.push(v);
    }
    std::vector<std::vector<Vertex>> layers(static_cast<std::size_t>(r) + 1);
    layers[0] = std::vector<Vertex>(w.begin(), w.end());
    while (!q.empty()) {
        Vertex u = q.front();
        q.pop();
        int du = dist[static_cast<std::size_t>(u)];
        if (du == r)
            continue;
        for (Vertex v : g.neighbors(u)) {
            if (dist[static_cast<std::size_t>(v)] == -1) {
                dist[static_cast<std::size_t>(v)] = du + 1;
                layers[static_cast<std::size_t>(du) + 1].push_back(v);
                q.push(v);
            }
        }
    }
    BallResult out;
    std::vector<Vertex> all;
    for (auto &layer : layers) {
        std::sort(layer.begin(), layer.end());
        all.insert(all.end(), layer.begin(), layer.end());
        out.layers.emplace_back(layer);
    }
    out.ball = VertexSet(std::move(all));
    return out;
}

VertexSet ball(const HostGraph &g, const VertexSet &w, int r) { return ball_layers(g, w, r).ball; }

HostGraph max_cut_bipartite(const HostGraph &g) {
    if (g.vertex_count() < 1)
        throw std::invalid_argument("max_cut_bipartite: empty graph");
    int n = g.vertex_count();
    std::vector<std::int8_t> side;
    if (g.has_bipartition()) {
        side.resize(static_cast<std::size_t>(n));
        for (int v = 0; v < n; ++v)
            side[static_cast<std::size_t>(v)] = static_cast<std::int8_t>(g.side(v));
    } else if (auto coloring = g.two_coloring()) {
        side = std::move(*coloring);
    } else {
        // Start from a componentwise BFS coloring (cuts every edge of each
        // bipartite component), then flip while improving. At a local
        // optimum each vertex has at least half its edges crossing, so the
        // cut keeps at least ceil(e/2) edges.
        side.assign(static_cast<std::size_t>(n), 0);
        std::vector<char> seen(static_cast<std::size_t>(n), 0);
        for (int s = 0; s < n; ++s) {
            if (seen[static_cast<std::size_t>(s)])
                continue;
            std::queue<Vertex> q;
            q.push(s);
            seen[static_cast<std::size_t>(s)] = 1;
            while (!q.empty()) {
                Vertex u = q.front();
                q.pop();
                for (Vertex v : g.neighbors(u)) {
                    if (!seen[static_cast<std::size_t>(v)]) {
                        seen[static_cast<std::size_t>(v)] = 1;
                        side[static_cast<std::size_t>(v)] =
                            static_cast<std::int8_t>(1 - side[static_cast<std::size_t>(u)]);
                        q.push(v);
                    }
                }
            }
        }
        bool improved = true;
        while (improved) {
            improved = false;
            for (int v = 0; v < n; ++v) {
                int same = 0;
                for (Vertex u : g.neighbors(v))
                    if (side[static_cast<std::size_t>(u)] == side[static_cast<std::size_t>(v)])
                        ++same;
                if (2 * same > g.degree(v)) {
                    side[static_cast<std::size_t>(v)] =
                        static_cast<std::int8_t>(1 - side[static_cast<std::size_t>(v)]);
                    improved = true;
                }
            }
        }
    }
    std::vector<std::pair<Vertex, Vertex>> cut;
    for (auto [u, v] : g.edges())
        if (side[static_cast<std::size_t>(u)] != side[static_cast<std::size_t>(v)])
            cut.emplace_back(u, v);
    if (2 * static_cast<long long>(cut.size()) < g.edge_count())
        throw std::logic_error("max_cut_bipartite: cut below half the edges");
    return g.spanning(cut, side);
}

} // namespace subforge
