#include "subforge/gadgets.hpp"

#include "subforge/routing.hpp"

#include "json.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <stdexcept>

namespace subforge {

namespace {

VertexSet collect(std::initializer_list<const VertexSet *> sets) {
    VertexSet out;
    for (const VertexSet *s : sets)
        out = out.unite(*s);
    return out;
}

std::vector<Vertex> path_union(const std::vector<Path> &paths) {
    std::vector<Vertex> all;
    for (const auto &p : paths)
        all.insert(all.end(), p.vertices().begin(), p.vertices().end());
    return all;
}

} // namespace

VertexSet Unit::exterior() const {
    std::vector<Vertex> leaves;
    for (const auto &s : stars)
        leaves.insert(leaves.end(), s.leaves.begin(), s.leaves.end());
    return VertexSet(std::move(leaves));
}

VertexSet Unit::all_vertices() const {
    std::vector<Vertex> all = path_union(branches);
    all.push_back(core);
    for (const auto &s : stars) {
        all.push_back(s.center);
        all.insert(all.end(), s.leaves.begin(), s.leaves.end());
    }
    return VertexSet(std::move(all));
}

VertexSet Unit::interior() const { return all_vertices().minus(exterior()); }

VertexSet Web::center_set() const {
    std::vector<Vertex> all = path_union(branches);
    all.push_back(core);
    return VertexSet(std::move(all));
}

VertexSet Web::exterior() const {
    VertexSet out;
    for (const auto &u : units)
        out = out.unite(u.exterior());
    return out;
}

VertexSet Web::all_vertices() const {
    VertexSet out = center_set();
    for (const auto &u : units)
        out = out.unite(u.all_vertices());
    return out;
}

VertexSet Web::interior() const { return all_vertices().minus(exterior()); }

VertexSet Adjuster::all_vertices() const {
    return collect({&f1.vertices, &f2.vertices, &center});
}

namespace {

GadgetVerdict fail_clause(const std::string &clause) { return {false, clause}; }

GadgetVerdict check_expansion(const HostGraph &g, const Expansion &e, const std::string &tag) {
    if (e.center < 0 || e.center >= g.vertex_count())
        return fail_clause(tag + ": center out of range");
    if (!e.vertices.contains(e.center))
        return fail_clause(tag + ": center not inside the set");
    if (e.vertices.size() != e.declared_size)
        return fail_clause(tag + ": size " + std::to_string(e.vertices.size()) + " != declared " +
                           std::to_string(e.declared_size));
    // Distances measured inside the induced set.
    std::map<Vertex, int> dist;
    std::queue<Vertex> q;
    dist[e.center] = 0;
    q.push(e.center);
    while (!q.empty()) {
        Vertex u = q.front();
        q.pop();
        for (Vertex v : g.neighbors(u)) {
            if (!e.vertices.contains(v) || dist.count(v))
                continue;
            dist[v] = dist[u] + 1;
            q.push(v);
        }
    }
    for (Vertex v : e.vertices) {
        auto it = dist.find(v);
        if (it == dist.end())
            return fail_clause(tag + ": vertex " + std::to_string(v) + " unreachable inside set");
        if (it->second > e.radius)
            return fail_clause(tag + ": vertex " + std::to_string(v) + " at distance " +
                               std::to_string(it->second) + " > " + std::to_string(e.radius));
    }
    return {true, ""};
}

GadgetVerdict check_unit(const HostGraph &g, const Unit &u) {
    if (static_cast<int>(u.branches.size()) != u.h1 || static_cast<int>(u.stars.size()) != u.h1)
        return fail_clause("unit: expected h1 branches and stars");
    if (u.h1 == 0)
        return u.core >= 0 && u.core < g.vertex_count() ? GadgetVerdict{true, ""}
                                                        : fail_clause("unit: bad core");
    std::set<Vertex> tip_set;
    PathSystem branch_system;
    for (int i = 0; i < u.h1; ++i) {
        const Path &p = u.branches[static_cast<std::size_t>(i)];
        std::string why;
        if (!p.valid_in(g, &why))
            return fail_clause("unit branch " + std::to_string(i) + ": " + why);
        if (p.front() != u.core)
            return fail_clause("unit branch " + std::to_string(i) + ": does not start at core");
        if (p.length() < 1 || p.length() > u.h3)
            return fail_clause("unit branch " + std::to_string(i) + ": length " +
                               std::to_string(p.length()) + " outside [1," + std::to_string(u.h3) +
                               "]");
        if (p.back() != u.stars[static_cast<std::size_t>(i)].center)
            return fail_clause("unit branch " + std::to_string(i) + ": does not end at its star");
        if (!tip_set.insert(p.back()).second)
            return fail_clause("unit: repeated star center");
        branch_system.add(p);
    }
    std::string why;
    if (!branch_system.internally_disjoint(&why))
        return fail_clause("unit branches: " + why);
    VertexSet branch_vertices(path_union(u.branches));
    std::set<Vertex> star_vertices;
    for (int i = 0; i < u.h1; ++i) {
        const Star &s = u.stars[static_cast<std::size_t>(i)];
        if (static_cast<int>(s.leaves.size()) != u.h2)
            return fail_clause("unit star " + std::to_string(i) + ": expected h2 leaves");
        if (!star_vertices.insert(s.center).second)
            return fail_clause("unit stars: center reused");
        for (Vertex leaf : s.leaves) {
            if (!g.adjacent(s.center, leaf))
                return fail_clause("unit star " + std::to_string(i) + ": leaf " +
                                   std::to_string(leaf) + " not adjacent to center");
            if (!star_vertices.insert(leaf).second)
                return fail_clause("unit stars: not vertex-disjoint at " + std::to_string(leaf));
            if (branch_vertices.contains(leaf))
                return fail_clause("unit: star leaf " + std::to_string(leaf) +
                                   " lies on a branch path");
        }
    }
    return {true, ""};
}

GadgetVerdict check_web(const HostGraph &g, const Web &w) {
    if (static_cast<int>(w.branches.size()) != w.h0 || static_cast<int>(w.units.size()) != w.h0)
        return fail_clause("web: expected h0 branches and units");
    if (w.core < 0 || w.core >= g.vertex_count())
        return fail_clause("web: bad core");
    if (w.h0 == 0)
        return {true, ""}; // degenerate: a single core vertex
    PathSystem branch_system;
    std::set<Vertex> tips;
    for (int i = 0; i < w.h0; ++i) {
        const Path &p = w.branches[static_cast<std::size_t>(i)];
        std::string why;
        if (!p.valid_in(g, &why))
            return fail_clause("web branch " + std::to_string(i) + ": " + why);
        if (p.front() != w.core)
            return fail_clause("web branch " + std::to_string(i) + ": does not start at core");
        if (p.length() < 1 || p.length() > w.h3)
            return fail_clause("web branch " + std::to_string(i) + ": bad length");
        if (p.back() != w.units[static_cast<std::size_t>(i)].core)
            return fail_clause("web branch " + std::to_string(i) + ": does not end at unit core");
        if (!tips.insert(p.back()).second)
            return fail_clause("web: repeated unit core");
        branch_system.add(p);
    }
    std::string why;
    if (!branch_system.internally_disjoint(&why))
        return fail_clause("web branches: " + why);
    VertexSet q_vertices(path_union(w.branches));
    VertexSet unit_accum;
    for (int i = 0; i < w.h0; ++i) {
        const Unit &f = w.units[static_cast<std::size_t>(i)];
        if (f.h1 != w.h1 || f.h2 != w.h2)
            return fail_clause("web unit " + std::to_string(i) + ": parameter mismatch");
        auto uv = check_unit(g, f);
        if (!uv.valid)
            return fail_clause("web unit " + std::to_string(i) + ": " + uv.violated_clause);
        VertexSet mine = f.all_vertices();
        if (!unit_accum.intersect(mine).empty())
            return fail_clause("web units: not vertex-disjoint");
        unit_accum = unit_accum.unite(mine);
        VertexSet but_core = mine.minus(VertexSet::single(f.core));
        if (!but_core.disjoint_from(q_vertices))
            return fail_clause("web: unit " + std::to_string(i) + " touches branch paths");
    }
    return {true, ""};
}

/// Minimal ell whose full ladder ell + 2i (i <= k) is realizable inside
/// G[A u {v1, v2}], with witnesses; absent when none exists.
std::optional<std::pair<int, std::vector<Path>>> compute_ladder(const HostGraph &g,
                                                                const VertexSet &a, Vertex v1,
                                                                Vertex v2, int k,
                                                                long long budget, bool *truncated) {
    VertexSet inside = a.unite(VertexSet({v1, v2}));
    VertexSet outside = VertexSet::full(g.vertex_count()).minus(inside);
    // Shortest possible length inside the region.
    auto shortest = bfs_shortest_path(g, VertexSet::single(v1), VertexSet::single(v2), outside,
                                      g.vertex_count());
    if (!shortest)
        return std::nullopt;
    int lo = shortest->length();
    int hi = a.size() + 1; // simple paths in the region cannot be longer
    int step = g.has_bipartition() ? 2 : 1;
    for (int ell = lo; ell + 2 * k <= hi; ell += step) {
        std::vector<Path> witnesses;
        bool all = true;
        for (int i = 0; i <= k; ++i) {
            auto res = path_of_length(g, v1, v2, ell + 2 * i, outside, true, budget);
            if (res.path) {
                witnesses.push_back(*res.path);
            } else {
                if (!res.exhausted && truncated)
                    *truncated = true;
                all = false;
                break;
            }
        }
        if (all)
            return std::make_pair(ell, std::move(witnesses));
    }
    return std::nullopt;
}

GadgetVerdict check_adjuster(const HostGraph &g, const Adjuster &a, long long budget) {
    // (A1) pairwise disjoint parts.
    if (!a.f1.vertices.disjoint_from(a.f2.vertices))
        return fail_clause("adjuster (A1): ends overlap");
    if (!a.center.disjoint_from(a.f1.vertices) || !a.center.disjoint_from(a.f2.vertices))
        return fail_clause("adjuster (A1): center set touches an end");
    if (a.center.contains(a.v1) || a.center.contains(a.v2))
        return fail_clause("adjuster (A1): core vertex inside the center set");
    // (A2) both ends are (D,m)-expansions at their cores.
    if (a.f1.center != a.v1 || a.f2.center != a.v2)
        return fail_clause("adjuster (A2): expansion centers disagree with cores");
    for (int i = 0; i < 2; ++i) {
        auto ev = check_expansion(g, a.end(i), "adjuster end " + std::to_string(i + 1));
        if (!ev.valid)
            return ev;
    }
    // (A3) center size bound.
    if (a.center.size() > 10 * a.radius * std::max(1, a.k))
        return fail_clause("adjuster (A3): |A| = " + std::to_string(a.center.size()) + " > 10mk");
    // (A4) the full ladder, re-established by exhaustive search; the stored
    // ell_min must be the smallest realizable base length.
    bool truncated = false;
    auto ladder = compute_ladder(g, a.center, a.v1, a.v2, a.k, budget, &truncated);
    if (!ladder)
        return fail_clause(truncated ? "adjuster (A4): ladder search exceeded budget"
                                     : "adjuster (A4): no complete ladder exists");
    if (ladder->first != a.ell_min)
        return fail_clause("adjuster (A4): smallest ladder base is " +
                           std::to_string(ladder->first) + ", stored " +
                           std::to_string(a.ell_min));
    if (static_cast<int>(a.witnesses.size()) != a.k + 1)
        return fail_clause("adjuster (A4): expected k+1 stored witnesses");
    for (int i = 0; i <= a.k; ++i) {
        const Path &w = a.witnesses[static_cast<std::size_t>(i)];
        std::string why;
        if (!w.valid_in(g, &why))
            return fail_clause("adjuster witness " + std::to_string(i) + ": " + why);
        if (w.length() != a.ell_min + 2 * i)
            return fail_clause("adjuster witness " + std::to_string(i) + ": wrong length");
        bool endpoints_ok = (w.front() == a.v1 && w.back() == a.v2) ||
                            (w.front() == a.v2 && w.back() == a.v1);
        if (!endpoints_ok)
            return fail_clause("adjuster witness " + std::to_string(i) + ": wrong endpoints");
        for (Vertex v : w.interior())
            if (!a.center.contains(v))
                return fail_clause("adjuster witness " + std::to_string(i) +
                                   ": leaves the center set");
    }
    return {true, ""};
}

GadgetVerdict check_octopus(const HostGraph &g, const Octopus &o, long long budget) {
    auto cv = check_adjuster(g, o.core, budget);
    if (!cv.valid)
        return fail_clause("octopus core: " + cv.violated_clause);
    if (o.end_index != 0 && o.end_index != 1)
        return fail_clause("octopus: bad end index");
    if (static_cast<int>(o.family.size()) != o.r3)
        return fail_clause("octopus: expected r3 family adjusters");
    if (o.links.size() > o.family.size())
        return fail_clause("octopus: more link paths than adjusters");
    VertexSet core_all = o.core.all_vertices();
    VertexSet accum = core_all;
    VertexSet all_centers = o.core.center;
    for (std::size_t i = 0; i < o.family.size(); ++i) {
        auto fv = check_adjuster(g, o.family[i], budget);
        if (!fv.valid)
            return fail_clause("octopus adjuster " + std::to_string(i) + ": " +
                               fv.violated_clause);
        VertexSet mine = o.family[i].all_vertices();
        if (!accum.intersect(mine).empty())
            return fail_clause("octopus: adjusters not pairwise disjoint");
        accum = accum.unite(mine);
        all_centers = all_centers.unite(o.family[i].center);
    }
    const VertexSet &r_set = o.core.end(o.end_index).vertices;
    PathSystem links;
    for (std::size_t i = 0; i < o.links.size(); ++i) {
        const Path &p = o.links[i];
        std::string why;
        if (!p.valid_in(g, &why))
            return fail_clause("octopus link " + std::to_string(i) + ": " + why);
        if (p.length() > o.r4)
            return fail_clause("octopus link " + std::to_string(i) + ": too long");
        for (Vertex v : p.vertices())
            if (all_centers.contains(v))
                return fail_clause("octopus link " + std::to_string(i) + ": hits a center set");
        links.add(p);
    }
    std::string why;
    if (!links.internally_disjoint(&why))
        return fail_clause("octopus links: " + why);
    // Every family adjuster needs an end reached from R by a link subpath;
    // with one path per adjuster this means one endpoint in R and the other
    // in one of its ends.
    for (std::size_t i = 0; i < o.family.size(); ++i) {
        const VertexSet &e1 = o.family[i].f1.vertices;
        const VertexSet &e2 = o.family[i].f2.vertices;
        bool connected = false;
        for (const Path &p : o.links) {
            bool touches_r = r_set.contains(p.front()) || r_set.contains(p.back());
            bool touches_end = e1.contains(p.front()) || e1.contains(p.back()) ||
                               e2.contains(p.front()) || e2.contains(p.back());
            if (touches_r && touches_end) {
                connected = true;
                break;
            }
        }
        if (!connected)
            return fail_clause("octopus: adjuster " + std::to_string(i) + " not linked to R");
    }
    return {true, ""};
}

} // namespace

GadgetVerdict validate_gadget(const HostGraph &g, const GadgetRecord &record,
                              long long ladder_budget) {
    return std::visit(
        [&](const auto &gadget) -> GadgetVerdict {
            using T = std::decay_t<decltype(gadget)>;
            if constexpr (std::is_same_v<T, Expansion>)
                return check_expansion(g, gadget, "expansion");
            else if constexpr (std::is_same_v<T, Unit>)
                return check_unit(g, gadget);
            else if constexpr (std::is_same_v<T, Web>)
                return check_web(g, gadget);
            else if constexpr (std::is_same_v<T, Adjuster>)
                return check_adjuster(g, gadget, ladder_budget);
            else
                return check_octopus(g, gadget, ladder_budget);
        },
        record);
}

BuildResult<Expansion> grow_expansion(const HostGraph &g, Vertex center, int size, int radius_cap,
                                      const VertexSet &avoid) {
    BuildResult<Expansion> out;
    if (avoid.contains(center)) {
        out.stage = "expansion";
        out.detail = "center inside avoid set";
        return out;
    }
    std::vector<Vertex> got{center};
    std::map<Vertex, int> dist{{center, 0}};
    std::queue<Vertex> q;
    q.push(center);
    int radius = 0;
    while (!q.empty() && static_cast<int>(got.size()) < size) {
        Vertex u = q.front();
        q.pop();
        for (Vertex v : g.neighbors(u)) {
            if (static_cast<int>(got.size()) >= size)
                break;
            if (dist.count(v) || avoid.contains(v))
                continue;
            dist[v] = dist[u] + 1;
            radius = std::max(radius, dist[v]);
            got.push_back(v);
            q.push(v);
        }
    }
    if (static_cast<int>(got.size()) < size) {
        out.stage = "expansion";
        out.detail = "starved at " + std::to_string(got.size()) + " of " + std::to_string(size);
        return out;
    }
    if (radius > radius_cap) {
        out.stage = "expansion";
        out.detail = "radius " + std::to_string(radius) + " exceeds cap";
        return out;
    }
    Expansion e;
    e.center = center;
    e.vertices = VertexSet(std::move(got));
    e.declared_size = size;
    e.radius = radius_cap;
    return BuildResult<Expansion>{e, "", ""};
}

namespace {

struct Mark {
    std::vector<char> bits;
    explicit Mark(int n) : bits(static_cast<std::size_t>(n), 0) {}
    void set(Vertex v) { bits[static_cast<std::size_t>(v)] = 1; }
    void set_all(const VertexSet &s) {
        for (Vertex v : s)
            set(v);
    }
    bool test(Vertex v) const { return bits[static_cast<std::size_t>(v)] != 0; }
    VertexSet to_set() const {
        std::vector<Vertex> ids;
        for (std::size_t i = 0; i < bits.size(); ++i)
            if (bits[i])
                ids.push_back(static_cast<Vertex>(i));
        return VertexSet(std::move(ids));
    }
};

int residual_degree(const HostGraph &g, Vertex v, const Mark &used) {
    int d = 0;
    for (Vertex u : g.neighbors(v))
        if (!used.test(u))
            ++d;
    return d;
}

bool on_side0(const HostGraph &g, Vertex v, bool side_constrained) {
    return !side_constrained || !g.has_bipartition() || g.side(v) == 0;
}

} // namespace

BuildResult<Unit> build_unit(const HostGraph &g, const VertexSet &avoid, int h1, int h2, int h3,
                             bool side_constrained) {
    BuildResult<Unit> out;
    if (h1 < 1 || h2 < 1 || h3 < 1)
        throw std::invalid_argument("build_unit: parameters must be positive");
    long long avail = g.vertex_count() - avoid.size();
    if (static_cast<long long>(h1) * (h2 + h3) + 1 > avail) {
        out.stage = "precheck";
        out.detail = "parameter infeasibility: h1*(h2+h3)+1 exceeds available vertices";
        return out;
    }

    // Star harvest: repeatedly take the max-residual-degree vertex on the
    // designated side; 2*h2 leaves per star when possible for overuse slack.
    Mark used(g.vertex_count());
    used.set_all(avoid);
    std::vector<Star> pool;
    int pool_target = 2 * h1;
    while (static_cast<int>(pool.size()) < pool_target) {
        Vertex best = -1;
        int best_deg = -1;
        for (Vertex v = 0; v < g.vertex_count(); ++v) {
            if (used.test(v) || !on_side0(g, v, side_constrained))
                continue;
            int d = residual_degree(g, v, used);
            if (d > best_deg) {
                best_deg = d;
                best = v;
            }
        }
        if (best < 0 || best_deg < h2)
            break;
        Star s;
        s.center = best;
        int want = best_deg >= 2 * h2 ? 2 * h2 : h2;
        for (Vertex u : g.neighbors(best)) {
            if (static_cast<int>(s.leaves.size()) >= want)
                break;
            if (!used.test(u))
                s.leaves.push_back(u);
        }
        used.set(best);
        for (Vertex u : s.leaves)
            used.set(u);
        pool.push_back(std::move(s));
    }
    if (static_cast<int>(pool.size()) < h1) {
        out.stage = "star harvest";
        out.detail = "starved at " + std::to_string(pool.size()) + " of " + std::to_string(h1);
        return out;
    }

    // Core: max residual degree on the designated side among free vertices.
    Vertex core = -1;
    {
        int best_deg = -1;
        for (Vertex v = 0; v < g.vertex_count(); ++v) {
            if (used.test(v) || !on_side0(g, v, side_constrained))
                continue;
            int d = residual_degree(g, v, used);
            if (d > best_deg) {
                best_deg = d;
                core = v;
            }
        }
    }
    if (core < 0) {
        out.stage = "core selection";
        out.detail = "no free vertex on the designated side";
        return out;
    }

    // Branches: consecutive shortest paths from the core towards unconnected
    // star centers. Star leaves may serve as intermediates (overuse is
    // repaired afterwards); centers appear only as endpoints.
    VertexSet branch_used; // vertices of accepted branches, core excluded
    std::vector<std::pair<Path, int>> accepted;
    std::vector<char> connected(pool.size(), 0);
    while (static_cast<int>(accepted.size()) < 2 * h1) {
        std::vector<Vertex> targets;
        std::map<Vertex, int> who;
        for (std::size_t i = 0; i < pool.size(); ++i) {
            if (!connected[i]) {
                targets.push_back(pool[i].center);
                who[pool[i].center] = static_cast<int>(i);
            }
        }
        if (targets.empty())
            break;
        auto path = bfs_shortest_path(g, VertexSet::single(core), VertexSet(targets),
                                      avoid.unite(branch_used), h3);
        if (!path)
            break;
        audit::note_path(g, *path);
        int idx = who.at(path->back());
        connected[static_cast<std::size_t>(idx)] = 1;
        for (Vertex v : path->vertices())
            if (v != core)
                branch_used.insert(v);
        accepted.emplace_back(std::move(*path), idx);
    }

    // Overuse filter: keep branches whose star still has h2 unused leaves.
    Unit unit;
    unit.core = core;
    unit.h1 = h1;
    unit.h2 = h2;
    unit.h3 = h3;
    for (auto &[path, idx] : accepted) {
        if (static_cast<int>(unit.branches.size()) >= h1)
            break;
        const Star &s = pool[static_cast<std::size_t>(idx)];
        Star trimmed;
        trimmed.center = s.center;
        for (Vertex leaf : s.leaves) {
            if (static_cast<int>(trimmed.leaves.size()) >= h2)
                break;
            if (!branch_used.contains(leaf))
                trimmed.leaves.push_back(leaf);
        }
        if (static_cast<int>(trimmed.leaves.size()) < h2)
            continue; // overused
        unit.branches.push_back(path);
        unit.stars.push_back(std::move(trimmed));
    }
    if (static_cast<int>(unit.branches.size()) < h1) {
        out.stage = "branch connection";
        out.detail = "only " + std::to_string(unit.branches.size()) + " of " + std::to_string(h1) +
                     " branches survived";
        return out;
    }
    auto verdict = validate_gadget(g, unit);
    if (!verdict.valid) {
        out.stage = "validation";
        out.detail = verdict.violated_clause;
        return out;
    }
    return BuildResult<Unit>{std::move(unit), "", ""};
}

BuildResult<Web> build_web(const HostGraph &g, const VertexSet &avoid, int h0, int h1, int h2,
                           int h3, bool side_constrained) {
    BuildResult<Web> out;
    if (h0 < 0 || h1 < 1 || h2 < 1 || h3 < 1)
        throw std::invalid_argument("build_web: bad parameters");
    // Reject only parameter sets that cannot fit even with length-1 branches.
    long long need = 1 + static_cast<long long>(h0) * (1 + h1 * (1 + h2));
    if (need > g.vertex_count() - avoid.size()) {
        out.stage = "precheck";
        out.detail = "parameter infeasibility: web needs more vertices than available";
        return out;
    }
    if (h0 == 0) {
        // Degenerate web: a bare core vertex.
        Vertex core = -1;
        for (Vertex v = 0; v < g.vertex_count(); ++v) {
            if (!avoid.contains(v) && on_side0(g, v, side_constrained)) {
                core = v;
                break;
            }
        }
        if (core < 0) {
            out.stage = "core selection";
            out.detail = "no free vertex";
            return out;
        }
        Web w;
        w.core = core;
        w.h0 = 0;
        w.h1 = h1;
        w.h2 = h2;
        w.h3 = h3;
        return BuildResult<Web>{std::move(w), "", ""};
    }

    // Candidate units, fully vertex-disjoint, with one spare branch each as
    // trimming slack (the unit builder already pads its own star harvest).
    std::vector<Unit> candidates;
    VertexSet unit_avoid = avoid;
    int candidate_target = h0 + 1;
    for (int j = 0; j < candidate_target; ++j) {
        auto u = build_unit(g, unit_avoid, h1 + 1, h2, h3, side_constrained);
        if (!u)
            break;
        unit_avoid = unit_avoid.unite(u.value->all_vertices());
        candidates.push_back(std::move(*u.value));
    }
    if (static_cast<int>(candidates.size()) < h0) {
        out.stage = "unit harvest";
        out.detail = "built " + std::to_string(candidates.size()) + " of " + std::to_string(h0) +
                     " candidate units";
        return out;
    }

    // Web core.
    Mark used(g.vertex_count());
    used.set_all(unit_avoid);
    Vertex core = -1;
    {
        int best_deg = -1;
        for (Vertex v = 0; v < g.vertex_count(); ++v) {
            if (used.test(v) || !on_side0(g, v, side_constrained))
                continue;
            int d = residual_degree(g, v, used);
            if (d > best_deg) {
                best_deg = d;
                core = v;
            }
        }
    }
    if (core < 0) {
        out.stage = "core selection";
        out.detail = "no free vertex for the web core";
        return out;
    }

    // Interiors of every candidate are off-limits to branch paths; exteriors
    // may be crossed and are repaired by the overuse trim.
    VertexSet all_interiors;
    for (const auto &u : candidates)
        all_interiors = all_interiors.unite(u.interior());

    VertexSet branch_used;
    std::vector<std::pair<Path, int>> connected;
    std::vector<char> done(candidates.size(), 0);
    while (static_cast<int>(connected.size()) < h0 + 1) {
        std::vector<Vertex> targets;
        std::map<Vertex, int> who;
        for (std::size_t j = 0; j < candidates.size(); ++j) {
            if (!done[j]) {
                targets.push_back(candidates[j].core);
                who[candidates[j].core] = static_cast<int>(j);
            }
        }
        if (targets.empty())
            break;
        VertexSet blocked = avoid.unite(branch_used)
                                .unite(all_interiors.minus(VertexSet(targets)));
        auto path =
            bfs_shortest_path(g, VertexSet::single(core), VertexSet(targets), blocked, h3);
        if (!path)
            break;
        audit::note_path(g, *path);
        int idx = who.at(path->back());
        done[static_cast<std::size_t>(idx)] = 1;
        for (Vertex v : path->vertices())
            if (v != core)
                branch_used.insert(v);
        connected.emplace_back(std::move(*path), idx);
    }

    // Trim each connected unit to an (h1, h2)-sub-unit avoiding branch_used.
    Web web;
    web.core = core;
    web.h0 = h0;
    web.h1 = h1;
    web.h2 = h2;
    web.h3 = h3;
    for (auto &[qpath, idx] : connected) {
        if (static_cast<int>(web.branches.size()) >= h0)
            break;
        const Unit &cand = candidates[static_cast<std::size_t>(idx)];
        Unit sub;
        sub.core = cand.core;
        sub.h1 = h1;
        sub.h2 = h2;
        sub.h3 = h3;
        for (std::size_t b = 0; b < cand.branches.size(); ++b) {
            if (static_cast<int>(sub.branches.size()) >= h1)
                break;
            const Star &s = cand.stars[b];
            Star trimmed;
            trimmed.center = s.center;
            for (Vertex leaf : s.leaves) {
                if (static_cast<int>(trimmed.leaves.size()) >= h2)
                    break;
                if (!branch_used.contains(leaf))
                    trimmed.leaves.push_back(leaf);
            }
            if (static_cast<int>(trimmed.leaves.size()) < h2)
                continue; // star overused by web branches
            sub.branches.push_back(cand.branches[b]);
            sub.stars.push_back(std::move(trimmed));
        }
        if (static_cast<int>(sub.branches.size()) < h1)
            continue; // unit went bad
        web.branches.push_back(qpath);
        web.units.push_back(std::move(sub));
    }
    if (static_cast<int>(web.branches.size()) < h0) {
        out.stage = "unit linking";
        out.detail = "only " + std::to_string(web.branches.size()) + " of " + std::to_string(h0) +
                     " units linked and trimmed";
        return out;
    }
    auto verdict = validate_gadget(g, web);
    if (!verdict.valid) {
        out.stage = "validation";
        out.detail = verdict.violated_clause;
        return out;
    }
    return BuildResult<Web>{std::move(web), "", ""};
}

namespace {

/// Shortest cycle via BFS from every start; even length guaranteed on
/// two-colored graphs. Returns the cycle's vertex sequence.
std::optional<std::vector<Vertex>> find_shortest_cycle(const HostGraph &g, const VertexSet &avoid) {
    int n = g.vertex_count();
    std::optional<std::vector<Vertex>> best;
    for (Vertex s = 0; s < n; ++s) {
        if (avoid.contains(s))
            continue;
        std::vector<int> dist(static_cast<std::size_t>(n), -1);
        std::vector<Vertex> parent(static_cast<std::size_t>(n), -1);
        std::queue<Vertex> q;
        dist[static_cast<std::size_t>(s)] = 0;
        q.push(s);
        while (!q.empty()) {
            Vertex u = q.front();
            q.pop();
            for (Vertex v : g.neighbors(u)) {
                if (avoid.contains(v) || v == parent[static_cast<std::size_t>(u)])
                    continue;
                if (dist[static_cast<std::size_t>(v)] == -1) {
                    dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
                    parent[static_cast<std::size_t>(v)] = u;
                    q.push(v);
                    continue;
                }
                // Non-tree edge: close a cycle through the two chains.
                int candidate = dist[static_cast<std::size_t>(u)] +
                                dist[static_cast<std::size_t>(v)] + 1;
                if (best && candidate >= static_cast<int>(best->size()))
                    continue;
                std::vector<Vertex> cu, cv;
                for (Vertex a = u; a != -1; a = parent[static_cast<std::size_t>(a)])
                    cu.push_back(a);
                for (Vertex a = v; a != -1; a = parent[static_cast<std::size_t>(a)])
                    cv.push_back(a);
                std::set<Vertex> on_u(cu.begin(), cu.end());
                Vertex meet = -1;
                for (Vertex a : cv) {
                    if (on_u.count(a)) {
                        meet = a;
                        break;
                    }
                }
                if (meet == -1)
                    continue;
                if (meet == u || meet == v)
                    continue; // edge within one chain, not a fresh cycle
                std::vector<Vertex> cyc;
                for (Vertex a : cu) {
                    cyc.push_back(a);
                    if (a == meet)
                        break;
                }
                std::vector<Vertex> tail;
                for (Vertex a : cv) {
                    if (a == meet)
                        break;
                    tail.push_back(a);
                }
                std::reverse(tail.begin(), tail.end());
                cyc.insert(cyc.end(), tail.begin(), tail.end());
                if (cyc.size() >= 3 && (!best || cyc.size() < best->size()))
                    best = cyc;
            }
        }
    }
    return best;
}

Adjuster assemble_simple(const HostGraph &g, const std::vector<Vertex> &cycle, int rot, int d_size,
                         int m, const VertexSet &avoid, std::string *why) {
    int len = static_cast<int>(cycle.size());
    int r = len / 2;
    Adjuster adj;
    adj.v1 = cycle[static_cast<std::size_t>(rot)];
    adj.v2 = cycle[static_cast<std::size_t>((rot + r - 1) % len)];
    std::vector<Vertex> rest;
    for (int i = 0; i < len; ++i) {
        Vertex c = cycle[static_cast<std::size_t>(i)];
        if (c != adj.v1 && c != adj.v2)
            rest.push_back(c);
    }
    adj.center = VertexSet(std::move(rest));
    adj.d_size = d_size;
    adj.radius = m;
    adj.k = 1;
    VertexSet f1_avoid = avoid.unite(adj.center).unite(VertexSet::single(adj.v2));
    auto f1 = grow_expansion(g, adj.v1, d_size, m, f1_avoid);
    if (!f1) {
        *why = "end 1 " + f1.detail;
        return adj;
    }
    VertexSet f2_avoid = f1_avoid.unite(f1.value->vertices).minus(VertexSet::single(adj.v2))
                             .unite(VertexSet::single(adj.v1));
    auto f2 = grow_expansion(g, adj.v2, d_size, m, f2_avoid);
    if (!f2) {
        *why = "end 2 " + f2.detail;
        return adj;
    }
    adj.f1 = *f1.value;
    adj.f2 = *f2.value;
    bool truncated = false;
    auto ladder = compute_ladder(g, adj.center, adj.v1, adj.v2, 1, 1'000'000, &truncated);
    if (!ladder) {
        *why = "ladder incomplete";
        return adj;
    }
    adj.ell_min = ladder->first;
    adj.witnesses = ladder->second;
    why->clear();
    return adj;
}

} // namespace

BuildResult<Adjuster> build_simple_adjuster(const HostGraph &g, const VertexSet &avoid, int d_size,
                                            int m) {
    BuildResult<Adjuster> out;
    // Even cycles come for free on a two-colored host; otherwise hunt in the
    // bipartite max-cut subgraph so the two arcs differ by exactly 2.
    const HostGraph *hunt = &g;
    HostGraph cut;
    if (!g.has_bipartition()) {
        cut = max_cut_bipartite(g);
        hunt = &cut;
    }
    auto cycle = find_shortest_cycle(*hunt, avoid);
    if (!cycle) {
        out.stage = "cycle search";
        out.detail = "no cycle";
        return out;
    }
    if (static_cast<int>(cycle->size()) % 2 != 0) {
        out.stage = "cycle search";
        out.detail = "odd cycle from a two-colored hunt graph";
        return out;
    }
    if (static_cast<int>(cycle->size()) - 2 > 10 * m) {
        out.stage = "cycle search";
        out.detail = "shortest cycle too long for the center budget";
        return out;
    }
    std::string why;
    for (int rot = 0; rot < static_cast<int>(cycle->size()); ++rot) {
        Adjuster adj = assemble_simple(g, *cycle, rot, d_size, m, avoid, &why);
        if (!why.empty())
            continue;
        auto verdict = validate_gadget(g, adj);
        if (verdict.valid)
            return BuildResult<Adjuster>{std::move(adj), "", ""};
        why = verdict.violated_clause;
    }
    out.stage = "assembly";
    out.detail = why.empty() ? "no rotation produced a valid adjuster" : why;
    return out;
}

BuildResult<Adjuster> chain_adjusters(const HostGraph &g, const VertexSet &avoid, int d_size,
                                      int m, int r) {
    if (r < 1)
        throw std::invalid_argument("chain_adjusters: r >= 1 required");
    BuildResult<Adjuster> out;
    auto first = build_simple_adjuster(g, avoid, d_size, m);
    if (!first) {
        out.stage = "stage 1/" + std::to_string(r) + " " + first.stage;
        out.detail = first.detail;
        return out;
    }
    Adjuster cur = std::move(*first.value);
    for (int stage = 2; stage <= r; ++stage) {
        VertexSet cur_all = cur.all_vertices();
        auto next = build_simple_adjuster(g, avoid.unite(cur_all), d_size, m);
        if (!next) {
            out.stage = "stage " + std::to_string(stage) + "/" + std::to_string(r) + " " +
                        next.stage;
            out.detail = next.detail + " (achieved k=" + std::to_string(cur.k) + ")";
            return out;
        }
        Adjuster nxt = std::move(*next.value);
        // Connect the two v1-ends; the connector path joins the center set,
        // so it must stay clear of both kept ends and both center sets.
        VertexSet blocked = avoid.unite(cur.center).unite(nxt.center)
                                .unite(cur.f2.vertices).unite(nxt.f2.vertices);
        auto mid = bfs_shortest_path(g, cur.f1.vertices, nxt.f1.vertices, blocked, m);
        if (!mid) {
            out.stage = "stage " + std::to_string(stage) + " connector";
            out.detail = "no short path between the spare ends (achieved k=" +
                         std::to_string(cur.k) + ")";
            return out;
        }
        // Extend to the cores inside the expansions.
        auto extend_inside = [&](const Expansion &e, Vertex from,
                                 const VertexSet &off_limits) -> std::optional<Path> {
            if (from == e.center)
                return Path({from});
            VertexSet blocked_in =
                VertexSet::full(g.vertex_count()).minus(e.vertices).unite(off_limits);
            return bfs_shortest_path(g, VertexSet::single(from), VertexSet::single(e.center),
                                     blocked_in, g.vertex_count());
        };
        VertexSet mid_verts(std::vector<Vertex>(mid->vertices().begin(), mid->vertices().end()));
        auto left = extend_inside(cur.f1, mid->front(),
                                  mid_verts.minus(VertexSet::single(mid->front())));
        auto right = extend_inside(nxt.f1, mid->back(),
                                   mid_verts.minus(VertexSet::single(mid->back())));
        if (!left || !right) {
            out.stage = "stage " + std::to_string(stage) + " connector";
            out.detail = "could not extend the connector to a core";
            return out;
        }
        Path connector = left->reversed().concat(*mid).concat(*right);
        audit::note_path(g, connector);
        // Composed adjuster: ends f2/f2, centers plus the whole connector.
        Adjuster merged;
        merged.v1 = cur.v2;
        merged.v2 = nxt.v2;
        merged.f1 = cur.f2;
        merged.f2 = nxt.f2;
        merged.f1.center = cur.v2;
        merged.f2.center = nxt.v2;
        VertexSet conn_set(
            std::vector<Vertex>(connector.vertices().begin(), connector.vertices().end()));
        merged.center = cur.center.unite(nxt.center).unite(conn_set);
        merged.d_size = d_size;
        merged.radius = m;
        merged.k = cur.k + nxt.k;
        bool truncated = false;
        auto ladder =
            compute_ladder(g, merged.center, merged.v1, merged.v2, merged.k, 4'000'000, &truncated);
        if (!ladder) {
            out.stage = "stage " + std::to_string(stage) + " ladder";
            out.detail = truncated ? "ladder search out of budget" : "composed ladder incomplete";
            return out;
        }
        merged.ell_min = ladder->first;
        merged.witnesses = ladder->second;
        cur = std::move(merged);
        if (cur.center.size() > 10 * m * cur.k) {
            out.stage = "stage " + std::to_string(stage) + " size";
            out.detail = "center set exceeded 10mk";
            return out;
        }
    }
    auto verdict = validate_gadget(g, cur);
    if (!verdict.valid) {
        out.stage = "validation";
        out.detail = verdict.violated_clause;
        return out;
    }
    return BuildResult<Adjuster>{std::move(cur), "", ""};
}

BuildResult<Octopus> build_octopus(const HostGraph &g, const VertexSet &avoid, int r1, int r2,
                                   int r3, int r4) {
    BuildResult<Octopus> out;
    std::vector<Adjuster> pool;
    VertexSet pool_avoid = avoid;
    int pool_target = r3 + 2;
    for (int i = 0; i < pool_target; ++i) {
        auto adj = build_simple_adjuster(g, pool_avoid, r1, r2);
        if (!adj)
            break;
        pool_avoid = pool_avoid.unite(adj.value->all_vertices());
        pool.push_back(std::move(*adj.value));
    }
    if (pool.empty()) {
        out.stage = "pool";
        out.detail = "no simple adjuster available";
        return out;
    }
    Octopus oct;
    oct.core = pool.front();
    oct.end_index = 0;
    oct.r1 = r1;
    oct.r2 = r2;
    oct.r3 = r3;
    oct.r4 = r4;
    VertexSet all_centers = oct.core.center;
    for (std::size_t i = 1; i < pool.size(); ++i)
        all_centers = all_centers.unite(pool[i].center);
    const VertexSet &r_set = oct.core.end(0).vertices;
    VertexSet link_used;
    for (std::size_t i = 1; i < pool.size() && static_cast<int>(oct.family.size()) < r3; ++i) {
        VertexSet ends = pool[i].f1.vertices.unite(pool[i].f2.vertices);
        VertexSet blocked = avoid.unite(all_centers).unite(link_used);
        auto link = bfs_shortest_path(g, r_set.minus(link_used), ends.minus(link_used), blocked,
                                      r4);
        if (!link)
            continue;
        audit::note_path(g, *link);
        for (Vertex v : link->vertices())
            link_used.insert(v);
        oct.links.push_back(std::move(*link));
        oct.family.push_back(pool[i]);
    }
    if (static_cast<int>(oct.family.size()) < r3) {
        out.stage = "linking";
        out.detail = "connected " + std::to_string(oct.family.size()) + " of " +
                     std::to_string(r3) + " adjusters";
        return out;
    }
    auto verdict = validate_gadget(g, oct);
    if (!verdict.valid) {
        out.stage = "validation";
        out.detail = verdict.violated_clause;
        return out;
    }
    return BuildResult<Octopus>{std::move(oct), "", ""};
}

namespace {

struct WalkSearch {
    const HostGraph &g;
    const VertexSet &blocked; // hard exclusions
    const VertexSet &z2;
    int lo, hi;
    long long budget;
    long long steps = 0;
    std::vector<Vertex> walk;
    std::vector<char> on_walk;
    std::optional<Path> result;
    int best_total = -1;

    bool landing_total(int &len_out, Path &land_out) {
        VertexSet walk_block = blocked;
        for (std::size_t i = 0; i + 1 < walk.size(); ++i)
            walk_block.insert(walk[i]);
        auto land = bfs_shortest_path(g, VertexSet::single(walk.back()), z2, walk_block,
                                      g.vertex_count());
        if (!land)
            return false;
        len_out = static_cast<int>(walk.size()) - 1 + land->length();
        land_out = std::move(*land);
        return true;
    }

    bool search() {
        if (++steps > budget)
            return false;
        int total;
        Path land;
        if (!landing_total(total, land))
            return false; // dead branch: cannot reach z2 from here
        if (best_total < 0 || std::abs(total - lo) < std::abs(best_total - lo))
            best_total = total;
        if (total >= lo && total <= hi) {
            Path walk_path(walk);
            result = walk_path.concat(land);
            return true;
        }
        if (total > hi)
            return false; // totals only grow along this branch
        for (Vertex nxt : g.neighbors(walk.back())) {
            if (blocked.contains(nxt) || on_walk[static_cast<std::size_t>(nxt)] ||
                z2.contains(nxt))
                continue;
            on_walk[static_cast<std::size_t>(nxt)] = 1;
            walk.push_back(nxt);
            if (search())
                return true;
            walk.pop_back();
            on_walk[static_cast<std::size_t>(nxt)] = 0;
            if (steps > budget)
                return false;
        }
        return false;
    }
};

} // namespace

AdjustConnectResult adjust_connect(const HostGraph &g, const VertexSet &avoid, const VertexSet &z1,
                                   const VertexSet &z2, const Expansion &i1, const Expansion &i2,
                                   int ell, int window, long long budget) {
    AdjustConnectResult out;
    out.window_low = ell;
    out.window_high = ell + window;
    if (!z1.disjoint_from(z2)) {
        out.miss_reason = "Z1 and Z2 overlap";
        return out;
    }
    if (!i1.vertices.disjoint_from(i2.vertices)) {
        out.miss_reason = "expansions overlap";
        return out;
    }
    VertexSet zs = z1.unite(z2);
    if (!i1.vertices.disjoint_from(zs) || !i2.vertices.disjoint_from(zs)) {
        out.miss_reason = "expansions intersect the endpoint sets";
        return out;
    }
    // P: Z1 to i1's center, keeping clear of everything Q will need.
    VertexSet p_block = avoid.unite(z2).unite(i2.vertices);
    auto p = bfs_shortest_path(g, z1, VertexSet::single(i1.center), p_block, g.vertex_count());
    if (!p) {
        out.miss_reason = "no path from Z1 to the first center";
        return out;
    }
    audit::note_path(g, *p);
    int lo_q = std::max(1, ell - p->length());
    int hi_q = ell + window - p->length();
    if (hi_q < 1) {
        out.miss_reason = "first path already exceeds the window";
        return out;
    }
    VertexSet p_verts(std::vector<Vertex>(p->vertices().begin(), p->vertices().end()));
    VertexSet q_block = avoid.unite(z1).unite(i1.vertices).unite(p_verts);
    if (g.has_bipartition()) {
        // Parity of any q-length is fixed per landing side; check the window
        // admits at least one feasible value.
        bool feasible = false;
        for (Vertex z : z2) {
            int par = g.side(i2.center) == g.side(z) ? 0 : 1;
            for (int L = lo_q; L <= hi_q; ++L)
                if (L % 2 == par)
                    feasible = true;
        }
        if (!feasible) {
            out.miss_reason = "parity-infeasible window";
            return out;
        }
    }
    WalkSearch search{g, q_block, z2, lo_q, hi_q, budget, 0, {}, {}, std::nullopt, -1};
    search.on_walk.assign(static_cast<std::size_t>(g.vertex_count()), 0);
    search.walk.push_back(i2.center);
    search.on_walk[static_cast<std::size_t>(i2.center)] = 1;
    if (!search.search()) {
        out.miss_reason = "window miss; best achieved q-length " +
                          std::to_string(search.best_total) + " for [" + std::to_string(lo_q) +
                          "," + std::to_string(hi_q) + "]";
        out.total_length = search.best_total >= 0 ? search.best_total + p->length() : -1;
        return out;
    }
    Path q = search.result->reversed(); // orient Z2 -> center
    audit::note_path(g, q);
    out.total_length = p->length() + q.length();
    out.p = std::move(*p);
    out.q = std::move(q);
    return out;
}

namespace {

nlohmann::ordered_json paths_json(const std::vector<Path> &paths) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto &p : paths)
        arr.push_back(p.vertices());
    return arr;
}

nlohmann::ordered_json expansion_json(const Expansion &e) {
    return {{"center", e.center}, {"size", e.declared_size}, {"radius", e.radius},
            {"vertices", e.vertices.ids()}};
}

nlohmann::ordered_json unit_json(const Unit &u) {
    nlohmann::ordered_json j;
    j["core"] = u.core;
    j["h"] = {u.h1, u.h2, u.h3};
    j["branches"] = paths_json(u.branches);
    auto &stars = j["stars"] = nlohmann::ordered_json::array();
    for (const auto &s : u.stars)
        stars.push_back({{"center", s.center}, {"leaves", s.leaves}});
    j["interior"] = u.interior().ids();
    j["exterior"] = u.exterior().ids();
    return j;
}

nlohmann::ordered_json adjuster_json(const Adjuster &a) {
    nlohmann::ordered_json j;
    j["v1"] = a.v1;
    j["v2"] = a.v2;
    j["end1"] = expansion_json(a.f1);
    j["end2"] = expansion_json(a.f2);
    j["center"] = a.center.ids();
    j["params"] = {a.d_size, a.radius, a.k};
    j["ell_min"] = a.ell_min;
    j["witnesses"] = paths_json(a.witnesses);
    return j;
}

} // namespace

namespace {

std::vector<Path> paths_from_json(const nlohmann::json &arr) {
    std::vector<Path> out;
    for (const auto &p : arr)
        out.emplace_back(p.get<std::vector<Vertex>>());
    return out;
}

Expansion expansion_from_json(const nlohmann::json &j) {
    Expansion e;
    e.center = j.at("center").get<Vertex>();
    e.declared_size = j.at("size").get<int>();
    e.radius = j.at("radius").get<int>();
    e.vertices = VertexSet(j.at("vertices").get<std::vector<Vertex>>());
    return e;
}

Unit unit_from_json(const nlohmann::json &j) {
    Unit u;
    u.core = j.at("core").get<Vertex>();
    auto h = j.at("h").get<std::vector<int>>();
    if (h.size() != 3)
        throw std::invalid_argument("gadget json: unit h must have three entries");
    u.h1 = h[0];
    u.h2 = h[1];
    u.h3 = h[2];
    u.branches = paths_from_json(j.at("branches"));
    for (const auto &s : j.at("stars")) {
        Star star;
        star.center = s.at("center").get<Vertex>();
        star.leaves = s.at("leaves").get<std::vector<Vertex>>();
        u.stars.push_back(std::move(star));
    }
    return u;
}

Adjuster adjuster_from_json(const nlohmann::json &j) {
    Adjuster a;
    a.v1 = j.at("v1").get<Vertex>();
    a.v2 = j.at("v2").get<Vertex>();
    a.f1 = expansion_from_json(j.at("end1"));
    a.f2 = expansion_from_json(j.at("end2"));
    a.center = VertexSet(j.at("center").get<std::vector<Vertex>>());
    auto params = j.at("params").get<std::vector<int>>();
    if (params.size() != 3)
        throw std::invalid_argument("gadget json: adjuster params must have three entries");
    a.d_size = params[0];
    a.radius = params[1];
    a.k = params[2];
    a.ell_min = j.at("ell_min").get<int>();
    a.witnesses = paths_from_json(j.at("witnesses"));
    return a;
}

} // namespace

GadgetRecord gadget_from_json(const std::string &text) {
    auto j = nlohmann::json::parse(text);
    std::string tag = j.at("tag").get<std::string>();
    if (tag == "expansion")
        return expansion_from_json(j.at("expansion"));
    if (tag == "unit")
        return unit_from_json(j.at("unit"));
    if (tag == "web") {
        const auto &w = j.at("web");
        Web web;
        web.core = w.at("core").get<Vertex>();
        auto h = w.at("h").get<std::vector<int>>();
        if (h.size() != 4)
            throw std::invalid_argument("gadget json: web h must have four entries");
        web.h0 = h[0];
        web.h1 = h[1];
        web.h2 = h[2];
        web.h3 = h[3];
        web.branches = paths_from_json(w.at("branches"));
        for (const auto &u : w.at("units"))
            web.units.push_back(unit_from_json(u));
        return web;
    }
    if (tag == "adjuster")
        return adjuster_from_json(j.at("adjuster"));
    if (tag == "octopus") {
        const auto &o = j.at("octopus");
        Octopus oct;
        oct.core = adjuster_from_json(o.at("core"));
        oct.end_index = o.at("end_index").get<int>();
        auto params = o.at("params").get<std::vector<int>>();
        if (params.size() != 4)
            throw std::invalid_argument("gadget json: octopus params must have four entries");
        oct.r1 = params[0];
        oct.r2 = params[1];
        oct.r3 = params[2];
        oct.r4 = params[3];
        for (const auto &a : o.at("family"))
            oct.family.push_back(adjuster_from_json(a));
        oct.links = paths_from_json(o.at("links"));
        return oct;
    }
    throw std::invalid_argument("gadget json: unknown tag " + tag);
}

std::string gadget_to_json(const GadgetRecord &record) {
    nlohmann::ordered_json j;
    std::visit(
        [&](const auto &gadget) {
            using T = std::decay_t<decltype(gadget)>;
            if constexpr (std::is_same_v<T, Expansion>) {
                j["tag"] = "expansion";
                j["expansion"] = expansion_json(gadget);
            } else if constexpr (std::is_same_v<T, Unit>) {
                j["tag"] = "unit";
                j["unit"] = unit_json(gadget);
            } else if constexpr (std::is_same_v<T, Web>) {
                j["tag"] = "web";
                j["web"]["core"] = gadget.core;
                j["web"]["h"] = {gadget.h0, gadget.h1, gadget.h2, gadget.h3};
                j["web"]["branches"] = paths_json(gadget.branches);
                auto &units = j["web"]["units"] = nlohmann::ordered_json::array();
                for (const auto &u : gadget.units)
                    units.push_back(unit_json(u));
                j["web"]["center_set"] = gadget.center_set().ids();
                j["web"]["interior"] = gadget.interior().ids();
                j["web"]["exterior"] = gadget.exterior().ids();
            } else if constexpr (std::is_same_v<T, Adjuster>) {
                j["tag"] = "adjuster";
                j["adjuster"] = adjuster_json(gadget);
            } else {
                j["tag"] = "octopus";
                j["octopus"]["core"] = adjuster_json(gadget.core);
                j["octopus"]["end_index"] = gadget.end_index;
                j["octopus"]["params"] = {gadget.r1, gadget.r2, gadget.r3, gadget.r4};
                auto &family = j["octopus"]["family"] = nlohmann::ordered_json::array();
                for (const auto &a : gadget.family)
                    family.push_back(adjuster_json(a));
                j["octopus"]["links"] = paths_json(gadget.links);
            }
        },
        record);
    return j.dump(2) + "\n";
}

} // namespace subforge
