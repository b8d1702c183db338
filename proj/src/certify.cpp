#include "subforge/certify.hpp"

#include "json.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace subforge {

Verdict verify_subdivision(const HostGraph &g, const PatternGraph &h,
                           const SubdivisionCertificate &cert) {
    if (cert.mode.ell < 0)
        return Verdict::fail("mode: negative ell");

    // Branch map: total, injective, in range.
    std::set<Vertex> images;
    for (Vertex x = 0; x < h.vertex_count(); ++x) {
        auto it = cert.branch_map.find(x);
        if (it == cert.branch_map.end())
            return Verdict::fail("branch_map: pattern vertex " + std::to_string(x) + " unmapped");
        Vertex img = it->second;
        if (img < 0 || img >= g.vertex_count())
            return Verdict::fail("branch_map: image of " + std::to_string(x) + " out of range");
        if (!images.insert(img).second)
            return Verdict::fail("branch_map: not injective at image " + std::to_string(img));
    }
    for (const auto &[x, img] : cert.branch_map)
        if (x < 0 || x >= h.vertex_count())
            return Verdict::fail("branch_map: unknown pattern vertex " + std::to_string(x));

    // Edge coverage: exactly the edges of H.
    auto h_edges = h.edges();
    if (cert.edge_paths.size() != h_edges.size())
        return Verdict::fail("paths: expected " + std::to_string(h_edges.size()) + " paths, got " +
                             std::to_string(cert.edge_paths.size()));
    for (auto e : h_edges)
        if (cert.edge_paths.find(e) == cert.edge_paths.end())
            return Verdict::fail("paths: edge " + std::to_string(e.first) + "-" +
                                 std::to_string(e.second) + " has no path");

    std::set<Vertex> occupied; // interiors across all paths
    for (const auto &[edge, path] : cert.edge_paths) {
        auto [x, y] = edge;
        std::string tag = std::to_string(x) + "-" + std::to_string(y);
        if (x < 0 || y < 0 || x >= h.vertex_count() || y >= h.vertex_count() || x >= y)
            return Verdict::fail("paths: malformed edge key " + tag);
        if (!h.adjacent(x, y))
            return Verdict::fail("paths: " + tag + " is not an edge of the pattern");
        std::string why;
        if (!path.valid_in(g, &why))
            return Verdict::fail("path " + tag + ": " + why);
        Vertex gx = cert.branch_map.at(x);
        Vertex gy = cert.branch_map.at(y);
        bool straight = path.front() == gx && path.back() == gy;
        bool reversed = path.front() == gy && path.back() == gx;
        if (!straight && !reversed)
            return Verdict::fail("path " + tag + ": endpoints do not match branch images");
        if (cert.mode.kind == CertMode::balanced) {
            if (path.length() != cert.mode.ell + 1)
                return Verdict::fail("path " + tag + ": length " + std::to_string(path.length()) +
                                     " != " + std::to_string(cert.mode.ell + 1));
        } else {
            if (path.length() > cert.mode.ell + 1)
                return Verdict::fail("path " + tag + ": length " + std::to_string(path.length()) +
                                     " exceeds " + std::to_string(cert.mode.ell + 1));
        }
        for (Vertex v : path.interior()) {
            if (images.count(v))
                return Verdict::fail("path " + tag + ": interior hits branch image " +
                                     std::to_string(v));
            if (!occupied.insert(v).second)
                return Verdict::fail("path " + tag + ": interior vertex " + std::to_string(v) +
                                     " reused");
        }
    }
    return Verdict::ok();
}

namespace {

/// All simple x,y-paths in g avoiding `blocked`, with length constraint;
/// emitted in lexicographic vertex order for determinism.
void enumerate_paths(const HostGraph &g, Vertex from, Vertex to, int min_len, int max_len,
                     std::vector<char> &blocked, std::vector<Vertex> &cur, long long &nodes,
                     const std::function<bool(const Path &)> &sink, bool &stop) {
    if (stop)
        return;
    ++nodes;
    Vertex at = cur.back();
    int len = static_cast<int>(cur.size()) - 1;
    if (at == to) {
        if (len >= min_len && sink(Path(cur)))
            stop = true;
        return;
    }
    if (len >= max_len)
        return;
    for (Vertex nxt : g.neighbors(at)) {
        if (blocked[static_cast<std::size_t>(nxt)])
            continue;
        if (nxt == to && len + 1 < min_len)
            continue;
        blocked[static_cast<std::size_t>(nxt)] = 1;
        cur.push_back(nxt);
        enumerate_paths(g, from, to, min_len, max_len, blocked, cur, nodes, sink, stop);
        cur.pop_back();
        blocked[static_cast<std::size_t>(nxt)] = 0;
        if (stop)
            return;
    }
}

struct OracleSearch {
    const HostGraph &g;
    const PatternGraph &h;
    CertMode mode;
    std::vector<HEdge> h_edges;
    std::vector<Vertex> branch; // h vertex -> g vertex or -1
    std::vector<char> used;     // g vertex occupied (image or interior)
    long long nodes = 0;
    std::optional<SubdivisionCertificate> found;

    bool assign_edges(std::size_t idx, std::map<HEdge, Path> &acc) {
        if (idx == h_edges.size()) {
            SubdivisionCertificate cert;
            for (Vertex x = 0; x < h.vertex_count(); ++x)
                cert.branch_map[x] = branch[static_cast<std::size_t>(x)];
            cert.edge_paths = acc;
            cert.mode = mode;
            found = std::move(cert);
            return true;
        }
        auto [x, y] = h_edges[idx];
        Vertex gx = branch[static_cast<std::size_t>(x)];
        Vertex gy = branch[static_cast<std::size_t>(y)];
        int min_len = mode.kind == CertMode::balanced ? mode.ell + 1 : 1;
        int max_len = mode.ell + 1;
        std::vector<char> blocked = used;
        blocked[static_cast<std::size_t>(gx)] = 1;
        blocked[static_cast<std::size_t>(gy)] = 0; // allowed as terminal only
        std::vector<Vertex> cur{gx};
        bool stop = false;
        bool ok = false;
        enumerate_paths(g, gx, gy, min_len, max_len, blocked, cur, nodes,
                        [&](const Path &p) {
                            for (Vertex v : p.interior())
                                used[static_cast<std::size_t>(v)] = 1;
                            acc.emplace(h_edges[idx], p);
                            ok = assign_edges(idx + 1, acc);
                            if (!ok) {
                                acc.erase(h_edges[idx]);
                                for (Vertex v : p.interior())
                                    used[static_cast<std::size_t>(v)] = 0;
                            }
                            return ok;
                        },
                        stop);
        return ok;
    }

    bool assign_branch(int x) {
        if (x == h.vertex_count()) {
            std::map<HEdge, Path> acc;
            return assign_edges(0, acc);
        }
        for (Vertex v = 0; v < g.vertex_count(); ++v) {
            if (used[static_cast<std::size_t>(v)])
                continue;
            ++nodes;
            branch[static_cast<std::size_t>(x)] = v;
            used[static_cast<std::size_t>(v)] = 1;
            if (assign_branch(x + 1))
                return true;
            used[static_cast<std::size_t>(v)] = 0;
            branch[static_cast<std::size_t>(x)] = -1;
        }
        return false;
    }
};

} // namespace

OracleResult brute_force_subdivision(const HostGraph &g, const PatternGraph &h, CertMode mode,
                                     const OracleGuard &guard) {
    if (g.vertex_count() > guard.max_host)
        throw std::invalid_argument("brute_force_subdivision: host exceeds guard");
    if (h.vertex_count() > guard.max_pattern)
        throw std::invalid_argument("brute_force_subdivision: pattern exceeds guard");
    if (mode.ell + 1 > guard.max_path_len)
        throw std::invalid_argument("brute_force_subdivision: path length exceeds guard");
    OracleSearch search{g, h, mode, h.edges(),
                        std::vector<Vertex>(static_cast<std::size_t>(h.vertex_count()), -1),
                        std::vector<char>(static_cast<std::size_t>(g.vertex_count()), 0),
                        0, std::nullopt};
    bool ok = search.assign_branch(0);
    OracleResult out;
    out.nodes_explored = search.nodes;
    if (ok)
        out.certificate = std::move(search.found);
    out.exhausted = true;
    return out;
}

std::string certificate_to_json(const SubdivisionCertificate &cert) {
    nlohmann::ordered_json j;
    j["mode"] = cert.mode.kind == CertMode::balanced ? "balanced" : "bounded";
    j["ell"] = cert.mode.ell;
    auto &bm = j["branch_map"] = nlohmann::ordered_json::array();
    for (const auto &[x, v] : cert.branch_map)
        bm.push_back({x, v});
    auto &paths = j["paths"] = nlohmann::ordered_json::array();
    for (const auto &[edge, path] : cert.edge_paths) {
        nlohmann::ordered_json p;
        p["edge"] = {edge.first, edge.second};
        p["vertices"] = path.vertices();
        paths.push_back(std::move(p));
    }
    return j.dump(2) + "\n";
}

SubdivisionCertificate certificate_from_json(const std::string &text) {
    auto j = nlohmann::json::parse(text);
    SubdivisionCertificate cert;
    std::string mode = j.at("mode").get<std::string>();
    if (mode == "balanced")
        cert.mode.kind = CertMode::balanced;
    else if (mode == "bounded")
        cert.mode.kind = CertMode::bounded;
    else
        throw std::invalid_argument("certificate: unknown mode " + mode);
    cert.mode.ell = j.at("ell").get<int>();
    for (const auto &pair : j.at("branch_map")) {
        if (!pair.is_array() || pair.size() != 2)
            throw std::invalid_argument("certificate: malformed branch_map entry");
        cert.branch_map[pair[0].get<Vertex>()] = pair[1].get<Vertex>();
    }
    for (const auto &p : j.at("paths")) {
        auto edge = p.at("edge");
        if (!edge.is_array() || edge.size() != 2)
            throw std::invalid_argument("certificate: malformed edge key");
        HEdge e{edge[0].get<Vertex>(), edge[1].get<Vertex>()};
        cert.edge_paths[e] = Path(p.at("vertices").get<std::vector<Vertex>>());
    }
    return cert;
}

} // namespace subforge
