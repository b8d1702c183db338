#include "subforge/path.hpp"

#include <atomic>
#include <set>
#include <stdexcept>

namespace subforge {

std::vector<Vertex> Path::interior() const {
    if (vertices_.size() <= 2)
        return {};
    return std::vector<Vertex>(vertices_.begin() + 1, vertices_.end() - 1);
}

Path Path::reversed() const {
    return Path(std::vector<Vertex>(vertices_.rbegin(), vertices_.rend()));
}

Path Path::concat(const Path &other) const {
    if (empty())
        return other;
    if (other.empty())
        return *this;
    if (back() != other.front())
        throw std::invalid_argument("Path::concat: endpoint mismatch");
    std::vector<Vertex> joined = vertices_;
    joined.insert(joined.end(), other.vertices_.begin() + 1, other.vertices_.end());
    return Path(std::move(joined));
}

bool Path::valid_in(const HostGraph &g, std::string *why) const {
    if (vertices_.empty()) {
        if (why)
            *why = "empty path";
        return false;
    }
    std::set<Vertex> seen;
    for (Vertex v : vertices_) {
        if (v < 0 || v >= g.vertex_count()) {
            if (why)
                *why = "vertex " + std::to_string(v) + " out of range";
            return false;
        }
        if (!seen.insert(v).second) {
            if (why)
                *why = "repeated vertex " + std::to_string(v);
            return false;
        }
    }
    for (std::size_t i = 0; i + 1 < vertices_.size(); ++i) {
        if (!g.adjacent(vertices_[i], vertices_[i + 1])) {
            if (why)
                *why = "non-edge " + std::to_string(vertices_[i]) + "-" +
                       std::to_string(vertices_[i + 1]);
            return false;
        }
    }
    return true;
}

void PathSystem::add(Path p) {
    for (Vertex v : p.interior())
        interior_.insert(v);
    paths_.push_back(std::move(p));
}

VertexSet PathSystem::all_vertices() const {
    std::vector<Vertex> all;
    for (const auto &p : paths_)
        all.insert(all.end(), p.vertices().begin(), p.vertices().end());
    return VertexSet(std::move(all));
}

bool PathSystem::internally_disjoint(std::string *why) const {
    std::set<Vertex> occupied;
    for (std::size_t i = 0; i < paths_.size(); ++i) {
        for (Vertex v : paths_[i].interior()) {
            if (!occupied.insert(v).second) {
                if (why)
                    *why = "interior vertex " + std::to_string(v) + " shared (path " +
                           std::to_string(i) + ")";
                return false;
            }
        }
    }
    // Interiors must also avoid every other path's endpoints.
    for (const auto &p : paths_) {
        if (p.empty())
            continue;
        if (occupied.count(p.front()) || occupied.count(p.back())) {
            if (why)
                *why = "endpoint of a path lies inside another path";
            return false;
        }
    }
    return true;
}

namespace audit {

namespace {
std::atomic<long long> g_checked{0};
std::atomic<long long> g_violations{0};
std::atomic<long long> g_structure{0};
} // namespace

void note_path(const HostGraph &g, const Path &p) {
    if (p.empty())
        return;
    if (!p.valid_in(g))
        g_structure.fetch_add(1, std::memory_order_relaxed);
    if (!g.has_bipartition())
        return;
    g_checked.fetch_add(1, std::memory_order_relaxed);
    int parity_sides = g.side(p.front()) == g.side(p.back()) ? 0 : 1;
    if (p.length() % 2 != parity_sides)
        g_violations.fetch_add(1, std::memory_order_relaxed);
}

long long paths_checked() { return g_checked.load(); }
long long parity_violations() { return g_violations.load(); }
long long structure_violations() { return g_structure.load(); }
void reset() {
    g_checked = 0;
    g_violations = 0;
    g_structure = 0;
}

} // namespace audit

} // namespace subforge
