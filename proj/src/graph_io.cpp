#include "subforge/graph_io.hpp"

#include <fstream>
#include <sstream>

namespace subforge {

HostGraph read_edge_list(std::istream &in) {
    std::string header;
    if (!std::getline(in, header))
        throw ParseError("edge list: missing header line");
    std::istringstream hs(header);
    long long n = -1, m = -1;
    std::string flag;
    if (!(hs >> n >> m))
        throw ParseError("edge list: header must start with 'n m'");
    bool bipartite = false;
    if (hs >> flag) {
        if (flag != "bipartite")
            throw ParseError("edge list: unknown header token '" + flag + "'");
        bipartite = true;
    }
    std::string trailing;
    if (hs >> trailing)
        throw ParseError("edge list: trailing tokens in header");
    if (n < 0 || m < 0)
        throw ParseError("edge list: negative counts");
    if (n > 5'000'000)
        throw ParseError("edge list: vertex count too large");

    std::optional<std::vector<std::int8_t>> side;
    if (bipartite) {
        std::string side_line;
        if (!std::getline(in, side_line))
            throw ParseError("edge list: missing side-assignment line");
        std::istringstream ss(side_line);
        std::vector<std::int8_t> s;
        int bit;
        while (ss >> bit) {
            if (bit != 0 && bit != 1)
                throw ParseError("edge list: side bits must be 0/1");
            s.push_back(static_cast<std::int8_t>(bit));
        }
        if (static_cast<long long>(s.size()) != n)
            throw ParseError("edge list: side-assignment length mismatch");
        side = std::move(s);
    }

    std::vector<std::pair<Vertex, Vertex>> edges;
    edges.reserve(static_cast<std::size_t>(m));
    std::string line;
    while (static_cast<long long>(edges.size()) < m) {
        if (!std::getline(in, line))
            throw ParseError("edge list: expected " + std::to_string(m) + " edges, got " +
                             std::to_string(edges.size()));
        if (line.empty())
            continue;
        std::istringstream es(line);
        long long u, v;
        if (!(es >> u >> v))
            throw ParseError("edge list: malformed edge line '" + line + "'");
        std::string extra;
        if (es >> extra)
            throw ParseError("edge list: trailing tokens on edge line");
        if (u >= v)
            throw ParseError("edge list: edges must satisfy u < v");
        if (u < 0 || v >= n)
            throw ParseError("edge list: endpoint out of range");
        edges.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
    }
    while (std::getline(in, line)) {
        if (!line.empty())
            throw ParseError("edge list: unexpected trailing content");
    }
    try {
        return HostGraph(static_cast<int>(n), std::move(edges), std::move(side));
    } catch (const std::invalid_argument &e) {
        throw ParseError(std::string("edge list: ") + e.what());
    }
}

HostGraph read_edge_list_file(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open graph file: " + path);
    return read_edge_list(in);
}

std::string write_edge_list(const HostGraph &g) {
    std::ostringstream os;
    os << g.vertex_count() << ' ' << g.edge_count();
    if (g.has_bipartition())
        os << " bipartite";
    os << '\n';
    if (g.has_bipartition()) {
        for (int v = 0; v < g.vertex_count(); ++v)
            os << (v ? " " : "") << g.side(v);
        os << '\n';
    }
    for (auto [u, v] : g.edges())
        os << u << ' ' << v << '\n';
    return os.str();
}

void write_edge_list_file(const HostGraph &g, const std::string &path) {
    std::ofstream out(path);
    if (!out)
        throw ParseError("cannot open output file: " + path);
    out << write_edge_list(g);
}

} // namespace subforge
