#pragma once

#include "subforge/graph.hpp"

#include <iosfwd>
#include <string>

namespace subforge {

/// Edge-list text format:
///   first line "n m" (optionally followed by the token "bipartite"),
///   when bipartite: one line of n side bits (0/1),
///   then m lines "u v" with 0 <= u < v < n.
/// Parsing is strict: loops, duplicates, bad counts and side violations are
/// rejected with a ParseError.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

HostGraph read_edge_list(std::istream &in);
HostGraph read_edge_list_file(const std::string &path);
std::string write_edge_list(const HostGraph &g);
void write_edge_list_file(const HostGraph &g, const std::string &path);

} // namespace subforge
