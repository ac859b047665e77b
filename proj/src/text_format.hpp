#pragma once

#include <string>
#include <utility>
#include <vector>

#include "dp/graph.hpp"

// Shared line-oriented parsing helpers for the graph and cover file formats.
namespace dp::detail {

// (1-based line number, whitespace tokens); blank and '#' lines dropped.
using TokenLines = std::vector<std::pair<int, std::vector<std::string>>>;

TokenLines tokenize_lines(const std::string& text);
int parse_int(const std::string& tok, int lineno, const char* what);

// Consumes a 'graph'/'multigraph' header plus its edge lines starting at lines[pos].
Graph parse_graph_tokens(const TokenLines& lines, size_t& pos);

}  // namespace dp::detail
