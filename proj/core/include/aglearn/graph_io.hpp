#pragma once

#include <iosfwd>
#include <string>

#include "aglearn/admg.hpp"

namespace aglearn {

/// Text format used across the project:
///
///   # optional comments
///   nodes: 4
///   0 -> 1
///   1 <-> 2
///
/// One edge per line, `i -> j` directed, `i <-> j` bidirected with the
/// smaller index first. Node indices are 0-based.
std::string to_graph_text(const Admg& g);
Admg from_graph_text(const std::string& text);

/// JSON mirror: {"nodes": d, "directed": [[i,j],...], "bidirected": [[i,j],...]}.
std::string to_graph_json(const Admg& g);
Admg from_graph_json(const std::string& json_text);

void save_graph(const Admg& g, const std::string& path);  // .json or text by extension
Admg load_graph(const std::string& path);

}  // namespace aglearn
