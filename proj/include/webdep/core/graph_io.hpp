#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "webdep/core/graph.hpp"

namespace webdep {

inline constexpr std::string_view kGraphFormatHeader = "webdep-graph v1";

// Line format, canonically sorted:
//   webdep-graph v1
//   node <type> <name> [<rank>]      (rank present exactly on website nodes)
//   edge <src-type> <src> <dst-type> <dst>
std::string export_graph(const DependencyGraph& graph);
void write_graph(const DependencyGraph& graph, std::ostream& out);

// Throws Error(kParseError, line) on malformed input and kInvalidGraph /
// kDanglingReference / kDuplicate* when the content violates the model.
DependencyGraph import_graph(std::istream& in);
DependencyGraph import_graph_file(const std::filesystem::path& path);

// Graphviz rendering; node ids are "<type>:<name>".
std::string export_dot(const DependencyGraph& graph);

}  // namespace webdep
