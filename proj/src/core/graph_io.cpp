#include "webdep/core/graph_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include <fmt/format.h>

#include "webdep/util/error.hpp"

namespace webdep {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

ServiceType type_token(std::string_view tok, std::size_t line) {
  if (auto t = parse_service_type(tok)) return *t;
  throw Error(ErrorCode::kParseError, fmt::format("unknown service type '{}'", tok), line);
}

std::string dot_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

}  // namespace

void write_graph(const DependencyGraph& graph, std::ostream& out) {
  out << kGraphFormatHeader << '\n';
  for (NodeId id = 0; id < graph.node_count(); ++id) {
    const auto& n = graph.node(id);
    out << "node " << to_token(n.type) << ' ' << n.name;
    if (auto r = graph.rank(id)) out << ' ' << *r;
    out << '\n';
  }
  for (const auto& e : graph.edges()) {
    const auto& s = graph.node(e.source);
    const auto& t = graph.node(e.target);
    out << "edge " << to_token(s.type) << ' ' << s.name << ' ' << to_token(t.type) << ' '
        << t.name << '\n';
  }
}

std::string export_graph(const DependencyGraph& graph) {
  std::ostringstream out;
  write_graph(graph, out);
  return out.str();
}

DependencyGraph import_graph(std::istream& in) {
  DependencyGraph::Builder builder;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!header_seen) {
      if (line != kGraphFormatHeader) {
        throw Error(ErrorCode::kParseError,
                    fmt::format("expected header '{}'", kGraphFormatHeader), line_no);
      }
      header_seen = true;
      continue;
    }
    const auto tok = split_ws(line);
    if (tok.empty()) continue;
    try {
      if (tok[0] == "node" && (tok.size() == 3 || tok.size() == 4)) {
        const ServiceType t = type_token(tok[1], line_no);
        if (t == ServiceType::kWebsite) {
          std::uint32_t rank = 0;
          if (tok.size() != 4) {
            throw Error(ErrorCode::kParseError, "website node without rank", line_no);
          }
          auto [p, ec] = std::from_chars(tok[3].data(), tok[3].data() + tok[3].size(), rank);
          if (ec != std::errc{} || p != tok[3].data() + tok[3].size() || rank == 0) {
            throw Error(ErrorCode::kParseError, fmt::format("bad rank '{}'", tok[3]), line_no);
          }
          builder.add_website(tok[2], rank);
        } else {
          if (tok.size() != 3) {
            throw Error(ErrorCode::kParseError, "provider node with extra field", line_no);
          }
          builder.add_provider(t, tok[2]);
        }
      } else if (tok[0] == "edge" && tok.size() == 5) {
        builder.add_edge(NodeKey{type_token(tok[1], line_no), std::string(tok[2])},
                         NodeKey{type_token(tok[3], line_no), std::string(tok[4])});
      } else {
        throw Error(ErrorCode::kParseError, fmt::format("unrecognized line '{}'", line), line_no);
      }
    } catch (const Error& e) {
      if (e.line()) throw;
      throw Error(e.code(), e.what(), line_no);
    }
  }
  if (!header_seen) throw Error(ErrorCode::kParseError, "empty graph file", 1);
  return builder.build();
}

DependencyGraph import_graph_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, fmt::format("cannot open '{}'", path.string()));
  return import_graph(in);
}

std::string export_dot(const DependencyGraph& graph) {
  std::ostringstream out;
  out << "digraph webdep {\n  rankdir=LR;\n";
  for (NodeId id = 0; id < graph.node_count(); ++id) {
    const auto& n = graph.node(id);
    std::string_view shape = "ellipse";
    switch (n.type) {
      case ServiceType::kWebsite: shape = "box"; break;
      case ServiceType::kDnsProvider: shape = "hexagon"; break;
      case ServiceType::kCdnProvider: shape = "diamond"; break;
      case ServiceType::kOcspProvider: shape = "octagon"; break;
    }
    const auto name = dot_escape(n.name);
    out << fmt::format("  \"{}:{}\" [label=\"{}\", shape={}];\n", to_token(n.type), name,
                       name, shape);
  }
  for (const auto& e : graph.edges()) {
    const auto& s = graph.node(e.source);
    const auto& t = graph.node(e.target);
    out << fmt::format("  \"{}:{}\" -> \"{}:{}\";\n", to_token(s.type), dot_escape(s.name),
                       to_token(t.type), dot_escape(t.name));
  }
  out << "}\n";
  return out.str();
}

}  // namespace webdep
