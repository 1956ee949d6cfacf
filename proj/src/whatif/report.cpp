#include "webdep/whatif/report.hpp"

#include <ostream>

#include <json.hpp>

#include "webdep/util/percent.hpp"

namespace webdep {

void write_failure_json(const DependencyGraph& graph, const FailureResult& r, std::ostream& out) {
  using nlohmann::ordered_json;
  auto keys = [&](const std::vector<NodeId>& ids) {
    ordered_json a = ordered_json::array();
    for (NodeId id : ids) a.push_back(to_string(graph.node(id).key()));
    return a;
  };
  ordered_json doc;
  doc["removed"] = keys(r.removed);
  doc["failed"] = keys(r.failed);
  doc["affected_websites"] = keys(r.affected_websites);
  doc["affected_count"] = r.affected_count();
  doc["websites"] = graph.websites_by_rank().size();
  out << doc.dump(2, ' ', false, nlohmann::json::error_handler_t::replace) << '\n';
}

Table collateral_table(const DependencyGraph& graph, const std::vector<CollateralEntry>& report) {
  using K = Table::Kind;
  Table t({{"rank", K::kInteger},
           {"domain", K::kText},
           {"max_damage", K::kInteger},
           {"vector", K::kText},
           {"target", K::kText},
           {"damage_pct", K::kPercent},
           {"threat", K::kText}});
  const auto total = graph.websites_by_rank().size();
  for (const auto& e : report) {
    std::string vector, target, threat;
    if (e.argmax) {
      vector = std::to_string(static_cast<int>(*e.argmax)) + ":" + std::string(to_token(*e.argmax));
      threat = threat_of(*e.argmax);
      for (const auto& v : e.vectors) {
        if (v.vector == *e.argmax) target = to_string(graph.node(v.target).key());
      }
    }
    t.add_row({std::to_string(*graph.rank(e.website)), graph.node(e.website).name, std::to_string(e.max_damage),
               vector, target, percent_cell(Ratio{e.max_damage, total}), threat});
  }
  return t;
}

Table histogram_table(const CollateralHistogram& h) {
  using K = Table::Kind;
  Table t({{"damage", K::kInteger},
           {"bucket", K::kInteger},
           {"first_rank", K::kInteger},
           {"last_rank", K::kInteger},
           {"websites", K::kInteger}});
  for (std::size_t l = 0; l < h.levels.size(); ++l) {
    for (std::size_t b = 0; b < h.counts[l].size(); ++b) {
      t.add_row({std::to_string(h.levels[l]), std::to_string(b + 1), std::to_string(b * h.bucket_size + 1),
                 std::to_string((b + 1) * h.bucket_size), std::to_string(h.counts[l][b])});
    }
  }
  return t;
}

}  // namespace webdep
