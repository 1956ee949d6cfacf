#include "webdep/analysis/report.hpp"

#include <fmt/format.h>

namespace webdep {

namespace {

using K = Table::Kind;

std::string num(std::uint64_t v) { return std::to_string(v); }

std::string names(const DependencyGraph& graph, std::span<const NodeId> ids) {
  std::string out;
  for (NodeId id : ids) {
    if (!out.empty()) out += ' ';
    out += graph.node(id).name;
  }
  return out;
}

}  // namespace

Table coverage_table(const CoverageReport& r) {
  Table t({{"position", K::kText},
           {"provider", K::kText},
           {"dependents", K::kInteger},
           {"share_pct", K::kPercent},
           {"cumulative_pct", K::kPercent}});
  std::size_t pos = 0;
  for (const auto& row : r.rows) {
    t.add_row({num(++pos), row.provider, num(row.dependents), percent_cell(row.share), percent_cell(row.cumulative)});
  }
  t.add_row({"multiple", "", num(r.multiple_share.numerator), percent_cell(r.multiple_share), ""});
  t.add_row({"none", "", num(r.none_share.numerator), percent_cell(r.none_share), ""});
  t.add_row({"websites", "", num(r.websites), "", percent_cell(r.topk_share)});
  return t;
}

Table robustness_table(ServiceType provider_type, const std::vector<RobustnessBucket>& buckets) {
  Table t({{"provider_type", K::kText},
           {"max_rank", K::kInteger},
           {"users", K::kInteger},
           {"fragile", K::kInteger},
           {"fragile_pct", K::kPercent}});
  for (const auto& b : buckets) {
    t.add_row({std::string(to_token(provider_type)), num(b.max_rank), num(b.users), num(b.fragile),
               percent_cell(b.fragile_share)});
  }
  return t;
}

Table prevalence_table(const Prevalence& p) {
  Table t({{"measure", K::kText},
           {"count", K::kInteger},
           {"denominator", K::kInteger},
           {"share_pct", K::kPercent},
           {"excluded", K::kInteger}});
  auto row = [&](const char* name, const Share& s) {
    t.add_row({name, num(s.ratio.numerator), num(s.ratio.denominator), percent_cell(s.ratio), num(s.excluded)});
  };
  row("any_third_party", p.any_third_party);
  row("dns_third_party", p.dns);
  row("cdn_third_party", p.cdn);
  row("ocsp_third_party", p.ocsp);
  row("https", p.https);
  row("stapling", p.stapling);
  return t;
}

Table fragility_table(const std::vector<FragilityRow>& rows) {
  Table t({{"dependency", K::kText},
           {"total", K::kInteger},
           {"fragile", K::kInteger},
           {"fragile_pct", K::kPercent}});
  for (const auto& r : rows) {
    t.add_row({fmt::format("{}->{}", to_token(r.source), to_token(r.target)), num(r.total), num(r.fragile),
               percent_cell(Ratio{r.fragile, r.total})});
  }
  return t;
}

Table amplification_table(const std::vector<AmplificationRow>& rows) {
  Table t({{"provider", K::kText},
           {"direct_exclusive", K::kInteger},
           {"direct_any", K::kInteger},
           {"direct_plus_transitive", K::kInteger}});
  for (const auto& r : rows) {
    t.add_row({r.provider, num(r.direct_exclusive), num(r.direct_any), num(r.direct_plus_transitive)});
  }
  return t;
}

Table exclusivity_table(const DependencyGraph& graph, const ExclusivityView& view) {
  Table t({{"rank", K::kInteger},
           {"domain", K::kText},
           {"dns", K::kText},
           {"dns_providers", K::kText},
           {"cdn", K::kText},
           {"cdn_providers", K::kText},
           {"ocsp", K::kText},
           {"ocsp_providers", K::kText}});
  for (NodeId w : graph.websites_by_rank()) {
    std::vector<std::string> row{num(*graph.rank(w)), graph.node(w).name};
    for (ServiceType type : kProviderTypes) {
      row.emplace_back(to_token(view.status(w, type)));
      row.push_back(names(graph, graph.out(w, type)));
    }
    t.add_row(std::move(row));
  }
  return t;
}

}  // namespace webdep
