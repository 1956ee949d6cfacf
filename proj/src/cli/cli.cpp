#include "webdep/cli/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "webdep/analysis/coverage.hpp"
#include "webdep/analysis/report.hpp"
#include "webdep/analysis/statistics.hpp"
#include "webdep/classify/build_graph.hpp"
#include "webdep/classify/classify.hpp"
#include "webdep/cli/app_config.hpp"
#include "webdep/core/graph_io.hpp"
#include "webdep/ingest/domain_list.hpp"
#include "webdep/probes/live_transport.hpp"
#include "webdep/probes/scan.hpp"
#include "webdep/probes/transcript.hpp"
#include "webdep/util/error.hpp"
#include "webdep/whatif/diff.hpp"
#include "webdep/whatif/report.hpp"

namespace webdep {

namespace {

namespace fs = std::filesystem;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string config;
  std::string out_dir;
  // inputs
  std::string graph;
  std::string snapshot;
  std::string classification;
  std::string domains;
  std::string transcript;
  std::string record;
  std::string vantage;
  std::vector<std::string> positional;
  // analysis knobs
  std::string type = "all";
  std::uint32_t topk = 10;
  std::string ranks;
  std::string mode = "direct-exclusive";
  std::vector<std::uint32_t> buckets;
  std::string format;
  std::vector<std::string> remove;
  std::uint32_t histogram = 0;
  std::uint32_t top_levels = 5;
  std::string provider;
  std::uint32_t limit = 0;
};

class Output {
 public:
  Output(const std::string& dir, std::ostream& out) : dir_(dir), out_(out) {
    if (!dir_.empty()) fs::create_directories(dir_);
  }

  template <class Fn>
  void emit(const std::string& file, Fn&& write) {
    if (dir_.empty()) {
      write(out_);
      return;
    }
    const fs::path path = fs::path(dir_) / file;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::kIo, fmt::format("cannot write '{}'", path.string()));
    write(f);
    if (!f) throw Error(ErrorCode::kIo, fmt::format("failed writing '{}'", path.string()));
  }

  void table(const std::string& stem, const Table& t, const std::string& format) {
    const bool json = format == "json";
    if (dir_.empty()) out_ << "## " << stem << '\n';
    emit(stem + (json ? ".json" : ".csv"), [&](std::ostream& o) { json ? t.write_json(o) : t.write_csv(o); });
  }

 private:
  std::string dir_;
  std::ostream& out_;
};

AppConfig config_of(const Options& o) {
  std::string path = o.config;
  if (path.empty()) {
    if (const char* env = std::getenv("WEBDEP_CONFIG")) path = env;
  }
  if (path.empty()) throw UsageError("no configuration: pass --config or set WEBDEP_CONFIG");
  return load_app_config(path);
}

// A graph from --graph, or built from --snapshot (classified on the fly
// unless --classification is given).
struct Inputs {
  DependencyGraph graph;
  std::optional<Snapshot> snapshot;
};

Inputs inputs_of(const Options& o) {
  if (o.graph.empty() == o.snapshot.empty()) throw UsageError("give exactly one of --graph or --snapshot");
  Inputs in;
  if (!o.graph.empty()) {
    in.graph = import_graph_file(o.graph);
    return in;
  }
  in.snapshot = load_snapshot(o.snapshot);
  const ClassificationResult c = o.classification.empty()
                                     ? classify(*in.snapshot, config_of(o).classification)
                                     : load_classification(o.classification);
  in.graph = build_graph(*in.snapshot, c);
  return in;
}

std::vector<ServiceType> types_of(const std::string& token) {
  if (token == "all") return {kProviderTypes.begin(), kProviderTypes.end()};
  const auto t = parse_service_type(token);
  if (!t || *t == ServiceType::kWebsite) throw UsageError(fmt::format("unknown provider type '{}'", token));
  return {*t};
}

RankRange range_of(const std::string& text) {
  if (text.empty()) return {};
  const auto dash = text.find('-');
  try {
    if (dash == std::string::npos) return RankRange{1, static_cast<std::uint32_t>(std::stoul(text))};
    return RankRange{static_cast<std::uint32_t>(std::stoul(text.substr(0, dash))),
                     static_cast<std::uint32_t>(std::stoul(text.substr(dash + 1)))};
  } catch (const std::exception&) {
    throw UsageError(fmt::format("bad rank range '{}'", text));
  }
}

std::vector<std::uint32_t> default_buckets(const DependencyGraph& g) {
  std::uint32_t max_rank = 0;
  for (NodeId w : g.websites_by_rank()) max_rank = std::max(max_rank, *g.rank(w));
  std::vector<std::uint32_t> out;
  for (std::uint64_t b = 10; out.empty() || out.back() < max_rank; b *= 10) {
    out.push_back(static_cast<std::uint32_t>(std::min<std::uint64_t>(b, 4'000'000'000u)));
  }
  return out;
}

int finish_scan(const ScanResult& r, const Options& o, std::ostream& out) {
  Output(o.out_dir, out).emit("snapshot.jsonl", [&](std::ostream& f) { write_snapshot(r.snapshot, f); });
  if (!o.out_dir.empty()) {
    out << fmt::format("{} websites, {} provider observations, {} of {} probes failed\n",
                       r.snapshot.website_observations.size(), r.snapshot.provider_observations.size(),
                       r.probes.failed, r.probes.attempted);
  }
  return r.partial() ? exit_code::kPartialScan : exit_code::kOk;
}

std::vector<DomainListEntry> domains_of(const Options& o) {
  if (o.domains.empty()) throw UsageError("--domains is required");
  auto list = load_domain_list(o.domains);
  if (o.limit > 0 && list.size() > o.limit) list.resize(o.limit);
  return list;
}

int cmd_scan(const Options& o, std::ostream& out) {
  const AppConfig cfg = config_of(o);
  const auto domains = domains_of(o);
  LiveTransport live(cfg.probe);
  if (o.record.empty()) return finish_scan(scan(domains, cfg.probe, cfg.classification, live, o.vantage), o, out);
  RecordingTransport recorder(live);
  const ScanResult r = scan(domains, cfg.probe, cfg.classification, recorder, o.vantage);
  recorder.transcript().save(o.record);
  return finish_scan(r, o, out);
}

int cmd_replay(const Options& o, std::ostream& out) {
  if (o.transcript.empty()) throw UsageError("--transcript is required");
  AppConfig cfg = config_of(o);
  // No server is contacted, so there is nothing to be polite to.
  cfg.probe.per_host_min_interval = std::chrono::milliseconds{0};
  const auto domains = domains_of(o);
  ReplayTransport replay(Transcript::load(o.transcript));
  return finish_scan(scan(domains, cfg.probe, cfg.classification, replay, o.vantage), o, out);
}

int cmd_classify(const Options& o, std::ostream& out) {
  if (o.snapshot.empty()) throw UsageError("--snapshot is required");
  const AppConfig cfg = config_of(o);
  const ClassificationResult c = classify(load_snapshot(o.snapshot), cfg.classification);
  Output output(o.out_dir, out);
  output.emit("classification.json", [&](std::ostream& f) { write_classification(c, f); });
  Table candidates({{"label", Table::Kind::kText},
                    {"customer_count", Table::Kind::kInteger},
                    {"evidence", Table::Kind::kText}});
  for (const auto& [label, v] : c.candidates()) {
    candidates.add_row({label, std::to_string(v.customer_count), v.evidence});
  }
  output.table("candidates", candidates, o.format);
  return exit_code::kOk;
}

int cmd_build(const Options& o, std::ostream& out) {
  const Inputs in = inputs_of(o);
  Output(o.out_dir, out).emit("graph.txt", [&](std::ostream& f) { write_graph(in.graph, f); });
  return exit_code::kOk;
}

int cmd_export(const Options& o, std::ostream& out) {
  const Inputs in = inputs_of(o);
  const std::string format = o.format.empty() ? "dot" : o.format;
  Output output(o.out_dir, out);
  if (format == "dot") {
    output.emit("graph.dot", [&](std::ostream& f) { f << export_dot(in.graph); });
  } else if (format == "text") {
    output.emit("graph.txt", [&](std::ostream& f) { write_graph(in.graph, f); });
  } else {
    throw UsageError(fmt::format("export format must be dot or text, not '{}'", format));
  }
  return exit_code::kOk;
}

int cmd_analyze(const Options& o, std::ostream& out) {
  const Inputs in = inputs_of(o);
  const auto types = types_of(o.type);
  const auto mode = parse_dependents_mode(o.mode);
  if (!mode) throw UsageError(fmt::format("unknown mode '{}'", o.mode));
  if (o.topk == 0) throw UsageError("--topk must be at least 1");
  const RankRange range = range_of(o.ranks);
  const auto buckets = o.buckets.empty() ? default_buckets(in.graph) : o.buckets;

  const GraphExclusivity view(in.graph);
  std::optional<SiteAttributeMap> attrs;
  if (in.snapshot) attrs = site_attributes(*in.snapshot);

  Output output(o.out_dir, out);
  const std::string format = o.format.empty() ? "csv" : o.format;
  if (attrs) output.table("prevalence", prevalence_table(prevalence(in.graph, *attrs)), format);
  output.table("exclusivity", exclusivity_table(in.graph, view), format);
  output.table("intra_tps_fragility", fragility_table(intra_tps_fragility(in.graph, view)), format);
  for (ServiceType t : types) {
    const std::string name(to_token(t));
    output.table("coverage_" + name, coverage_table(topk_coverage(in.graph, view, t, o.topk, range, *mode)), format);
    output.table("amplification_" + name, amplification_table(amplification(in.graph, view, t, range)), format);
    if (t == ServiceType::kOcspProvider && !attrs) continue;  // needs stapling results
    output.table("robustness_" + name,
                 robustness_table(t, robustness_by_rank(in.graph, view, t, buckets, attrs ? &*attrs : nullptr)),
                 format);
  }
  return exit_code::kOk;
}

int cmd_whatif(const Options& o, std::ostream& out) {
  if (o.remove.empty()) throw UsageError("--remove is required");
  const Inputs in = inputs_of(o);
  const FailureResult r = simulate_failure(in.graph, resolve_providers(in.graph, o.remove));
  Output(o.out_dir, out).emit("whatif.json", [&](std::ostream& f) { write_failure_json(in.graph, r, f); });
  return exit_code::kOk;
}

int cmd_collateral(const Options& o, std::ostream& out) {
  const Inputs in = inputs_of(o);
  const GraphExclusivity view(in.graph);
  const auto report = collateral_report(in.graph, view);
  const std::string format = o.format.empty() ? "csv" : o.format;
  Output output(o.out_dir, out);
  output.table("collateral", collateral_table(in.graph, report), format);
  if (o.histogram > 0) {
    output.table("collateral_histogram",
                 histogram_table(collateral_rank_histogram(in.graph, report, o.histogram, o.top_levels)), format);
  }
  if (o.out_dir.empty()) out << "# " << kCollateralCaveat << '\n';
  return exit_code::kOk;
}

int cmd_diff(const Options& o, std::ostream& out) {
  if (o.provider.empty()) throw UsageError("--provider is required");
  if (o.positional.size() != 2) throw UsageError("diff takes two snapshots: BEFORE AFTER");
  const AppConfig cfg = config_of(o);
  const Snapshot before = load_snapshot(o.positional[0]);
  const Snapshot after = load_snapshot(o.positional[1]);
  const DependencyGraph before_graph = build_graph(before, classify(before, cfg.classification));
  const DiffReport r = snapshot_diff(before_graph, after, classify(after, cfg.classification), o.provider);
  Output(o.out_dir, out).emit("diff.json", [&](std::ostream& f) { write_diff_report(r, f); });
  return exit_code::kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Measure and analyze third-party DNS, CDN and OCSP dependencies of websites.", "webdep"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--config", o.config, "Configuration file (default: $WEBDEP_CONFIG)");
  app.add_option("-o,--out-dir", o.out_dir, "Directory for output files (default: standard output)");

  auto graph_inputs = [&](CLI::App* s) {
    s->add_option("--graph", o.graph, "Graph file (text format)");
    s->add_option("--snapshot", o.snapshot, "Snapshot file (JSON Lines)");
    s->add_option("--classification", o.classification, "Classification file for --snapshot");
  };

  auto* scan_cmd = app.add_subcommand("scan", "Probe a ranked domain list and write a snapshot");
  scan_cmd->add_option("--domains", o.domains, "CSV of rank,domain")->required();
  scan_cmd->add_option("--limit", o.limit, "Only the first N domains");
  scan_cmd->add_option("--record", o.record, "Also save the probe transcript to this directory");
  scan_cmd->add_option("--vantage", o.vantage, "Free-text note on where the scan ran");

  auto* replay_cmd = app.add_subcommand("replay", "Re-run a scan from a recorded transcript");
  replay_cmd->add_option("--transcript", o.transcript, "Transcript directory")->required();
  replay_cmd->add_option("--domains", o.domains, "CSV of rank,domain")->required();
  replay_cmd->add_option("--limit", o.limit, "Only the first N domains");
  replay_cmd->add_option("--vantage", o.vantage, "Free-text note copied into the snapshot");

  auto* classify_cmd = app.add_subcommand("classify", "Classify providers seen in a snapshot");
  classify_cmd->add_option("--snapshot", o.snapshot, "Snapshot file")->required();
  classify_cmd->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  auto* build_cmd = app.add_subcommand("build", "Build the dependency graph");
  graph_inputs(build_cmd);

  auto* analyze_cmd = app.add_subcommand("analyze", "Coverage, robustness, prevalence and fragility reports");
  graph_inputs(analyze_cmd);
  analyze_cmd->add_option("--type", o.type, "dns, cdn, ocsp or all")->check(CLI::IsMember({"dns", "cdn", "ocsp", "all"}));
  analyze_cmd->add_option("--topk", o.topk, "Providers listed in coverage reports");
  analyze_cmd->add_option("--ranks", o.ranks, "Rank range FIRST-LAST or LAST");
  analyze_cmd->add_option("--mode", o.mode, "direct-exclusive, direct-any or direct-plus-transitive");
  analyze_cmd->add_option("--buckets", o.buckets, "Robustness bucket boundaries")->delimiter(',');
  analyze_cmd->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  auto* whatif_cmd = app.add_subcommand("whatif", "Simulate provider failures");
  graph_inputs(whatif_cmd);
  whatif_cmd->add_option("--remove", o.remove, "Providers to fail: NAME or TYPE:NAME")->delimiter(',')->required();

  auto* collateral_cmd = app.add_subcommand("collateral", "Collateral damage of attacking each website");
  graph_inputs(collateral_cmd);
  collateral_cmd->add_option("--histogram", o.histogram, "Also write a rank histogram with this bucket size");
  collateral_cmd->add_option("--top-levels", o.top_levels, "Damage levels in the histogram");
  collateral_cmd->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  auto* diff_cmd = app.add_subcommand("diff", "How one DNS provider's customers changed between snapshots");
  diff_cmd->add_option("--provider", o.provider, "DNS provider label")->required();
  diff_cmd->add_option("snapshots", o.positional, "BEFORE AFTER")->expected(2);

  auto* export_cmd = app.add_subcommand("export", "Export the graph for other tools");
  graph_inputs(export_cmd);
  export_cmd->add_option("--format", o.format, "dot or text")->check(CLI::IsMember({"dot", "text"}));

  for (auto* s : app.get_subcommands({})) s->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_code::kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_code::kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return exit_code::kUsage;
  }

  try {
    if (*scan_cmd) return cmd_scan(o, out);
    if (*replay_cmd) return cmd_replay(o, out);
    if (*classify_cmd) return cmd_classify(o, out);
    if (*build_cmd) return cmd_build(o, out);
    if (*analyze_cmd) return cmd_analyze(o, out);
    if (*whatif_cmd) return cmd_whatif(o, out);
    if (*collateral_cmd) return cmd_collateral(o, out);
    if (*diff_cmd) return cmd_diff(o, out);
    if (*export_cmd) return cmd_export(o, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return exit_code::kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::kData;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::kData;
  }
  return exit_code::kUsage;
}

}  // namespace webdep
