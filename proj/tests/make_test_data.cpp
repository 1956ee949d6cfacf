// Regenerates tests/data: the synthetic 100-site corpus and its transcript,
// the graph and snapshot fixtures, and the pipeline goldens.
//
// Usage: make_test_data   (writes into the source tree)

#include <filesystem>
#include <fstream>
#include <iostream>

#include <fmt/format.h>

#include "corpus_world.hpp"
#include "fixtures.hpp"
#include "pipeline.hpp"
#include "webdep/cli/app_config.hpp"
#include "webdep/core/graph_io.hpp"
#include "webdep/probes/scan.hpp"
#include "webdep/probes/transcript.hpp"
#include "webdep/util/error.hpp"

namespace fs = std::filesystem;
using namespace webdep;
using namespace webdep::test;

namespace {

void write_text(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
}

void make_corpus(const fs::path& data) {
  const CorpusWorld corpus = make_corpus_world();
  const fs::path dir = data / "corpus";
  fs::remove_all(dir);

  std::string csv = "# rank,domain\n";
  for (const auto& d : corpus.domains) csv += fmt::format("{},{}\n", d.rank, d.domain);
  write_text(dir / "domains.csv", csv);

  // One probe at a time, so the transcript order is fixed.
  AppConfig cfg = load_app_config(data / "config" / "webdep.json");
  cfg.probe.max_inflight = 1;
  SimTransport sim(corpus.world);
  RecordingTransport recorder(sim);
  const ScanResult result = scan(corpus.domains, cfg.probe, cfg.classification, recorder, "synthetic corpus");
  recorder.transcript().save(dir / "transcript");
  std::cout << fmt::format("corpus: {} sites, {} requests, {} of {} probes failed\n", corpus.domains.size(),
                           sim.requests(), result.probes.failed, result.probes.attempted);
}

void make_fixtures(const fs::path& data) {
  const fs::path dir = data / "fixtures";
  fs::remove_all(dir);
  write_text(dir / "redundant_dns.graph.txt", export_graph(redundant_dns_graph()));
  write_text(dir / "ocsp_chain.graph.txt", export_graph(ocsp_chain_graph()));
  write_text(dir / "amplification.graph.txt", export_graph(amplification_graph()));
  const SnapshotPair incident = incident_pair();
  save_snapshot(incident.before, dir / "incident_before.jsonl");
  save_snapshot(incident.after, dir / "incident_after.jsonl");
}

void make_goldens(const fs::path& data) {
  const fs::path dir = data / "golden";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string failure = run_pipeline(dir);
  if (!failure.empty()) throw Error(ErrorCode::kIo, failure);
  std::cout << fmt::format("golden: {} files\n", list_files(dir).size());
}

}  // namespace

int main() {
  const fs::path data = test_data_dir();
  try {
    make_corpus(data);
    make_fixtures(data);
    make_goldens(data);
  } catch (const std::exception& e) {
    std::cerr << "make_test_data: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
