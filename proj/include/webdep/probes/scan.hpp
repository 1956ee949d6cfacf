#pragma once

#include <chrono>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "webdep/classify/config.hpp"
#include "webdep/ingest/domain_list.hpp"
#include "webdep/ingest/snapshot.hpp"
#include "webdep/probes/probe_config.hpp"
#include "webdep/probes/transport.hpp"

namespace webdep {

// Spaces out connections (tcp, tls, http) to the same host by at least
// `interval`. DNS queries go to the recursive resolver and are not gated.
class PoliteTransport final : public Transport {
 public:
  PoliteTransport(Transport& inner, std::chrono::milliseconds interval);

  Exchange exchange(const ProbeRequest& request) override;
  Timestamp now() override { return inner_.now(); }

 private:
  Transport& inner_;
  std::chrono::milliseconds interval_;
  std::mutex mu_;
  std::map<std::string, std::chrono::steady_clock::time_point, std::less<>> next_slot_;
};

// Measured vs failed probe counts over a snapshot's websites.
struct ProbeTally {
  std::size_t attempted = 0;
  std::size_t failed = 0;
};
ProbeTally tally(const WebsiteObservation& obs);
ProbeTally tally(const Snapshot& snapshot);

struct ScanResult {
  Snapshot snapshot;
  ProbeTally probes;
  bool partial() const noexcept { return probes.failed > 0; }
};

// Probes every domain with at most max_inflight probes in flight, then runs
// the second-stage provider probes:
//   OCSP providers: NS of the responder's registered domain and the CNAME
//   chains of its responder hosts;
//   CDN providers (found in website or responder chains): NS of the
//   registered domain most often seen among the chain names that matched.
// Per-domain failures are recorded, never thrown. Transport errors such as
// kTranscriptExhausted propagate.
ScanResult scan(const std::vector<DomainListEntry>& domains, const ProbeConfig& probe_config,
                const ClassificationConfig& classification_config, Transport& transport,
                std::string vantage_note = {});

}  // namespace webdep
