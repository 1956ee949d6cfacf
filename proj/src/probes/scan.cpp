#include "webdep/probes/scan.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <set>
#include <thread>

#include "webdep/classify/classify.hpp"
#include "webdep/probes/prober.hpp"
#include "webdep/util/error.hpp"
#include "webdep/util/url.hpp"

namespace webdep {

namespace {

// Runs fn(i) for i in [0, n) on up to `workers` threads. The first exception
// thrown by any call is rethrown after all threads finish.
template <class Fn>
void parallel_for(std::size_t n, std::uint32_t workers, Fn&& fn) {
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next.store(n);
      }
    }
  };
  const std::size_t count = std::min<std::size_t>(workers, n);
  {
    std::vector<std::jthread> pool;
    pool.reserve(count);
    for (std::size_t t = 0; t < count; ++t) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
}

bool dns_failed(const NsResult& ns) {
  return ns.status == DnsStatus::kTimeout || ns.status == DnsStatus::kError;
}

ProviderObservation probe_ocsp_provider(const ProbeContext& ctx, const std::string& label,
                                        const std::set<std::string>& hosts) {
  ProviderObservation obs;
  obs.provider_name = label;
  obs.provider_type = ServiceType::kOcspProvider;
  const std::string& first = *hosts.begin();
  obs.probed_host = ctx.psl.registered_domain(first).value_or(first);
  auto ns = probe_ns(ctx, obs.probed_host);
  obs.ns = std::move(ns.value);
  obs.probe_timestamps.emplace(probe_kind::kNs, ns.at);

  CdnEvidence ev;
  ev.fetch_status = FetchStatus::kNotAttempted;
  Timestamp at{};
  for (const auto& h : hosts) {
    auto chain = cname_chain(ctx, h);
    if (ev.chains.empty()) at = chain.at;
    ev.chains.push_back(std::move(chain.value));
  }
  obs.cdn = std::move(ev);
  obs.probe_timestamps.emplace(probe_kind::kCdn, at);
  return obs;
}

}  // namespace

PoliteTransport::PoliteTransport(Transport& inner, std::chrono::milliseconds interval)
    : inner_(inner), interval_(interval) {}

Exchange PoliteTransport::exchange(const ProbeRequest& request) {
  if (request.kind != RequestKind::kDns && interval_.count() > 0) {
    // The slot is claimed when the request is actually released, so a late
    // wake-up cannot shorten the gap to the next request.
    for (;;) {
      std::chrono::steady_clock::time_point wait_until;
      {
        std::lock_guard lock(mu_);
        auto& next = next_slot_[request.host];
        const auto now = std::chrono::steady_clock::now();
        if (now >= next) {
          next = now + interval_;
          break;
        }
        wait_until = next;
      }
      std::this_thread::sleep_until(wait_until);
    }
  }
  return inner_.exchange(request);
}

ProbeTally tally(const WebsiteObservation& obs) {
  ProbeTally t;
  auto count = [&](bool failed) {
    ++t.attempted;
    if (failed) ++t.failed;
  };
  count(dns_failed(obs.ns));
  count(obs.https == TriState::kProbeFailed);
  if (obs.https == TriState::kYes) {
    count(obs.certificate.status != CertStatus::kOk);
    count(!obs.stapling || *obs.stapling == TriState::kProbeFailed);
  }
  count(obs.cdn.fetch_status == FetchStatus::kFailed);
  return t;
}

ProbeTally tally(const Snapshot& snapshot) {
  ProbeTally t;
  for (const auto& w : snapshot.website_observations) {
    const auto one = tally(w);
    t.attempted += one.attempted;
    t.failed += one.failed;
  }
  return t;
}

ScanResult scan(const std::vector<DomainListEntry>& domains, const ProbeConfig& probe_config,
                const ClassificationConfig& classification_config, Transport& transport,
                std::string vantage_note) {
  probe_config.validate();
  PoliteTransport polite(transport, probe_config.per_host_min_interval);
  const ProbeContext ctx{polite, probe_config, classification_config.public_suffix_rules};

  ScanResult result;
  Snapshot& snap = result.snapshot;
  snap.created_at = transport.now();
  snap.vantage_note = std::move(vantage_note);
  snap.website_observations.resize(domains.size());
  parallel_for(domains.size(), probe_config.max_inflight, [&](std::size_t i) {
    snap.website_observations[i] = probe_website(ctx, domains[i].domain, domains[i].rank);
  });

  // Stage 2a: OCSP responders.
  std::map<std::string, std::set<std::string>> ocsp_hosts;
  for (const auto& w : snap.website_observations) {
    for (const auto& u : w.certificate.ocsp_urls) {
      const auto url = parse_url(u);
      if (!url) continue;
      try {
        ocsp_hosts[ocsp_provider_of_url(u, classification_config)].insert(url->host);
      } catch (const Error&) {
        // Unusable responder URLs are reported by classification.
      }
    }
  }
  std::vector<std::pair<std::string, std::set<std::string>>> ocsp_jobs(ocsp_hosts.begin(),
                                                                        ocsp_hosts.end());
  std::vector<ProviderObservation> ocsp_obs(ocsp_jobs.size());
  parallel_for(ocsp_jobs.size(), probe_config.max_inflight, [&](std::size_t i) {
    ocsp_obs[i] = probe_ocsp_provider(ctx, ocsp_jobs[i].first, ocsp_jobs[i].second);
  });

  // Stage 2b: CDN providers, located through the chain names that matched.
  std::map<std::string, std::map<std::string, std::size_t>> cdn_sites;
  auto note_name = [&](const std::string& name) {
    for (const auto& label : cdn_labels_for_name(name, classification_config)) {
      const auto site = ctx.psl.registered_domain(name);
      if (site) ++cdn_sites[label][*site];
    }
  };
  auto note_chains = [&](const CdnEvidence& ev) {
    for (const auto& c : ev.chains) {
      note_name(c.host);
      for (const auto& t : c.targets) note_name(t);
    }
  };
  for (const auto& w : snap.website_observations) note_chains(w.cdn);
  for (const auto& o : ocsp_obs) note_chains(*o.cdn);

  std::vector<std::pair<std::string, std::string>> cdn_jobs;  // (label, probed host)
  for (const auto& [label, sites] : cdn_sites) {
    const auto best = std::max_element(sites.begin(), sites.end(), [](const auto& a, const auto& b) {
      return a.second < b.second;  // first maximum wins, so ties go to the smaller name
    });
    cdn_jobs.emplace_back(label, best->first);
  }
  std::vector<ProviderObservation> cdn_obs(cdn_jobs.size());
  parallel_for(cdn_jobs.size(), probe_config.max_inflight, [&](std::size_t i) {
    ProviderObservation& o = cdn_obs[i];
    o.provider_name = cdn_jobs[i].first;
    o.provider_type = ServiceType::kCdnProvider;
    o.probed_host = cdn_jobs[i].second;
    auto ns = probe_ns(ctx, o.probed_host);
    o.ns = std::move(ns.value);
    o.probe_timestamps.emplace(probe_kind::kNs, ns.at);
  });

  snap.provider_observations = std::move(cdn_obs);
  snap.provider_observations.insert(snap.provider_observations.end(),
                                    std::make_move_iterator(ocsp_obs.begin()),
                                    std::make_move_iterator(ocsp_obs.end()));
  result.probes = tally(snap);
  return result;
}

}  // namespace webdep
