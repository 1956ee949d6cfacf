#pragma once

#include <deque>
#include <filesystem>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "webdep/probes/transport.hpp"

namespace webdep {

struct TranscriptEntry {
  ProbeRequest request;
  Exchange exchange;
  friend bool operator==(const TranscriptEntry&, const TranscriptEntry&) = default;
};

// Ordered log of every request a scan made and what came back.
//
// On disk a transcript is a directory holding `records.bin` (payloads, each a
// 4-byte big-endian length followed by the bytes) and `index.json` (one entry
// per record: the request fields, status, note, timestamp and the payload's
// offset/length in records.bin).
struct Transcript {
  Timestamp recorded_at{};
  std::vector<TranscriptEntry> entries;

  void save(const std::filesystem::path& dir) const;
  // Throws kIo, kSchemaVersionMismatch, kMalformedRecord.
  static Transcript load(const std::filesystem::path& dir);
  friend bool operator==(const Transcript&, const Transcript&) = default;
};

// Passes requests to another transport and logs each exchange.
class RecordingTransport final : public Transport {
 public:
  explicit RecordingTransport(Transport& inner);

  Exchange exchange(const ProbeRequest& request) override;
  Timestamp now() override { return started_at_; }

  Transcript transcript() const;

 private:
  Transport& inner_;
  Timestamp started_at_;
  mutable std::mutex mu_;
  std::vector<TranscriptEntry> entries_;
};

// Answers requests from a transcript and never touches the network.
// Repeated requests with the same key are answered in recorded order; a
// request with no remaining answer throws kTranscriptExhausted.
class ReplayTransport final : public Transport {
 public:
  explicit ReplayTransport(const Transcript& transcript);

  Exchange exchange(const ProbeRequest& request) override;
  Timestamp now() override { return recorded_at_; }

  std::size_t remaining() const;

 private:
  Timestamp recorded_at_;
  mutable std::mutex mu_;
  std::map<std::string, std::deque<Exchange>, std::less<>> queues_;
};

}  // namespace webdep
