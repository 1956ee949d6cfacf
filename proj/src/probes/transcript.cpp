#include "webdep/probes/transcript.hpp"

#include <fstream>

#include <fmt/format.h>
#include <json.hpp>

#include "webdep/util/error.hpp"

namespace webdep {

namespace {

constexpr std::string_view kFormat = "webdep-transcript v1";

using nlohmann::json;

std::optional<RrType> parse_rr_type(std::string_view token) {
  for (RrType t : {RrType::kA, RrType::kNs, RrType::kCname, RrType::kSoa, RrType::kAaaa}) {
    if (to_token(t) == token) return t;
  }
  return std::nullopt;
}

[[noreturn]] void malformed(std::size_t index, std::string_view what) {
  throw Error(ErrorCode::kMalformedRecord, fmt::format("transcript entry {}: {}", index, what));
}

}  // namespace

void Transcript::save(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  std::ofstream bin(dir / "records.bin", std::ios::binary);
  if (!bin) throw Error(ErrorCode::kIo, fmt::format("cannot write '{}'", (dir / "records.bin").string()));

  json index = json::array();
  std::uint64_t offset = 0;
  for (const auto& e : entries) {
    const auto len = static_cast<std::uint32_t>(e.exchange.payload.size());
    const char prefix[4] = {static_cast<char>(len >> 24), static_cast<char>(len >> 16),
                            static_cast<char>(len >> 8), static_cast<char>(len)};
    bin.write(prefix, 4);
    bin.write(reinterpret_cast<const char*>(e.exchange.payload.data()), len);
    const auto& r = e.request;
    json j{{"key", r.key()},
           {"kind", to_token(r.kind)},
           {"host", r.host},
           {"status", to_token(e.exchange.status)},
           {"note", e.exchange.note},
           {"at", format_rfc3339(e.exchange.at)},
           {"offset", offset},
           {"length", len}};
    if (r.kind == RequestKind::kDns) j["qtype"] = to_token(r.qtype);
    if (r.kind != RequestKind::kDns) {
      j["address"] = r.address;
      j["port"] = r.port;
    }
    if (r.kind == RequestKind::kHttp) j["url"] = r.url;
    index.push_back(std::move(j));
    offset += 4 + len;
  }
  if (!bin) throw Error(ErrorCode::kIo, "failed writing records.bin");

  const json doc{{"format", kFormat},
                 {"recorded_at", format_rfc3339(recorded_at)},
                 {"entries", std::move(index)}};
  std::ofstream idx(dir / "index.json");
  if (!idx) throw Error(ErrorCode::kIo, fmt::format("cannot write '{}'", (dir / "index.json").string()));
  idx << doc.dump(1, ' ', false, json::error_handler_t::replace) << '\n';
}

Transcript Transcript::load(const std::filesystem::path& dir) {
  std::ifstream idx(dir / "index.json");
  if (!idx) throw Error(ErrorCode::kIo, fmt::format("cannot open '{}'", (dir / "index.json").string()));
  const json doc = json::parse(idx, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw Error(ErrorCode::kMalformedRecord, "transcript index is not a JSON object");
  }
  if (doc.value("format", "") != kFormat) {
    throw Error(ErrorCode::kSchemaVersionMismatch, "transcript index has an unsupported format");
  }

  std::ifstream bin_in(dir / "records.bin", std::ios::binary);
  if (!bin_in) throw Error(ErrorCode::kIo, fmt::format("cannot open '{}'", (dir / "records.bin").string()));
  const std::vector<std::uint8_t> bin((std::istreambuf_iterator<char>(bin_in)),
                                      std::istreambuf_iterator<char>());

  Transcript t;
  try {
    t.recorded_at = parse_rfc3339(doc.at("recorded_at").get<std::string>());
    std::size_t i = 0;
    for (const auto& j : doc.at("entries")) {
      TranscriptEntry e;
      auto& r = e.request;
      const auto kind = parse_request_kind(j.at("kind").get<std::string>());
      if (!kind) malformed(i, "unknown kind");
      r.kind = *kind;
      r.host = j.at("host").get<std::string>();
      if (r.kind == RequestKind::kDns) {
        const auto qt = parse_rr_type(j.at("qtype").get<std::string>());
        if (!qt) malformed(i, "unknown qtype");
        r.qtype = *qt;
      } else {
        r.address = j.at("address").get<std::string>();
        r.port = j.at("port").get<std::uint16_t>();
      }
      if (r.kind == RequestKind::kHttp) r.url = j.at("url").get<std::string>();

      const auto status = parse_exchange_status(j.at("status").get<std::string>());
      if (!status) malformed(i, "unknown status");
      e.exchange.status = *status;
      e.exchange.note = j.at("note").get<std::string>();
      e.exchange.at = parse_rfc3339(j.at("at").get<std::string>());

      const auto offset = j.at("offset").get<std::uint64_t>();
      const auto length = j.at("length").get<std::uint32_t>();
      if (offset > bin.size() || bin.size() - offset < 4ull + length) malformed(i, "payload out of range");
      std::uint32_t prefix = 0;
      for (int k = 0; k < 4; ++k) prefix = (prefix << 8) | bin[offset + k];
      if (prefix != length) malformed(i, "length prefix disagrees with index");
      const auto begin = bin.begin() + static_cast<std::ptrdiff_t>(offset + 4);
      e.exchange.payload.assign(begin, begin + length);
      t.entries.push_back(std::move(e));
      ++i;
    }
  } catch (const json::exception& ex) {
    throw Error(ErrorCode::kMalformedRecord, fmt::format("transcript index: {}", ex.what()));
  }
  return t;
}

RecordingTransport::RecordingTransport(Transport& inner) : inner_(inner), started_at_(inner.now()) {}

Exchange RecordingTransport::exchange(const ProbeRequest& request) {
  Exchange e = inner_.exchange(request);
  std::lock_guard lock(mu_);
  entries_.push_back({request, e});
  return e;
}

Transcript RecordingTransport::transcript() const {
  std::lock_guard lock(mu_);
  return Transcript{started_at_, entries_};
}

ReplayTransport::ReplayTransport(const Transcript& transcript) : recorded_at_(transcript.recorded_at) {
  for (const auto& e : transcript.entries) queues_[e.request.key()].push_back(e.exchange);
}

Exchange ReplayTransport::exchange(const ProbeRequest& request) {
  const std::string key = request.key();
  std::lock_guard lock(mu_);
  const auto it = queues_.find(key);
  if (it == queues_.end() || it->second.empty()) {
    throw Error(ErrorCode::kTranscriptExhausted, fmt::format("no recorded answer for '{}'", key));
  }
  Exchange e = std::move(it->second.front());
  it->second.pop_front();
  return e;
}

std::size_t ReplayTransport::remaining() const {
  std::lock_guard lock(mu_);
  std::size_t n = 0;
  for (const auto& [key, q] : queues_) n += q.size();
  return n;
}

}  // namespace webdep
