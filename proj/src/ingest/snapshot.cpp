#include "webdep/ingest/snapshot.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include <fmt/format.h>
#include <json.hpp>

#include "webdep/util/error.hpp"

namespace webdep {

using nlohmann::json;

namespace {

json to_json(const NsResult& ns) {
  return json{{"status", to_token(ns.status)}, {"nameservers", ns.nameservers}, {"note", ns.note}};
}

json to_json(const CdnEvidence& ev) {
  json chains = json::array();
  for (const auto& c : ev.chains) {
    chains.push_back(json{{"host", c.host},
                          {"targets", c.targets},
                          {"status", to_token(c.status)},
                          {"note", c.note}});
  }
  json headers = json::array();
  for (const auto& h : ev.headers) headers.push_back(json::array({h.name, h.value}));
  return json{{"chains", std::move(chains)},
              {"headers", std::move(headers)},
              {"fetch_status", to_token(ev.fetch_status)},
              {"final_url", ev.final_url},
              {"offsite_redirects", ev.offsite_redirects},
              {"note", ev.note}};
}

json to_json(const std::map<std::string, Timestamp, std::less<>>& ts) {
  json out = json::object();
  for (const auto& [k, v] : ts) out[k] = format_rfc3339(v);
  return out;
}

json to_json(const WebsiteObservation& o) {
  const auto& c = o.certificate;
  return json{{"record", "website"},
              {"domain", o.domain},
              {"rank", o.rank},
              {"ns", to_json(o.ns)},
              {"https", to_token(o.https)},
              {"https_note", o.https_note},
              {"certificate",
               json{{"status", to_token(c.status)},
                    {"ocsp_urls", c.ocsp_urls},
                    {"crl_urls", c.crl_urls},
                    {"issuer", c.issuer},
                    {"fingerprint", c.fingerprint},
                    {"note", c.note}}},
              {"stapling", o.stapling ? json(to_token(*o.stapling)) : json(nullptr)},
              {"cdn", to_json(o.cdn)},
              {"probe_timestamps", to_json(o.probe_timestamps)}};
}

json to_json(const ProviderObservation& o) {
  return json{{"record", "provider"},
              {"provider_name", o.provider_name},
              {"provider_type", to_token(o.provider_type)},
              {"probed_host", o.probed_host},
              {"ns", to_json(o.ns)},
              {"cdn", o.cdn ? to_json(*o.cdn) : json(nullptr)},
              {"probe_timestamps", to_json(o.probe_timestamps)}};
}

// --- decoding ---------------------------------------------------------------

struct Malformed {
  std::string what;
};

const json& field(const json& j, std::string_view key) {
  if (!j.is_object()) throw Malformed{"expected an object"};
  const auto it = j.find(key);
  if (it == j.end()) throw Malformed{fmt::format("missing field '{}'", key)};
  return *it;
}

std::string str(const json& j, std::string_view key) {
  const auto& v = field(j, key);
  if (!v.is_string()) throw Malformed{fmt::format("field '{}' is not a string", key)};
  return v.get<std::string>();
}

std::vector<std::string> str_list(const json& j, std::string_view key) {
  const auto& v = field(j, key);
  if (!v.is_array()) throw Malformed{fmt::format("field '{}' is not an array", key)};
  std::vector<std::string> out;
  for (const auto& e : v) {
    if (!e.is_string()) throw Malformed{fmt::format("field '{}' has a non-string entry", key)};
    out.push_back(e.get<std::string>());
  }
  return out;
}

template <typename E, typename Parse>
E enum_field(const json& j, std::string_view key, Parse parse) {
  const std::string token = str(j, key);
  if (auto v = parse(token)) return *v;
  throw Malformed{fmt::format("field '{}' has unknown value '{}'", key, token)};
}

Timestamp ts_value(const std::string& text) {
  try {
    return parse_rfc3339(text);
  } catch (const Error& e) {
    throw Malformed{e.what()};
  }
}

NsResult ns_from(const json& j) {
  NsResult ns;
  ns.status = enum_field<DnsStatus>(j, "status", parse_dns_status);
  ns.nameservers = str_list(j, "nameservers");
  ns.note = str(j, "note");
  return ns;
}

CdnEvidence evidence_from(const json& j) {
  CdnEvidence ev;
  const auto& chains = field(j, "chains");
  if (!chains.is_array()) throw Malformed{"chains is not an array"};
  for (const auto& c : chains) {
    ev.chains.push_back(CnameChain{str(c, "host"), str_list(c, "targets"),
                                   enum_field<ChainStatus>(c, "status", parse_chain_status),
                                   str(c, "note")});
  }
  const auto& headers = field(j, "headers");
  if (!headers.is_array()) throw Malformed{"headers is not an array"};
  for (const auto& h : headers) {
    if (!h.is_array() || h.size() != 2 || !h[0].is_string() || !h[1].is_string()) {
      throw Malformed{"header entries must be [name, value] string pairs"};
    }
    ev.headers.push_back(HeaderField{h[0].get<std::string>(), h[1].get<std::string>()});
  }
  ev.fetch_status = enum_field<FetchStatus>(j, "fetch_status", parse_fetch_status);
  ev.final_url = str(j, "final_url");
  ev.offsite_redirects = str_list(j, "offsite_redirects");
  ev.note = str(j, "note");
  return ev;
}

std::map<std::string, Timestamp, std::less<>> timestamps_from(const json& j) {
  if (!j.is_object()) throw Malformed{"probe_timestamps is not an object"};
  std::map<std::string, Timestamp, std::less<>> out;
  for (const auto& [k, v] : j.items()) {
    if (!v.is_string()) throw Malformed{"probe timestamp is not a string"};
    out.emplace(k, ts_value(v.get<std::string>()));
  }
  return out;
}

WebsiteObservation website_from(const json& j) {
  WebsiteObservation o;
  o.domain = str(j, "domain");
  const auto& rank = field(j, "rank");
  if (!rank.is_number_unsigned() || rank.get<std::uint64_t>() == 0 ||
      rank.get<std::uint64_t>() > UINT32_MAX) {
    throw Malformed{"rank must be a positive integer"};
  }
  o.rank = rank.get<std::uint32_t>();
  o.ns = ns_from(field(j, "ns"));
  o.https = enum_field<TriState>(j, "https", parse_tristate);
  o.https_note = str(j, "https_note");
  const auto& c = field(j, "certificate");
  o.certificate.status = enum_field<CertStatus>(c, "status", parse_cert_status);
  o.certificate.ocsp_urls = str_list(c, "ocsp_urls");
  o.certificate.crl_urls = str_list(c, "crl_urls");
  o.certificate.issuer = str(c, "issuer");
  o.certificate.fingerprint = str(c, "fingerprint");
  o.certificate.note = str(c, "note");
  const auto& st = field(j, "stapling");
  if (!st.is_null()) o.stapling = enum_field<TriState>(j, "stapling", parse_tristate);
  o.cdn = evidence_from(field(j, "cdn"));
  o.probe_timestamps = timestamps_from(field(j, "probe_timestamps"));
  return o;
}

ProviderObservation provider_from(const json& j) {
  ProviderObservation o;
  o.provider_name = str(j, "provider_name");
  const std::string type = str(j, "provider_type");
  const auto t = parse_service_type(type);
  if (!t) throw Malformed{fmt::format("unknown provider_type '{}'", type)};
  o.provider_type = *t;
  o.probed_host = str(j, "probed_host");
  o.ns = ns_from(field(j, "ns"));
  const auto& cdn = field(j, "cdn");
  if (!cdn.is_null()) o.cdn = evidence_from(cdn);
  o.probe_timestamps = timestamps_from(field(j, "probe_timestamps"));
  return o;
}

// Header values and notes come from the network and may not be valid UTF-8.
std::string dump_line(const json& j) {
  return j.dump(-1, ' ', false, json::error_handler_t::replace);
}

json parse_line(const std::string& line, std::size_t line_no) {
  json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) {
    throw Error(ErrorCode::kMalformedRecord, "not a JSON object", line_no);
  }
  return j;
}

}  // namespace

const WebsiteObservation* Snapshot::find_website(std::string_view domain) const {
  for (const auto& o : website_observations) {
    if (o.domain == domain) return &o;
  }
  return nullptr;
}

Snapshot without_timestamps(Snapshot snapshot) {
  snapshot.created_at = Timestamp{};
  for (auto& o : snapshot.website_observations) {
    for (auto& [k, v] : o.probe_timestamps) v = Timestamp{};
  }
  for (auto& o : snapshot.provider_observations) {
    for (auto& [k, v] : o.probe_timestamps) v = Timestamp{};
  }
  return snapshot;
}

void validate(const Snapshot& snapshot) {
  if (snapshot.schema_version != kSnapshotSchemaVersion) {
    throw Error(ErrorCode::kSchemaVersionMismatch,
                fmt::format("snapshot schema '{}' (expected '{}')", snapshot.schema_version,
                            kSnapshotSchemaVersion));
  }
  std::set<std::string_view> domains;
  for (const auto& o : snapshot.website_observations) {
    if (auto err = validate(o, kMaxStoredCnameChain)) throw Error(ErrorCode::kInvalidArgument, *err);
    if (!domains.insert(o.domain).second) {
      throw Error(ErrorCode::kDuplicateDomain, fmt::format("domain '{}' observed twice", o.domain));
    }
  }
  std::set<std::pair<std::string_view, ServiceType>> providers;
  for (const auto& o : snapshot.provider_observations) {
    if (auto err = validate(o, kMaxStoredCnameChain)) throw Error(ErrorCode::kInvalidArgument, *err);
    if (!providers.emplace(o.provider_name, o.provider_type).second) {
      throw Error(ErrorCode::kInvalidArgument,
                  fmt::format("provider '{}' ({}) observed twice", o.provider_name,
                              to_string(o.provider_type)));
    }
  }
}

std::string observation_to_json_line(const WebsiteObservation& obs) { return dump_line(to_json(obs)); }
std::string observation_to_json_line(const ProviderObservation& obs) { return dump_line(to_json(obs)); }

void write_snapshot(const Snapshot& snapshot, std::ostream& out) {
  validate(snapshot);
  const json meta{{"record", "meta"},
                  {"schema_version", snapshot.schema_version},
                  {"created_at", format_rfc3339(snapshot.created_at)},
                  {"vantage_note", snapshot.vantage_note}};
  out << dump_line(meta) << '\n';
  for (const auto& o : snapshot.website_observations) out << dump_line(to_json(o)) << '\n';
  for (const auto& o : snapshot.provider_observations) out << dump_line(to_json(o)) << '\n';
}

void save_snapshot(const Snapshot& snapshot, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, fmt::format("cannot write '{}'", path.string()));
  write_snapshot(snapshot, out);
  out.flush();
  if (!out) throw Error(ErrorCode::kIo, fmt::format("write to '{}' failed", path.string()));
}

SnapshotReader::SnapshotReader(std::istream& in) : in_(in) {
  std::string line;
  if (!std::getline(in_, line)) {
    throw Error(ErrorCode::kMalformedRecord, "missing metadata record", 1);
  }
  line_ = 1;
  const json j = parse_line(line, line_);
  try {
    if (str(j, "record") != "meta") throw Malformed{"first record is not the metadata record"};
    meta_.schema_version = str(j, "schema_version");
    if (meta_.schema_version != kSnapshotSchemaVersion) {
      throw Error(ErrorCode::kSchemaVersionMismatch,
                  fmt::format("snapshot schema '{}' is not supported (expected '{}')",
                              meta_.schema_version, kSnapshotSchemaVersion),
                  line_);
    }
    meta_.created_at = ts_value(str(j, "created_at"));
    meta_.vantage_note = str(j, "vantage_note");
  } catch (const Malformed& m) {
    throw Error(ErrorCode::kMalformedRecord, m.what, line_);
  }
}

std::optional<SnapshotReader::Record> SnapshotReader::next() {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_;
    if (line.empty() || line == "\r") continue;
    const json j = parse_line(line, line_);
    try {
      const std::string kind = str(j, "record");
      if (kind == "website") {
        auto obs = website_from(j);
        if (auto err = validate(obs, kMaxStoredCnameChain)) throw Malformed{*err};
        if (!seen_domains_.insert(obs.domain).second) {
          throw Error(ErrorCode::kDuplicateDomain,
                      fmt::format("domain '{}' observed twice", obs.domain), line_);
        }
        return Record{std::move(obs)};
      }
      if (kind == "provider") {
        auto obs = provider_from(j);
        if (auto err = validate(obs, kMaxStoredCnameChain)) throw Malformed{*err};
        if (!seen_providers_.emplace(obs.provider_name, static_cast<int>(obs.provider_type))
                 .second) {
          throw Malformed{fmt::format("provider '{}' observed twice", obs.provider_name)};
        }
        return Record{std::move(obs)};
      }
      throw Malformed{fmt::format("unknown record kind '{}'", kind)};
    } catch (const Malformed& m) {
      throw Error(ErrorCode::kMalformedRecord, m.what, line_);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kMalformedRecord, e.what(), line_);
    }
  }
  return std::nullopt;
}

Snapshot read_snapshot(std::istream& in) {
  SnapshotReader reader(in);
  Snapshot s;
  s.schema_version = reader.metadata().schema_version;
  s.created_at = reader.metadata().created_at;
  s.vantage_note = reader.metadata().vantage_note;
  while (auto rec = reader.next()) {
    if (auto* w = std::get_if<WebsiteObservation>(&*rec)) {
      s.website_observations.push_back(std::move(*w));
    } else {
      s.provider_observations.push_back(std::get<ProviderObservation>(std::move(*rec)));
    }
  }
  return s;
}

Snapshot load_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, fmt::format("cannot open '{}'", path.string()));
  return read_snapshot(in);
}

}  // namespace webdep
