#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <set>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "webdep/ingest/observation.hpp"

namespace webdep {

inline constexpr std::string_view kSnapshotSchemaVersion = "v1";

// Upper bound on chain length accepted by the reader; probes are configured
// at or below this.
inline constexpr std::uint32_t kMaxStoredCnameChain = 64;

struct Snapshot {
  std::string schema_version{kSnapshotSchemaVersion};
  Timestamp created_at{};
  std::string vantage_note;
  std::vector<WebsiteObservation> website_observations;
  std::vector<ProviderObservation> provider_observations;

  const WebsiteObservation* find_website(std::string_view domain) const;
  friend bool operator==(const Snapshot&, const Snapshot&) = default;
};

// Copy with created_at and every probe timestamp zeroed, for comparisons that
// must ignore wall-clock time.
Snapshot without_timestamps(Snapshot snapshot);

// Throws kInvalidArgument if an observation invariant does not hold,
// kDuplicateDomain / kMalformedRecord for duplicates.
void validate(const Snapshot& snapshot);

// JSON Lines: line 1 is the metadata record, then one record per observation
// (websites first, then providers). Keys are emitted in sorted order.
void write_snapshot(const Snapshot& snapshot, std::ostream& out);
void save_snapshot(const Snapshot& snapshot, const std::filesystem::path& path);

// Streaming reader. Memory use is bounded by one record regardless of file
// size. Errors carry the 1-based line number.
class SnapshotReader {
 public:
  struct Metadata {
    std::string schema_version;
    Timestamp created_at{};
    std::string vantage_note;
  };
  using Record = std::variant<WebsiteObservation, ProviderObservation>;

  explicit SnapshotReader(std::istream& in);

  const Metadata& metadata() const noexcept { return meta_; }
  // nullopt at end of input.
  std::optional<Record> next();
  std::size_t line() const noexcept { return line_; }

 private:
  std::istream& in_;
  Metadata meta_;
  std::size_t line_ = 0;
  std::set<std::string> seen_domains_;
  std::set<std::pair<std::string, int>> seen_providers_;
};

Snapshot read_snapshot(std::istream& in);
Snapshot load_snapshot(const std::filesystem::path& path);

// JSON conversion shared with other file formats that embed observations.
std::string observation_to_json_line(const WebsiteObservation& obs);
std::string observation_to_json_line(const ProviderObservation& obs);

}  // namespace webdep
