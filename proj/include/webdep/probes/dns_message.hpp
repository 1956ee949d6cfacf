#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace webdep {

enum class RrType : std::uint16_t { kA = 1, kNs = 2, kCname = 5, kSoa = 6, kAaaa = 28 };
std::string_view to_token(RrType t) noexcept;  // "A", "NS", ...

struct ResourceRecord {
  std::string name;  // lower-cased, no trailing dot
  std::uint16_t type = 0;
  std::uint16_t klass = 1;
  std::uint32_t ttl = 0;
  // NS / CNAME: the target host. A: dotted quad. Other types: empty.
  std::string data;
};

struct DnsMessage {
  std::uint16_t id = 0;
  bool response = false;
  bool truncated = false;
  std::uint8_t rcode = 0;
  std::string question;  // first question name, lower-cased
  std::uint16_t question_type = 0;
  std::vector<ResourceRecord> answers;
  std::vector<ResourceRecord> authority;
};

namespace rcode {
inline constexpr std::uint8_t kNoError = 0;
inline constexpr std::uint8_t kServFail = 2;
inline constexpr std::uint8_t kNxDomain = 3;
inline constexpr std::uint8_t kRefused = 5;
}  // namespace rcode

// Standard recursive query with one question and no additional records.
std::vector<std::uint8_t> encode_query(std::uint16_t id, std::string_view name, RrType type);

// Parses a DNS message. Follows compression pointers with a hop limit so a
// pointer loop cannot hang the parser. Throws kMalformedDnsMessage.
DnsMessage parse_dns_message(std::span<const std::uint8_t> wire);

}  // namespace webdep
