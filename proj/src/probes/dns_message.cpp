#include "webdep/probes/dns_message.hpp"

#include <fmt/format.h>

#include "webdep/util/error.hpp"
#include "webdep/util/hostname.hpp"

namespace webdep {

namespace {

constexpr int kMaxPointerHops = 32;

[[noreturn]] void malformed(std::string_view what) {
  throw Error(ErrorCode::kMalformedDnsMessage, std::string(what));
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> wire) : wire_(wire) {}

  std::size_t pos() const { return pos_; }
  void skip(std::size_t n) {
    need(n);
    pos_ += n;
  }
  std::uint8_t u8() {
    need(1);
    return wire_[pos_++];
  }
  std::uint16_t u16() {
    need(2);
    const auto v = static_cast<std::uint16_t>((wire_[pos_] << 8) | wire_[pos_ + 1]);
    pos_ += 2;
    return v;
  }
  std::uint32_t u32() {
    const std::uint32_t hi = u16();
    return (hi << 16) | u16();
  }

  // Reads a possibly compressed name starting at the cursor.
  std::string name() {
    std::string out;
    std::size_t at = pos_;
    bool jumped = false;
    int hops = 0;
    for (;;) {
      if (at >= wire_.size()) malformed("name runs past end of message");
      const std::uint8_t len = wire_[at];
      if ((len & 0xC0) == 0xC0) {
        if (at + 1 >= wire_.size()) malformed("truncated compression pointer");
        if (++hops > kMaxPointerHops) malformed("compression pointer loop");
        const std::size_t target = static_cast<std::size_t>((len & 0x3F) << 8) | wire_[at + 1];
        if (!jumped) pos_ = at + 2;
        jumped = true;
        at = target;
        continue;
      }
      if ((len & 0xC0) != 0) malformed("unsupported label type");
      if (len == 0) {
        if (!jumped) pos_ = at + 1;
        break;
      }
      if (at + 1 + len > wire_.size()) malformed("label runs past end of message");
      if (!out.empty()) out.push_back('.');
      out.append(reinterpret_cast<const char*>(&wire_[at + 1]), len);
      if (out.size() > 255) malformed("name longer than 255 octets");
      at += 1 + len;
    }
    return ascii_lower(out);
  }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > wire_.size()) malformed("message truncated");
  }

  std::span<const std::uint8_t> wire_;
  std::size_t pos_ = 0;
};

ResourceRecord read_record(Reader& r) {
  ResourceRecord rr;
  rr.name = r.name();
  rr.type = r.u16();
  rr.klass = r.u16();
  rr.ttl = r.u32();
  const std::uint16_t rdlength = r.u16();
  const std::size_t start = r.pos();
  switch (static_cast<RrType>(rr.type)) {
    case RrType::kNs:
    case RrType::kCname:
      rr.data = r.name();
      if (r.pos() > start + rdlength) malformed("name overruns RDATA");
      break;
    case RrType::kA: {
      if (rdlength != 4) malformed("A record with RDLENGTH != 4");
      const auto a = r.u8(), b = r.u8(), c = r.u8(), d = r.u8();
      rr.data = fmt::format("{}.{}.{}.{}", a, b, c, d);
      break;
    }
    default:
      break;
  }
  r.skip(start + rdlength - r.pos());
  return rr;
}

}  // namespace

std::string_view to_token(RrType t) noexcept {
  switch (t) {
    case RrType::kA: return "A";
    case RrType::kNs: return "NS";
    case RrType::kCname: return "CNAME";
    case RrType::kSoa: return "SOA";
    case RrType::kAaaa: return "AAAA";
  }
  return "?";
}

std::vector<std::uint8_t> encode_query(std::uint16_t id, std::string_view name, RrType type) {
  std::vector<std::uint8_t> out{static_cast<std::uint8_t>(id >> 8), static_cast<std::uint8_t>(id),
                                0x01, 0x00,  // RD
                                0, 1, 0, 0, 0, 0, 0, 0};
  for (const auto& label : split_labels(name)) {
    if (label.empty() || label.size() > 63) {
      throw Error(ErrorCode::kInvalidArgument, fmt::format("cannot encode name '{}'", name));
    }
    out.push_back(static_cast<std::uint8_t>(label.size()));
    out.insert(out.end(), label.begin(), label.end());
  }
  out.push_back(0);
  const auto t = static_cast<std::uint16_t>(type);
  out.insert(out.end(), {static_cast<std::uint8_t>(t >> 8), static_cast<std::uint8_t>(t), 0, 1});
  return out;
}

DnsMessage parse_dns_message(std::span<const std::uint8_t> wire) {
  Reader r(wire);
  DnsMessage m;
  m.id = r.u16();
  const std::uint16_t flags = r.u16();
  m.response = (flags & 0x8000) != 0;
  m.truncated = (flags & 0x0200) != 0;
  m.rcode = static_cast<std::uint8_t>(flags & 0x000F);
  const std::uint16_t qd = r.u16(), an = r.u16(), ns = r.u16();
  r.u16();  // additional records are not needed
  for (std::uint16_t i = 0; i < qd; ++i) {
    std::string q = r.name();
    const std::uint16_t qtype = r.u16();
    r.u16();
    if (i == 0) {
      m.question = std::move(q);
      m.question_type = qtype;
    }
  }
  for (std::uint16_t i = 0; i < an; ++i) m.answers.push_back(read_record(r));
  for (std::uint16_t i = 0; i < ns; ++i) m.authority.push_back(read_record(r));
  return m;
}

}  // namespace webdep
