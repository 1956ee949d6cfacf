#include "dns_wire.hpp"

#include <cstdio>
#include <map>

#include "webdep/util/hostname.hpp"

namespace webdep::test {

namespace {

class Writer {
 public:
  explicit Writer(bool compress) : compress_(compress) {}

  void u8(std::uint8_t v) { out_.push_back(v); }
  void u16(std::uint16_t v) {
    u8(static_cast<std::uint8_t>(v >> 8));
    u8(static_cast<std::uint8_t>(v));
  }
  void u32(std::uint32_t v) {
    u16(static_cast<std::uint16_t>(v >> 16));
    u16(static_cast<std::uint16_t>(v));
  }

  void name(std::string_view host) {
    const auto labels = split_labels(host);
    for (std::size_t i = 0; i < labels.size(); ++i) {
      std::string suffix;
      for (std::size_t j = i; j < labels.size(); ++j) {
        if (j > i) suffix += '.';
        suffix += labels[j];
      }
      if (compress_) {
        if (const auto it = offsets_.find(suffix); it != offsets_.end()) {
          u16(static_cast<std::uint16_t>(0xC000 | it->second));
          return;
        }
        if (out_.size() < 0x3FFF) offsets_.emplace(suffix, static_cast<std::uint16_t>(out_.size()));
      }
      u8(static_cast<std::uint8_t>(labels[i].size()));
      out_.insert(out_.end(), labels[i].begin(), labels[i].end());
    }
    u8(0);
  }

  void record(const WireRecord& rr) {
    name(rr.name);
    u16(static_cast<std::uint16_t>(rr.type));
    u16(1);
    u32(rr.ttl);
    const std::size_t len_at = out_.size();
    u16(0);
    const std::size_t start = out_.size();
    switch (rr.type) {
      case RrType::kNs:
      case RrType::kCname: name(rr.data); break;
      case RrType::kA: {
        unsigned a = 0, b = 0, c = 0, d = 0;
        std::sscanf(rr.data.c_str(), "%u.%u.%u.%u", &a, &b, &c, &d);
        for (unsigned v : {a, b, c, d}) u8(static_cast<std::uint8_t>(v));
        break;
      }
      case RrType::kSoa:
        name("ns0." + rr.name);
        name("hostmaster." + rr.name);
        for (int i = 0; i < 5; ++i) u32(3600);
        break;
      case RrType::kAaaa:
        for (int i = 0; i < 16; ++i) u8(0);
        break;
    }
    const auto len = static_cast<std::uint16_t>(out_.size() - start);
    out_[len_at] = static_cast<std::uint8_t>(len >> 8);
    out_[len_at + 1] = static_cast<std::uint8_t>(len);
  }

  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  bool compress_;
  std::vector<std::uint8_t> out_;
  std::map<std::string, std::uint16_t> offsets_;
};

}  // namespace

std::vector<std::uint8_t> encode_response(const WireResponse& r) {
  Writer w(r.compress);
  w.u16(r.id);
  // QR, RD, RA; TC on request.
  w.u16(static_cast<std::uint16_t>(0x8180 | (r.truncated ? 0x0200 : 0) | (r.rcode & 0x0F)));
  w.u16(1);
  w.u16(static_cast<std::uint16_t>(r.answers.size()));
  w.u16(static_cast<std::uint16_t>(r.authority.size()));
  w.u16(0);
  w.name(r.qname);
  w.u16(static_cast<std::uint16_t>(r.qtype));
  w.u16(1);
  for (const auto& rr : r.answers) w.record(rr);
  for (const auto& rr : r.authority) w.record(rr);
  return w.take();
}

}  // namespace webdep::test
