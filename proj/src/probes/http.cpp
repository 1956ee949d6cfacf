#include "webdep/probes/http.hpp"

#include <charconv>

#include "webdep/util/error.hpp"
#include "webdep/util/hostname.hpp"

namespace webdep {

namespace {

[[noreturn]] void bad(std::string_view what) {
  throw Error(ErrorCode::kParseError, "HTTP response: " + std::string(what));
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::string dechunk(std::string_view in) {
  std::string out;
  while (!in.empty()) {
    const auto eol = in.find("\r\n");
    if (eol == std::string_view::npos) break;
    std::string_view size_field = in.substr(0, eol);
    if (const auto semi = size_field.find(';'); semi != std::string_view::npos) {
      size_field = size_field.substr(0, semi);
    }
    size_field = trim(size_field);
    std::size_t size = 0;
    const auto [p, ec] =
        std::from_chars(size_field.data(), size_field.data() + size_field.size(), size, 16);
    if (ec != std::errc{} || p != size_field.data() + size_field.size()) bad("bad chunk size");
    in.remove_prefix(eol + 2);
    if (size == 0) break;
    out.append(in.substr(0, size));
    if (in.size() <= size) break;
    in.remove_prefix(size);
    if (in.substr(0, 2) == "\r\n") in.remove_prefix(2);
  }
  return out;
}

bool attr_boundary(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '<' || c == '"' || c == '\''; }

std::string decode_amp(std::string_view v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v.substr(i, 5) == "&amp;") {
      out.push_back('&');
      i += 4;
    } else {
      out.push_back(v[i]);
    }
  }
  return out;
}

}  // namespace

const std::string* HttpResponse::header(std::string_view name) const {
  for (const auto& h : headers) {
    if (h.name == name) return &h.value;
  }
  return nullptr;
}

HttpResponse parse_http_response(std::span<const std::uint8_t> raw) {
  const std::string_view text(reinterpret_cast<const char*>(raw.data()), raw.size());
  // Header lines end in CRLF; a bare LF is tolerated, as browsers do.
  std::size_t head_end = std::string_view::npos, body_start = 0;
  for (std::size_t i = text.find('\n'); i != std::string_view::npos; i = text.find('\n', i + 1)) {
    if (text.substr(i + 1, 1) == "\n") {
      head_end = i;
      body_start = i + 2;
      break;
    }
    if (text.substr(i + 1, 2) == "\r\n") {
      head_end = i;
      body_start = i + 3;
      break;
    }
  }
  if (head_end == std::string_view::npos) bad("no end of headers");
  std::string_view head = text.substr(0, head_end);
  const std::string_view rest = text.substr(body_start);
  auto next_line = [&head] {
    const auto eol = head.find('\n');
    std::string_view line = head.substr(0, eol);
    head = eol == std::string_view::npos ? std::string_view{} : head.substr(eol + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    return line;
  };

  const std::string_view status_line = next_line();
  if (status_line.substr(0, 7) != "HTTP/1.") bad("bad status line");
  const auto sp = status_line.find(' ');
  if (sp == std::string_view::npos || status_line.size() < sp + 4) bad("bad status line");
  HttpResponse r;
  const auto code = status_line.substr(sp + 1, 3);
  const auto [p, ec] = std::from_chars(code.data(), code.data() + 3, r.status);
  if (ec != std::errc{} || p != code.data() + 3 || r.status < 100 || r.status > 999) bad("bad status code");

  while (!head.empty()) {
    const std::string_view line = next_line();
    if (line.empty()) continue;
    const auto colon = line.find(':');
    if (colon == std::string_view::npos || colon == 0) bad("malformed header line");
    r.headers.push_back({ascii_lower(trim(line.substr(0, colon))), std::string(trim(line.substr(colon + 1)))});
  }

  const std::string* te = r.header("transfer-encoding");
  const std::string* cl = r.header("content-length");
  if (te != nullptr && icontains(*te, "chunked")) {
    r.body = dechunk(rest);
  } else if (cl != nullptr) {
    std::size_t n = 0;
    const auto [q, ec2] = std::from_chars(cl->data(), cl->data() + cl->size(), n);
    if (ec2 != std::errc{} || q != cl->data() + cl->size()) bad("bad content-length");
    r.body = std::string(rest.substr(0, n));
  } else {
    r.body = std::string(rest);
  }
  return r;
}

std::vector<std::string> extract_link_attributes(std::string_view html) {
  std::vector<std::string> out;
  const std::string lower = ascii_lower(html);
  std::size_t i = 0;
  while (i < lower.size()) {
    std::size_t name_len = 0;
    if (lower.compare(i, 4, "href") == 0) {
      name_len = 4;
    } else if (lower.compare(i, 3, "src") == 0) {
      name_len = 3;
    }
    if (name_len == 0 || (i > 0 && !attr_boundary(lower[i - 1]))) {
      ++i;
      continue;
    }
    std::size_t j = i + name_len;
    while (j < lower.size() && (lower[j] == ' ' || lower[j] == '\t' || lower[j] == '\n' || lower[j] == '\r')) ++j;
    if (j >= lower.size() || lower[j] != '=') {
      i += name_len;
      continue;
    }
    ++j;
    while (j < lower.size() && (lower[j] == ' ' || lower[j] == '\t' || lower[j] == '\n' || lower[j] == '\r')) ++j;
    if (j >= lower.size()) break;
    std::size_t start = j, end = j;
    if (html[j] == '"' || html[j] == '\'') {
      const char q = html[j];
      start = j + 1;
      end = html.find(q, start);
      if (end == std::string_view::npos) break;
      i = end + 1;
    } else {
      while (end < html.size() && html[end] != '>' && !attr_boundary(html[end])) ++end;
      i = end;
    }
    out.push_back(decode_amp(trim(html.substr(start, end - start))));
  }
  return out;
}

}  // namespace webdep
