#include "webdep/util/error.hpp"

#include <fmt/format.h>

namespace webdep {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIo: return "IoError";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kDuplicateRank: return "DuplicateRank";
    case ErrorCode::kDuplicateDomain: return "DuplicateDomain";
    case ErrorCode::kSchemaVersionMismatch: return "SchemaVersionMismatch";
    case ErrorCode::kMalformedRecord: return "MalformedRecord";
    case ErrorCode::kDanglingReference: return "DanglingReference";
    case ErrorCode::kInvalidGraph: return "InvalidGraph";
    case ErrorCode::kUnknownProvider: return "UnknownProvider";
    case ErrorCode::kUnknownWebsite: return "UnknownWebsite";
    case ErrorCode::kProviderAbsentBefore: return "ProviderAbsentBefore";
    case ErrorCode::kUnparsableHostname: return "UnparsableHostname";
    case ErrorCode::kMalformedOcspUrl: return "MalformedOcspUrl";
    case ErrorCode::kMalformedDnsMessage: return "MalformedDnsMessage";
    case ErrorCode::kCertificateParseError: return "CertificateParseError";
    case ErrorCode::kTranscriptExhausted: return "TranscriptExhausted";
    case ErrorCode::kConfigError: return "ConfigError";
  }
  return "Unknown";
}

namespace {

std::string decorate(ErrorCode code, const std::string& message,
                     std::optional<std::size_t> line) {
  if (line) return fmt::format("{} (line {}): {}", to_string(code), *line, message);
  return fmt::format("{}: {}", to_string(code), message);
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message,
             std::optional<std::size_t> line)
    : std::runtime_error(decorate(code, message, line)), code_(code), line_(line) {}

}  // namespace webdep
