#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace webdep {

enum class ErrorCode {
  kInvalidArgument,
  kIo,
  kParseError,
  kDuplicateRank,
  kDuplicateDomain,
  kSchemaVersionMismatch,
  kMalformedRecord,
  kDanglingReference,
  kInvalidGraph,
  kUnknownProvider,
  kUnknownWebsite,
  kProviderAbsentBefore,
  kUnparsableHostname,
  kMalformedOcspUrl,
  kMalformedDnsMessage,
  kCertificateParseError,
  kTranscriptExhausted,
  kConfigError,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every data-level failure in the toolkit surfaces as this type. `line` is set
// when the failure can be pinned to a line of an input file.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> line = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> line() const noexcept { return line_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> line_;
};

}  // namespace webdep
