#pragma once

#include <cstdint>
#include <span>

#include "webdep/ingest/observation.hpp"

namespace webdep {

// Extracts AIA OCSP URIs, CRL distribution point URIs, the issuer name and
// the SHA-256 fingerprint from a DER-encoded leaf. Status is kOk on success.
// Throws kCertificateParseError.
CertificateInfo parse_certificate(std::span<const std::uint8_t> der);

}  // namespace webdep
