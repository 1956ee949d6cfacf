#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace webdep::test {

struct CertSpec {
  std::string common_name;
  std::string issuer_org = "Test CA";
  std::vector<std::string> ocsp_urls;
  std::vector<std::string> ca_issuer_urls;  // also in AIA; must not be read as OCSP
  std::vector<std::string> crl_urls;
};

struct MintedCert {
  std::vector<std::uint8_t> der;
  std::string cert_pem;
  std::string key_pem;
};

// A P-256 leaf carrying the requested AIA and CRL distribution point
// extensions. It is signed with its own key; nothing here verifies chains.
MintedCert mint_certificate(const CertSpec& spec);

// A syntactically plausible OCSP response body to staple.
std::vector<std::uint8_t> fake_ocsp_response();

}  // namespace webdep::test
