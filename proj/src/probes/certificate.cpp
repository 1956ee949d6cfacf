#include "webdep/probes/certificate.hpp"

#include <memory>

#include <fmt/format.h>
#include <openssl/evp.h>
#include <openssl/x509.h>
#include <openssl/x509v3.h>

#include "webdep/util/error.hpp"

namespace webdep {

namespace {

struct X509Free {
  void operator()(X509* x) const { X509_free(x); }
};
struct AiaFree {
  void operator()(AUTHORITY_INFO_ACCESS* a) const { AUTHORITY_INFO_ACCESS_free(a); }
};
struct CdpFree {
  void operator()(CRL_DIST_POINTS* c) const { CRL_DIST_POINTS_free(c); }
};
struct BioFree {
  void operator()(BIO* b) const { BIO_free(b); }
};

std::optional<std::string> uri_of(const GENERAL_NAME* name) {
  if (name == nullptr || name->type != GEN_URI) return std::nullopt;
  const ASN1_IA5STRING* s = name->d.uniformResourceIdentifier;
  return std::string(reinterpret_cast<const char*>(ASN1_STRING_get0_data(s)),
                     static_cast<std::size_t>(ASN1_STRING_length(s)));
}

std::string one_line_name(const X509_NAME* name) {
  std::unique_ptr<BIO, BioFree> bio(BIO_new(BIO_s_mem()));
  if (!bio || X509_NAME_print_ex(bio.get(), name, 0, XN_FLAG_RFC2253) < 0) return {};
  char* data = nullptr;
  const long len = BIO_get_mem_data(bio.get(), &data);
  return std::string(data, static_cast<std::size_t>(len));
}

}  // namespace

CertificateInfo parse_certificate(std::span<const std::uint8_t> der) {
  const unsigned char* p = der.data();
  std::unique_ptr<X509, X509Free> cert(d2i_X509(nullptr, &p, static_cast<long>(der.size())));
  if (!cert) throw Error(ErrorCode::kCertificateParseError, "leaf is not a DER certificate");

  CertificateInfo info;
  info.status = CertStatus::kOk;

  int crit = 0;
  std::unique_ptr<AUTHORITY_INFO_ACCESS, AiaFree> aia(static_cast<AUTHORITY_INFO_ACCESS*>(
      X509_get_ext_d2i(cert.get(), NID_info_access, &crit, nullptr)));
  if (!aia && crit != -1) throw Error(ErrorCode::kCertificateParseError, "unreadable AIA extension");
  for (int i = 0; aia && i < sk_ACCESS_DESCRIPTION_num(aia.get()); ++i) {
    const ACCESS_DESCRIPTION* ad = sk_ACCESS_DESCRIPTION_value(aia.get(), i);
    if (OBJ_obj2nid(ad->method) != NID_ad_OCSP) continue;
    if (auto uri = uri_of(ad->location)) info.ocsp_urls.push_back(std::move(*uri));
  }

  std::unique_ptr<CRL_DIST_POINTS, CdpFree> cdp(static_cast<CRL_DIST_POINTS*>(
      X509_get_ext_d2i(cert.get(), NID_crl_distribution_points, &crit, nullptr)));
  if (!cdp && crit != -1) throw Error(ErrorCode::kCertificateParseError, "unreadable CDP extension");
  for (int i = 0; cdp && i < sk_DIST_POINT_num(cdp.get()); ++i) {
    const DIST_POINT* dp = sk_DIST_POINT_value(cdp.get(), i);
    if (dp->distpoint == nullptr || dp->distpoint->type != 0) continue;
    const GENERAL_NAMES* names = dp->distpoint->name.fullname;
    for (int k = 0; k < sk_GENERAL_NAME_num(names); ++k) {
      if (auto uri = uri_of(sk_GENERAL_NAME_value(names, k))) info.crl_urls.push_back(std::move(*uri));
    }
  }

  info.issuer = one_line_name(X509_get_issuer_name(cert.get()));

  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int md_len = 0;
  if (X509_digest(cert.get(), EVP_sha256(), md, &md_len) != 1) {
    throw Error(ErrorCode::kCertificateParseError, "cannot compute fingerprint");
  }
  info.fingerprint.reserve(md_len * 2);
  for (unsigned int i = 0; i < md_len; ++i) info.fingerprint += fmt::format("{:02x}", md[i]);
  return info;
}

}  // namespace webdep
