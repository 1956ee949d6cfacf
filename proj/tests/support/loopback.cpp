#include "loopback.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cstring>
#include <stdexcept>
#include <string>

#include <openssl/bio.h>
#include <openssl/err.h>
#include <openssl/pem.h>
#include <openssl/ssl.h>

#include "webdep/probes/dns_message.hpp"
#include "webdep/util/hostname.hpp"

namespace webdep::test {

namespace {

sockaddr_in loopback(std::uint16_t port) {
  sockaddr_in sa{};
  sa.sin_family = AF_INET;
  sa.sin_port = htons(port);
  sa.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  return sa;
}

int bound_socket(int type, std::uint16_t port) {
  const int fd = ::socket(AF_INET, type, 0);
  if (fd < 0) throw std::runtime_error("loopback: socket failed");
  const int one = 1;
  ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  sockaddr_in sa = loopback(port);
  if (::bind(fd, reinterpret_cast<sockaddr*>(&sa), sizeof sa) != 0) {
    ::close(fd);
    throw std::runtime_error("loopback: bind failed");
  }
  if (type == SOCK_STREAM) ::listen(fd, 16);
  return fd;
}

std::uint16_t port_of(int fd) {
  sockaddr_in sa{};
  socklen_t len = sizeof sa;
  ::getsockname(fd, reinterpret_cast<sockaddr*>(&sa), &len);
  return ntohs(sa.sin_port);
}

bool read_exact(int fd, std::uint8_t* buf, std::size_t n) {
  std::size_t got = 0;
  while (got < n) {
    const ssize_t r = ::recv(fd, buf + got, n - got, 0);
    if (r <= 0) return false;
    got += static_cast<std::size_t>(r);
  }
  return true;
}

}  // namespace

LoopbackDns::LoopbackDns(const SimWorld& world) : world_(world) {
  udp_ = bound_socket(SOCK_DGRAM, 0);
  port_ = port_of(udp_);
  tcp_ = bound_socket(SOCK_STREAM, port_);
  thread_ = std::thread([this] { loop(); });
}

LoopbackDns::~LoopbackDns() {
  stop_ = true;
  thread_.join();
  ::close(udp_);
  ::close(tcp_);
}

void LoopbackDns::loop() {
  while (!stop_) {
    pollfd fds[2] = {{udp_, POLLIN, 0}, {tcp_, POLLIN, 0}};
    if (::poll(fds, 2, 20) <= 0) continue;
    if (fds[0].revents & POLLIN) {
      std::uint8_t buf[1500];
      sockaddr_in from{};
      socklen_t len = sizeof from;
      const ssize_t n = ::recvfrom(udp_, buf, sizeof buf, 0, reinterpret_cast<sockaddr*>(&from), &len);
      if (n <= 0) continue;
      try {
        const DnsMessage q = parse_dns_message({buf, static_cast<std::size_t>(n)});
        const auto reply = world_.dns_answer(q.id, q.question, static_cast<RrType>(q.question_type), true);
        if (reply) {
          ::sendto(udp_, reply->data(), reply->size(), 0, reinterpret_cast<sockaddr*>(&from), len);
        }
      } catch (const std::exception&) {
        // Unparsable queries get no answer.
      }
    }
    if (fds[1].revents & POLLIN) {
      const int c = ::accept(tcp_, nullptr, nullptr);
      if (c < 0) continue;
      std::uint8_t hdr[2];
      if (read_exact(c, hdr, 2)) {
        std::vector<std::uint8_t> q(static_cast<std::size_t>(hdr[0] << 8 | hdr[1]));
        if (read_exact(c, q.data(), q.size())) {
          ++tcp_queries_;
          try {
            const DnsMessage m = parse_dns_message(q);
            const auto reply = world_.dns_answer(m.id, m.question, static_cast<RrType>(m.question_type), false);
            if (reply) {
              std::vector<std::uint8_t> framed{static_cast<std::uint8_t>(reply->size() >> 8),
                                               static_cast<std::uint8_t>(reply->size())};
              framed.insert(framed.end(), reply->begin(), reply->end());
              ::send(c, framed.data(), framed.size(), MSG_NOSIGNAL);
            }
          } catch (const std::exception&) {
          }
        }
      }
      ::close(c);
    }
  }
}

LoopbackWeb::LoopbackWeb(const SimWorld& world, const SimWorld::Server* tls) : world_(world), tls_(tls) {
  if (tls_ != nullptr) {
    SSL_CTX* ctx = SSL_CTX_new(TLS_server_method());
    BIO* cert_bio = BIO_new_mem_buf(tls_->tls.leaf_der.data(), static_cast<int>(tls_->tls.leaf_der.size()));
    X509* cert = d2i_X509_bio(cert_bio, nullptr);
    BIO_free(cert_bio);
    BIO* key_bio = BIO_new_mem_buf(tls_->key_pem.data(), static_cast<int>(tls_->key_pem.size()));
    EVP_PKEY* key = PEM_read_bio_PrivateKey(key_bio, nullptr, nullptr, nullptr);
    BIO_free(key_bio);
    if (cert == nullptr || key == nullptr || SSL_CTX_use_certificate(ctx, cert) != 1 ||
        SSL_CTX_use_PrivateKey(ctx, key) != 1) {
      throw std::runtime_error("loopback: bad certificate or key");
    }
    X509_free(cert);
    EVP_PKEY_free(key);
    if (!tls_->tls.ocsp_staple.empty()) {
      SSL_CTX_set_tlsext_status_cb(ctx, +[](SSL* ssl, void* arg) -> int {
        const auto* staple = static_cast<const std::vector<std::uint8_t>*>(arg);
        auto* copy = static_cast<unsigned char*>(OPENSSL_malloc(staple->size()));
        std::memcpy(copy, staple->data(), staple->size());
        SSL_set_tlsext_status_ocsp_resp(ssl, copy, static_cast<long>(staple->size()));
        return SSL_TLSEXT_ERR_OK;
      });
      SSL_CTX_set_tlsext_status_arg(ctx, const_cast<std::vector<std::uint8_t>*>(&tls_->tls.ocsp_staple));
    }
    ssl_ctx_ = ctx;
  }
  listener_ = bound_socket(SOCK_STREAM, 0);
  port_ = port_of(listener_);
  thread_ = std::thread([this] { loop(); });
}

LoopbackWeb::~LoopbackWeb() {
  stop_ = true;
  thread_.join();
  ::close(listener_);
  if (ssl_ctx_ != nullptr) SSL_CTX_free(static_cast<SSL_CTX*>(ssl_ctx_));
}

void LoopbackWeb::loop() {
  while (!stop_) {
    pollfd p{listener_, POLLIN, 0};
    if (::poll(&p, 1, 20) <= 0) continue;
    const int c = ::accept(listener_, nullptr, nullptr);
    if (c < 0) continue;
    serve(c);
    ::close(c);
  }
}

void LoopbackWeb::serve(int fd) {
  SSL* ssl = nullptr;
  if (ssl_ctx_ != nullptr) {
    ssl = SSL_new(static_cast<SSL_CTX*>(ssl_ctx_));
    SSL_set_fd(ssl, fd);
    if (SSL_accept(ssl) != 1) {
      SSL_free(ssl);
      return;
    }
  }
  auto read_some = [&](char* buf, int n) -> int {
    if (ssl != nullptr) return SSL_read(ssl, buf, n);
    return static_cast<int>(::recv(fd, buf, static_cast<std::size_t>(n), 0));
  };
  auto write_all = [&](const std::string& data) {
    if (ssl != nullptr) {
      SSL_write(ssl, data.data(), static_cast<int>(data.size()));
    } else {
      ::send(fd, data.data(), data.size(), MSG_NOSIGNAL);
    }
  };

  // Probes that only handshake close without sending a request.
  pollfd p{fd, POLLIN, 0};
  std::string request;
  while (request.find("\r\n\r\n") == std::string::npos && request.size() < 16384) {
    if (ssl == nullptr || SSL_pending(ssl) == 0) {
      if (::poll(&p, 1, 2000) <= 0) break;
    }
    char buf[4096];
    const int n = read_some(buf, sizeof buf);
    if (n <= 0) break;
    request.append(buf, static_cast<std::size_t>(n));
  }
  if (request.rfind("GET ", 0) == 0) {
    const auto path_end = request.find(' ', 4);
    const std::string path = request.substr(4, path_end - 4);
    std::string host;
    for (std::size_t at = request.find("\r\n"); at != std::string::npos && at + 2 < request.size();) {
      const auto next = request.find("\r\n", at + 2);
      const std::string line = request.substr(at + 2, next - at - 2);
      if (line.size() > 5 && ascii_lower(line.substr(0, 5)) == "host:") {
        host = line.substr(5);
        host.erase(0, host.find_first_not_of(' '));
        host = host.substr(0, host.find(':'));
      }
      at = next;
    }
    const std::string url = std::string(ssl != nullptr ? "https" : "http") + "://" + host + path;
    const std::string* page = world_.find_page(url);
    write_all(page != nullptr ? *page : http_response(404, {}, "not found\n"));
  }
  if (ssl != nullptr) {
    SSL_shutdown(ssl);
    SSL_free(ssl);
  }
}

std::uint16_t closed_port() {
  const int fd = bound_socket(SOCK_STREAM, 0);
  const std::uint16_t port = port_of(fd);
  ::close(fd);
  return port;
}

}  // namespace webdep::test
