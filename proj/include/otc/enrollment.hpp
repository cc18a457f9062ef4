/**
 * @file enrollment.hpp
 * @brief HTTP enrollment front end for issuer CAs, and the matching clients
 *
 * Endpoints:
 *   POST /enroll   PEM CSR in, PEM leaf + CA chain (leaf first) out, followed
 *                  by the issuing CA's blank CRL
 *   GET  /crl      blank CRL of a pool member (?member=N, default the first
 *                  active one)
 *   GET  /chain    CA chain of a pool member, issuer to root
 *
 * Error responses carry a single line "code: message".
 *
 * Copyright 2026 otc contributors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include "otc/ca.hpp"
#include "otc/x509.hpp"

#include <atomic>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace otc {

inline constexpr std::string_view kPemContentType = "application/x-pem-file";
inline constexpr std::string_view kSecretHeader = "X-OTC-Enroll-Secret";

struct HttpResponse {
    int status = 200;
    std::string content_type;
    std::string body;
};

/// key=value file: listen=host:port, ca_dir=PATH, pool_size=N and an
/// optional shared_secret=VALUE. Relative ca_dir is resolved against the
/// file's directory by load().
struct ServiceConfig {
    std::string host = "127.0.0.1";
    int port = 8080;
    std::filesystem::path ca_dir;
    std::size_t pool_size = 1;
    std::optional<std::string> shared_secret;

    /// Throws Errc::invalid_argument.
    static ServiceConfig parse(std::string_view text);
    static ServiceConfig load(const std::filesystem::path& file);
};

class EnrollmentService {
public:
    /// `pool` holds issuer CAs; requests are spread round-robin.
    explicit EnrollmentService(std::vector<CertificateAuthority> pool);

    /// `ca_dir` is either an issuer directory or an intermediate directory.
    /// For an intermediate the existing issuer-NN directories are loaded and,
    /// if fewer than `pool_size` are active, new issuers are created and
    /// saved next to them.
    static EnrollmentService from_directory(const std::filesystem::path& ca_dir, std::size_t pool_size,
                                            std::string_view passphrase, Clock clock = system_clock());

    HttpResponse handle_enroll(std::string_view body, std::optional<std::string_view> secret = std::nullopt);
    HttpResponse handle_crl(std::optional<std::size_t> member = std::nullopt);
    HttpResponse handle_chain(std::optional<std::size_t> member = std::nullopt);

    void set_shared_secret(std::optional<std::string> secret) { shared_secret_ = std::move(secret); }

    std::size_t pool_size() const noexcept { return pool_.size(); }
    CertificateAuthority& member(std::size_t index) { return pool_.at(index); }

private:
    CertificateAuthority* pick();
    CertificateAuthority* select(std::optional<std::size_t> member, HttpResponse& error);

    std::vector<CertificateAuthority> pool_;
    std::atomic<std::size_t> next_{0};
    std::optional<std::string> shared_secret_;
};

/// Runs an EnrollmentService on a background listener thread.
class EnrollmentServer {
public:
    /// Port 0 picks a free port. Throws Errc::io_failure if binding fails.
    EnrollmentServer(EnrollmentService& service, const std::string& host = "127.0.0.1", int port = 0);
    ~EnrollmentServer();
    EnrollmentServer(const EnrollmentServer&) = delete;
    EnrollmentServer& operator=(const EnrollmentServer&) = delete;

    int port() const noexcept;
    std::string url() const;

    /// Stops accepting connections and waits for requests in flight.
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

struct EnrollmentResult {
    CertificationChain chain;
    std::optional<RevocationList> crl;
};

class EnrollmentClient {
public:
    virtual ~EnrollmentClient() = default;

    /// Throws EnrollmentRejected when the CA refuses the CSR and
    /// Errc::enrollment_unreachable when no answer arrives.
    virtual EnrollmentResult enroll(const SigningRequest& csr) = 0;
};

/// Decodes an /enroll response. Throws EnrollmentRejected on non-200.
EnrollmentResult parse_enroll_response(int status, std::string_view body);

class HttpEnrollmentClient : public EnrollmentClient {
public:
    /// `url` is "http://host:port" optionally followed by the enroll path.
    explicit HttpEnrollmentClient(std::string url, std::optional<std::string> secret = std::nullopt);

    EnrollmentResult enroll(const SigningRequest& csr) override;
    RevocationList fetch_crl();
    CertificationChain fetch_chain();

private:
    std::string origin_;
    std::string enroll_path_;
    std::optional<std::string> secret_;
};

/// Calls a service in-process through the same request/response path.
class DirectEnrollmentClient : public EnrollmentClient {
public:
    explicit DirectEnrollmentClient(EnrollmentService& service) : service_(service) {}
    EnrollmentResult enroll(const SigningRequest& csr) override;

private:
    EnrollmentService& service_;
};

} // namespace otc
