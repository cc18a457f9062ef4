/**
 * @file enrollment.cpp
 * @brief Enrollment request handling, HTTP listener and clients
 *
 * Copyright 2026 otc contributors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "otc/enrollment.hpp"

#include "otc/error.hpp"
#include "otc/pem.hpp"

#include <httplib.h>

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

namespace otc {

namespace fs = std::filesystem;

namespace {

std::string trim(std::string s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

HttpResponse error_response(int status, const Error& e)
{
    return HttpResponse{status, "text/plain", std::string(e.what()) + "\n"};
}

HttpResponse error_response(int status, Errc code, const std::string& message)
{
    return error_response(status, Error(code, message));
}

int status_for(Errc code)
{
    switch (code) {
    case Errc::malformed_encoding:
    case Errc::kind_mismatch:
    case Errc::malformed_key:
    case Errc::unsupported_suite:
        return 400;
    case Errc::pop_failure:
    case Errc::missing_otc_extension:
    case Errc::duplicate_otc_extension:
    case Errc::enrollment_rejected:
    case Errc::invalid_argument:
        return 422;
    case Errc::issuer_retired:
    case Errc::issuer_expired:
        return 503;
    default:
        return 500;
    }
}

std::string read_file(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    if (!in) {
        throw Error(Errc::io_failure, "cannot read " + p.string());
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string role_of(const fs::path& dir)
{
    std::ifstream in(dir / "ca.txt");
    if (!in) {
        throw Error(Errc::invalid_argument, dir.string() + " is not a CA directory");
    }
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("role=", 0) == 0) {
            return line.substr(5);
        }
    }
    throw Error(Errc::invalid_argument, (dir / "ca.txt").string() + " lacks a role");
}

std::optional<std::size_t> member_param(const httplib::Request& req)
{
    if (!req.has_param("member")) {
        return std::nullopt;
    }
    try {
        return static_cast<std::size_t>(std::stoul(req.get_param_value("member")));
    } catch (const std::exception&) {
        return static_cast<std::size_t>(-1);
    }
}

void apply(const HttpResponse& r, httplib::Response& res)
{
    res.status = r.status;
    res.set_content(r.body, r.content_type);
}

} // namespace

// ---------------------------------------------------------------------------
// Configuration

ServiceConfig ServiceConfig::parse(std::string_view text)
{
    ServiceConfig config;
    bool have_dir = false;
    std::istringstream in{std::string(text)};
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        line = trim(line);
        if (line.empty() || line[0] == '#') {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw Error(Errc::invalid_argument, "config line " + std::to_string(number) + " has no '='");
        }
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (key == "listen") {
            const auto colon = value.rfind(':');
            if (colon == std::string::npos) {
                throw Error(Errc::invalid_argument, "listen must be host:port");
            }
            config.host = value.substr(0, colon);
            try {
                std::size_t used = 0;
                config.port = std::stoi(value.substr(colon + 1), &used);
                if (used != value.size() - colon - 1 || config.port < 0 || config.port > 65535) {
                    throw std::out_of_range("port");
                }
            } catch (const std::exception&) {
                throw Error(Errc::invalid_argument, "bad port in listen=" + value);
            }
        } else if (key == "ca_dir") {
            config.ca_dir = value;
            have_dir = !value.empty();
        } else if (key == "pool_size") {
            try {
                std::size_t used = 0;
                const auto n = std::stoul(value, &used);
                if (used != value.size() || n == 0) {
                    throw std::out_of_range("pool_size");
                }
                config.pool_size = n;
            } catch (const std::exception&) {
                throw Error(Errc::invalid_argument, "pool_size must be a positive integer");
            }
        } else if (key == "shared_secret") {
            config.shared_secret = value;
        } else {
            throw Error(Errc::invalid_argument, "unknown config key '" + key + "'");
        }
    }
    if (!have_dir) {
        throw Error(Errc::invalid_argument, "config lacks ca_dir");
    }
    return config;
}

ServiceConfig ServiceConfig::load(const fs::path& file)
{
    auto config = parse(read_file(file));
    if (config.ca_dir.is_relative()) {
        config.ca_dir = file.parent_path() / config.ca_dir;
    }
    return config;
}

// ---------------------------------------------------------------------------
// Service

EnrollmentService::EnrollmentService(std::vector<CertificateAuthority> pool) : pool_(std::move(pool))
{
    if (pool_.empty()) {
        throw Error(Errc::invalid_argument, "enrollment service needs at least one issuer CA");
    }
    for (const auto& ca : pool_) {
        if (ca.role() != CaRole::issuer) {
            throw Error(Errc::role_violation, "enrollment pool members must be issuer CAs");
        }
    }
}

EnrollmentService EnrollmentService::from_directory(const fs::path& ca_dir, std::size_t pool_size,
                                                    std::string_view passphrase, Clock clock)
{
    const auto role = role_of(ca_dir);
    std::vector<CertificateAuthority> pool;
    if (role == "issuer") {
        pool.push_back(CertificateAuthority::load(ca_dir, passphrase, clock));
        return EnrollmentService(std::move(pool));
    }
    if (role != "intermediate") {
        throw Error(Errc::invalid_argument, ca_dir.string() + " holds a " + role +
                                                " CA; point ca_dir at an intermediate or issuer directory");
    }

    std::size_t active = 0;
    std::size_t highest = 0;
    for (const auto& dir : issuer_directories(ca_dir)) {
        const auto name = dir.filename().string();
        highest = std::max<std::size_t>(highest, std::strtoul(name.c_str() + 7, nullptr, 10));
        auto ca = CertificateAuthority::load(dir, passphrase, clock);
        if (ca.is_active() && active < pool_size) {
            ++active;
            pool.push_back(std::move(ca));
        }
    }
    if (active < pool_size) {
        auto intermediate = CertificateAuthority::load(ca_dir, passphrase, clock);
        for (auto& issuer : intermediate.spawn_issuer_pool(pool_size - active)) {
            char suffix[16];
            std::snprintf(suffix, sizeof suffix, "issuer-%02zu", ++highest);
            issuer.save(ca_dir / suffix, passphrase);
            pool.push_back(std::move(issuer));
        }
    }
    return EnrollmentService(std::move(pool));
}

CertificateAuthority* EnrollmentService::pick()
{
    const auto start = next_.fetch_add(1, std::memory_order_relaxed);
    for (std::size_t i = 0; i < pool_.size(); ++i) {
        auto& ca = pool_[(start + i) % pool_.size()];
        if (ca.is_active()) {
            return &ca;
        }
    }
    return nullptr;
}

CertificateAuthority* EnrollmentService::select(std::optional<std::size_t> member, HttpResponse& error)
{
    if (member) {
        if (*member >= pool_.size()) {
            error = error_response(404, Errc::invalid_argument, "no pool member " + std::to_string(*member));
            return nullptr;
        }
        return &pool_[*member];
    }
    for (auto& ca : pool_) {
        if (ca.is_active()) {
            return &ca;
        }
    }
    error = error_response(503, Errc::issuer_retired, "every issuer CA behind this service is retired");
    return nullptr;
}

HttpResponse EnrollmentService::handle_enroll(std::string_view body, std::optional<std::string_view> secret)
{
    if (shared_secret_ && (!secret || *secret != *shared_secret_)) {
        return error_response(403, Errc::enrollment_rejected, "shared secret missing or wrong");
    }
    std::optional<SigningRequest> csr;
    try {
        csr = decode_csr(ByteView(reinterpret_cast<const std::uint8_t*>(body.data()), body.size()));
    } catch (const Error& e) {
        return error_response(400, Errc::malformed_encoding, std::string("request body is not a CSR: ") + e.what());
    }
    auto* ca = pick();
    if (ca == nullptr) {
        return error_response(503, Errc::issuer_retired, "every issuer CA behind this service is retired");
    }
    try {
        const auto leaf = ca->issue_otc(*csr);
        return HttpResponse{200, std::string(kPemContentType),
                            to_pem(ca->chain_for(leaf)) + to_pem(ca->issue_blank_crl())};
    } catch (const Error& e) {
        return error_response(status_for(e.code()), e);
    }
}

HttpResponse EnrollmentService::handle_crl(std::optional<std::size_t> member)
{
    HttpResponse error;
    auto* ca = select(member, error);
    if (ca == nullptr) {
        return error;
    }
    try {
        return HttpResponse{200, std::string(kPemContentType), to_pem(ca->issue_blank_crl())};
    } catch (const Error& e) {
        return error_response(status_for(e.code()), e);
    }
}

HttpResponse EnrollmentService::handle_chain(std::optional<std::size_t> member)
{
    HttpResponse error;
    auto* ca = select(member, error);
    if (ca == nullptr) {
        return error;
    }
    return HttpResponse{200, std::string(kPemContentType), to_pem(ca->chain())};
}

// ---------------------------------------------------------------------------
// HTTP listener

struct EnrollmentServer::Impl {
    httplib::Server server;
    std::thread thread;
    int port = 0;
    std::string host;
};

EnrollmentServer::EnrollmentServer(EnrollmentService& service, const std::string& host, int port)
    : impl_(std::make_unique<Impl>())
{
    auto& srv = impl_->server;
    srv.Post("/enroll", [&service](const httplib::Request& req, httplib::Response& res) {
        std::optional<std::string> secret;
        if (req.has_header(std::string(kSecretHeader))) {
            secret = req.get_header_value(std::string(kSecretHeader));
        }
        apply(service.handle_enroll(req.body, secret), res);
    });
    srv.Get("/crl", [&service](const httplib::Request& req, httplib::Response& res) {
        apply(service.handle_crl(member_param(req)), res);
    });
    srv.Get("/chain", [&service](const httplib::Request& req, httplib::Response& res) {
        apply(service.handle_chain(member_param(req)), res);
    });

    if (port == 0) {
        impl_->port = srv.bind_to_any_port(host);
    } else {
        impl_->port = srv.bind_to_port(host, port) ? port : -1;
    }
    if (impl_->port <= 0) {
        throw Error(Errc::io_failure, "cannot listen on " + host + ":" + std::to_string(port));
    }
    impl_->host = host;
    impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
    srv.wait_until_ready();
}

EnrollmentServer::~EnrollmentServer()
{
    stop();
}

void EnrollmentServer::stop()
{
    if (impl_->thread.joinable()) {
        impl_->server.stop();
        impl_->thread.join();
    }
}

int EnrollmentServer::port() const noexcept
{
    return impl_->port;
}

std::string EnrollmentServer::url() const
{
    return "http://" + impl_->host + ":" + std::to_string(impl_->port);
}

// ---------------------------------------------------------------------------
// Clients

EnrollmentResult parse_enroll_response(int status, std::string_view body)
{
    if (status != 200) {
        std::string line(body.substr(0, body.find('\n')));
        auto code = Errc::enrollment_rejected;
        if (const auto colon = line.find(':'); colon != std::string::npos) {
            if (const auto parsed = errc_from_string(line.substr(0, colon))) {
                code = *parsed;
                line = trim(line.substr(colon + 1));
            }
        }
        throw EnrollmentRejected(code, status, line);
    }
    EnrollmentResult result;
    try {
        for (const auto& block : pem::decode_all(body)) {
            if (block.label == pem::kCertificate) {
                result.chain.certificates.push_back(decode_certificate(block.der));
            } else if (block.label == pem::kCrl) {
                result.crl = decode_crl(block.der);
            }
        }
    } catch (const Error& e) {
        throw Error(Errc::enrollment_rejected, std::string("unreadable enrollment response: ") + e.what());
    }
    if (result.chain.empty()) {
        throw Error(Errc::enrollment_rejected, "enrollment response holds no certificate");
    }
    return result;
}

HttpEnrollmentClient::HttpEnrollmentClient(std::string url, std::optional<std::string> secret)
    : secret_(std::move(secret))
{
    const auto scheme = url.find("://");
    const auto path_start = url.find('/', scheme == std::string::npos ? 0 : scheme + 3);
    origin_ = url.substr(0, path_start);
    enroll_path_ = path_start == std::string::npos ? "" : url.substr(path_start);
    if (enroll_path_.empty() || enroll_path_ == "/") {
        enroll_path_ = "/enroll";
    }
    if (origin_.empty()) {
        throw Error(Errc::invalid_argument, "enrollment URL '" + url + "' has no host");
    }
}

namespace {

httplib::Result http_call(const std::string& origin, const std::function<httplib::Result(httplib::Client&)>& fn)
{
    httplib::Client client(origin);
    if (!client.is_valid()) {
        throw Error(Errc::enrollment_unreachable, "unsupported enrollment URL " + origin);
    }
    client.set_connection_timeout(5, 0);
    client.set_read_timeout(60, 0);
    auto result = fn(client);
    if (!result) {
        throw Error(Errc::enrollment_unreachable,
                    "no response from " + origin + " (" + httplib::to_string(result.error()) + ")");
    }
    return result;
}

} // namespace

EnrollmentResult HttpEnrollmentClient::enroll(const SigningRequest& csr)
{
    const auto body = to_pem(csr);
    auto res = http_call(origin_, [&](httplib::Client& c) {
        httplib::Headers headers;
        if (secret_) {
            headers.emplace(std::string(kSecretHeader), *secret_);
        }
        return c.Post(enroll_path_, headers, body, std::string(kPemContentType));
    });
    return parse_enroll_response(res->status, res->body);
}

RevocationList HttpEnrollmentClient::fetch_crl()
{
    auto res = http_call(origin_, [](httplib::Client& c) { return c.Get("/crl"); });
    if (res->status != 200) {
        parse_enroll_response(res->status, res->body);
    }
    return decode_crl(ByteView(reinterpret_cast<const std::uint8_t*>(res->body.data()), res->body.size()));
}

CertificationChain HttpEnrollmentClient::fetch_chain()
{
    auto res = http_call(origin_, [](httplib::Client& c) { return c.Get("/chain"); });
    if (res->status != 200) {
        parse_enroll_response(res->status, res->body);
    }
    return CertificationChain{decode_certificates(res->body)};
}

EnrollmentResult DirectEnrollmentClient::enroll(const SigningRequest& csr)
{
    const auto response = service_.handle_enroll(to_pem(csr));
    return parse_enroll_response(response.status, response.body);
}

} // namespace otc
