/**
 * @file support.hpp
 * @brief Shared fixtures for the test suites: a settable clock and a small PKI
 *
 * Copyright 2026 otc contributors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include "otc/ca.hpp"
#include "otc/crypto.hpp"
#include "otc/enrollment.hpp"
#include "otc/error.hpp"
#include "otc/time.hpp"
#include "otc/x509.hpp"

#include <atomic>
#include <filesystem>
#include <memory>
#include <random>
#include <string>

namespace otc::testing {

inline Timestamp at(std::string_view iso)
{
    return parse_iso8601(iso).value();
}

/// A clock the test moves by hand. Copies share the same instant.
class ManualClock {
public:
    explicit ManualClock(Timestamp start) : now_(std::make_shared<std::atomic<std::int64_t>>(start.time_since_epoch().count())) {}

    Timestamp now() const { return Timestamp(Duration(now_->load())); }
    void set(Timestamp t) { now_->store(t.time_since_epoch().count()); }
    void advance(Duration d) { now_->fetch_add(d.count()); }
    Clock clock() const
    {
        auto shared = now_;
        return [shared] { return Timestamp(Duration(shared->load())); };
    }

private:
    std::shared_ptr<std::atomic<std::int64_t>> now_;
};

struct Pki {
    ManualClock clock;
    CertificateAuthority root;
    CertificateAuthority intermediate;
    CertificateAuthority issuer;
};

inline Pki make_pki(Timestamp start = at("2026-01-01T00:00:00Z"), Timestamp not_after = at("2051-01-01T00:00:00Z"),
                    AlgorithmSuite suite = kDefaultSuite)
{
    ManualClock clock(start);
    auto root = CertificateAuthority::create_root(DistinguishedName::parse("CN=Test Root,O=otc"),
                                                  CaPolicy{not_after, suite, true}, clock.clock());
    clock.advance(Duration(60));
    auto intermediate =
        root.create_subordinate(DistinguishedName::parse("CN=Test Intermediate,O=otc"), CaRole::intermediate);
    clock.advance(Duration(60));
    auto issuer = intermediate.create_subordinate(DistinguishedName::parse("CN=Test Issuer,O=otc"), CaRole::issuer);
    clock.advance(Duration(60));
    return Pki{clock, std::move(root), std::move(intermediate), std::move(issuer)};
}

inline DocumentDigest digest_of(std::string_view text, DigestAlgorithm alg = DigestAlgorithm::sha256)
{
    return digest_bytes(ByteView(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()), alg);
}

/// Enrolls straight against one CA object and counts round trips.
class IssuerClient : public EnrollmentClient {
public:
    explicit IssuerClient(CertificateAuthority& ca) : ca_(ca) {}

    EnrollmentResult enroll(const SigningRequest& csr) override
    {
        ++calls;
        try {
            const auto leaf = ca_.issue_otc(csr);
            return EnrollmentResult{ca_.chain_for(leaf), ca_.issue_blank_crl()};
        } catch (const Error& e) {
            throw EnrollmentRejected(e.code(), 422, e.what());
        }
    }

    std::atomic<int> calls{0};

private:
    CertificateAuthority& ca_;
};

/// A fresh directory below the system temp dir, removed on destruction.
class TempDir {
public:
    TempDir()
    {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() / ("otc-test-" + std::to_string(rd()) + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir()
    {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

} // namespace otc::testing
