/**
 * @file ca.hpp
 * @brief Root, intermediate and issuer certification authorities
 *
 * Every certificate below a root inherits the root's notAfter, so a whole
 * chain expires at one instant. Issuers only sign CSRs carrying exactly one
 * OTC extension, publish a single blank CRL that lasts until that instant,
 * and are retired by destroying their private key.
 *
 * Copyright 2026 otc contributors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include "otc/crypto.hpp"
#include "otc/time.hpp"
#include "otc/x509.hpp"

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace otc {

enum class CaRole { root, intermediate, issuer };
enum class CaState { active, retired };
enum class RetireOutcome { retired, already_retired };

std::string_view to_string(CaRole role) noexcept;
std::optional<CaRole> ca_role_from_string(std::string_view name) noexcept;

struct CaPolicy {
    Timestamp chain_not_after{};
    AlgorithmSuite suite = kDefaultSuite;
    bool require_otc_extension = true;
};

/// Hook run before issuance. Deployments with a registration authority
/// throw from here to refuse a subject. The default accepts everything.
using RegistrationCheck = std::function<void(const SigningRequest&)>;

/// Environment variable holding the passphrase for persisted CA keys.
inline constexpr const char* kPassphraseEnv = "OTC_CA_PASSPHRASE";

class CertificateAuthority {
public:
    /// Throws Errc::invalid_policy when the notAfter is not in the future.
    static CertificateAuthority create_root(const DistinguishedName& name, const CaPolicy& policy,
                                            Clock clock = system_clock());

    /// Throws Errc::parent_retired or Errc::role_violation.
    CertificateAuthority create_subordinate(const DistinguishedName& name, CaRole role);

    /// Issues a one-time certificate for `csr`. Thread-safe.
    /// Throws Errc::issuer_retired, Errc::role_violation, Errc::pop_failure,
    /// Errc::missing_otc_extension, Errc::duplicate_otc_extension.
    Certificate issue_otc(const SigningRequest& csr);

    /// The CA's single blank CRL; created on first use and stable afterwards.
    RevocationList issue_blank_crl();

    /// Destroys the signing key. Certificates already issued stay valid.
    RetireOutcome retire() noexcept;

    /// `count` functionally identical issuers below this intermediate.
    std::vector<CertificateAuthority> spawn_issuer_pool(std::size_t count);

    const Certificate& certificate() const noexcept;
    /// This CA's certificate followed by its ancestors, ending at the root.
    const CertificationChain& chain() const noexcept;
    /// `leaf` followed by chain().
    CertificationChain chain_for(const Certificate& leaf) const;

    CaRole role() const noexcept;
    CaState state() const noexcept;
    bool is_active() const noexcept { return state() == CaState::active; }
    const AlgorithmSuite& suite() const noexcept;
    const CaPolicy& policy() const noexcept;
    std::size_t issued_count() const;

    void set_registration_check(RegistrationCheck check);

    /// Writes cert.pem, chain.pem, key.pem (encrypted), serials.txt, crl.pem
    /// and ca.txt into `dir`. Subsequent issuances append to serials.txt.
    void save(const std::filesystem::path& dir, std::string_view passphrase);

    /// Throws Errc::io_failure, Errc::malformed_encoding or Errc::malformed_key.
    static CertificateAuthority load(const std::filesystem::path& dir, std::string_view passphrase,
                                     Clock clock = system_clock());

    CertificateAuthority(CertificateAuthority&&) noexcept;
    CertificateAuthority& operator=(CertificateAuthority&&) noexcept;
    ~CertificateAuthority();

private:
    struct State;
    explicit CertificateAuthority(std::unique_ptr<State> state);

    Certificate sign_certificate(const DistinguishedName& subject, const Bytes& spki, std::vector<Extension> extensions);

    std::unique_ptr<State> state_;
};

inline CertificateAuthority create_root(const DistinguishedName& name, const CaPolicy& policy,
                                        Clock clock = system_clock())
{
    return CertificateAuthority::create_root(name, policy, std::move(clock));
}
inline CertificateAuthority create_subordinate(CertificateAuthority& parent, const DistinguishedName& name, CaRole role)
{
    return parent.create_subordinate(name, role);
}
inline Certificate issue_otc(CertificateAuthority& issuer, const SigningRequest& csr) { return issuer.issue_otc(csr); }
inline RevocationList issue_blank_crl(CertificateAuthority& issuer) { return issuer.issue_blank_crl(); }
inline RetireOutcome retire_ca(CertificateAuthority& ca) noexcept { return ca.retire(); }
inline std::vector<CertificateAuthority> spawn_issuer_pool(CertificateAuthority& intermediate, std::size_t count)
{
    return intermediate.spawn_issuer_pool(count);
}

// ---------------------------------------------------------------------------
// Hierarchy bootstrap

struct HierarchyOptions {
    DistinguishedName root_name;
    Timestamp not_after{};
    std::size_t intermediates = 1;
    std::size_t issuers_per_intermediate = 1;
    AlgorithmSuite suite = kDefaultSuite;
};

struct HierarchyMember {
    std::filesystem::path directory;
    CaRole role;
    Certificate certificate;
};

/// Creates root/intermediate-NN/issuer-NN under `out` and persists every CA.
std::vector<HierarchyMember> init_hierarchy(const HierarchyOptions& options, const std::filesystem::path& out,
                                            std::string_view passphrase, Clock clock = system_clock());

/// Issuer directories directly below an intermediate directory, sorted.
std::vector<std::filesystem::path> issuer_directories(const std::filesystem::path& intermediate_dir);

} // namespace otc
