/**
 * @file ca.cpp
 * @brief CA lifecycle, OTC issuance, blank CRLs and on-disk CA state
 *
 * Copyright 2026 otc contributors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "otc/ca.hpp"

#include "otc/error.hpp"
#include "otc/pem.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <sstream>
#include <unordered_set>

namespace otc {

namespace fs = std::filesystem;

namespace {

constexpr std::size_t kSerialBytes = 20;

std::string read_text(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(Errc::io_failure, "cannot read " + path.string());
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const fs::path& path, std::string_view text, bool secret = false)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(Errc::io_failure, "cannot write " + path.string());
    }
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.close();
    if (!out) {
        throw Error(Errc::io_failure, "error writing " + path.string());
    }
    if (secret) {
        fs::permissions(path, fs::perms::owner_read | fs::perms::owner_write, fs::perm_options::replace);
    }
}

ByteView as_bytes(std::string_view s)
{
    return ByteView(reinterpret_cast<const std::uint8_t*>(s.data()), s.size());
}

std::map<std::string, std::string> parse_key_values(std::string_view text)
{
    std::map<std::string, std::string> out;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            continue;
        }
        out[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return out;
}

int rank(CaRole role)
{
    switch (role) {
    case CaRole::root:
        return 2;
    case CaRole::intermediate:
        return 1;
    case CaRole::issuer:
        return 0;
    }
    return -1;
}

DistinguishedName with_common_name(const DistinguishedName& base, const std::string& cn)
{
    auto attrs = base.attributes();
    bool replaced = false;
    for (auto& a : attrs) {
        if (a.type == oids::common_name) {
            a.value = cn;
            replaced = true;
        }
    }
    if (!replaced) {
        attrs.push_back({oids::common_name, cn, der::tag::utf8_string});
    }
    return DistinguishedName(std::move(attrs));
}

std::string two_digits(std::size_t n)
{
    char buf[16];
    std::snprintf(buf, sizeof buf, "%02zu", n);
    return buf;
}

std::vector<Extension> ca_extensions(const Bytes& subject_spki, const Bytes& issuer_spki)
{
    return {
        Extension{oids::basic_constraints, true, encode_basic_constraints(true)},
        Extension{oids::key_usage, true, encode_key_usage(true)},
        Extension{oids::subject_key_identifier, false, encode_key_identifier_extension(subject_spki)},
        Extension{oids::authority_key_identifier, false, encode_authority_key_identifier(issuer_spki)},
    };
}

} // namespace

std::string_view to_string(CaRole role) noexcept
{
    switch (role) {
    case CaRole::root:
        return "root";
    case CaRole::intermediate:
        return "intermediate";
    case CaRole::issuer:
        return "issuer";
    }
    return "unknown";
}

std::optional<CaRole> ca_role_from_string(std::string_view name) noexcept
{
    if (name == "root") return CaRole::root;
    if (name == "intermediate") return CaRole::intermediate;
    if (name == "issuer") return CaRole::issuer;
    return std::nullopt;
}

struct CertificateAuthority::State {
    State(KeyPair k, CaRole r, CaPolicy p, Clock c) : key(std::move(k)), role(r), policy(p), clock(std::move(c)) {}

    // Shared for every signing operation, exclusive for retirement, so a
    // retirement never interleaves with an issuance in flight.
    mutable std::shared_mutex lifecycle;
    KeyPair key;
    CaState state = CaState::active;

    Certificate cert;
    CertificationChain chain;
    CaRole role;
    CaPolicy policy;
    Clock clock;
    RegistrationCheck registration;

    mutable std::mutex serial_mutex;
    std::unordered_set<std::string> serials;
    std::optional<fs::path> directory;
    std::size_t children = 0;

    std::mutex crl_mutex;
    std::optional<RevocationList> crl;

    Bytes allocate_serial()
    {
        std::lock_guard lock(serial_mutex);
        while (true) {
            Bytes serial(kSerialBytes);
            random_bytes(serial);
            serial[0] &= 0x7f;
            if (serial[0] == 0) {
                continue;
            }
            auto hex = to_hex(serial);
            if (!serials.insert(hex).second) {
                continue;
            }
            if (directory) {
                std::ofstream journal(*directory / "serials.txt", std::ios::app);
                journal << hex << '\n';
                journal.flush();
                if (!journal) {
                    serials.erase(hex);
                    throw Error(Errc::io_failure, "cannot append to serial journal");
                }
            }
            return serial;
        }
    }

    void require_active() const
    {
        if (state != CaState::active) {
            throw Error(Errc::issuer_retired, "CA '" + cert.subject.to_string() + "' is retired");
        }
    }

    Timestamp issuance_instant() const
    {
        const auto now = clock();
        const auto not_before = std::max(now, cert.not_before);
        if (not_before > cert.not_after) {
            throw Error(Errc::issuer_expired, "CA '" + cert.subject.to_string() + "' expired at " +
                                                  format_iso8601(cert.not_after));
        }
        return not_before;
    }

    void write_metadata() const
    {
        if (!directory) {
            return;
        }
        std::ostringstream meta;
        meta << "role=" << to_string(role) << '\n'
             << "suite=" << policy.suite.label() << '\n'
             << "state=" << (state == CaState::active ? "active" : "retired") << '\n'
             << "children=" << children << '\n';
        write_text(*directory / "ca.txt", meta.str());
    }
};

CertificateAuthority::CertificateAuthority(std::unique_ptr<State> state) : state_(std::move(state)) {}
CertificateAuthority::CertificateAuthority(CertificateAuthority&&) noexcept = default;
CertificateAuthority& CertificateAuthority::operator=(CertificateAuthority&&) noexcept = default;
CertificateAuthority::~CertificateAuthority() = default;

Certificate CertificateAuthority::sign_certificate(const DistinguishedName& subject, const Bytes& spki,
                                                   std::vector<Extension> extensions)
{
    Certificate cert;
    cert.version = 2;
    cert.serial = state_->allocate_serial();
    cert.signature_algorithm = signature_algorithm_for(state_->key.suite());
    cert.issuer = state_->cert.subject;
    cert.not_before = state_->issuance_instant();
    cert.not_after = state_->cert.not_after;
    cert.subject = subject;
    cert.public_key_info = spki;
    cert.extensions = std::move(extensions);
    cert.signature = state_->key.sign_message(cert.to_be_signed());
    return cert;
}

CertificateAuthority CertificateAuthority::create_root(const DistinguishedName& name, const CaPolicy& policy,
                                                       Clock clock)
{
    const auto now = clock();
    if (policy.chain_not_after <= now) {
        throw Error(Errc::invalid_policy, "chain notAfter " + format_iso8601(policy.chain_not_after) +
                                              " is not in the future");
    }
    if (name.common_name_value().empty()) {
        throw Error(Errc::invalid_argument, "CA name needs a non-empty commonName");
    }
    auto state = std::make_unique<State>(KeyPair::generate(policy.suite), CaRole::root, policy, std::move(clock));
    const auto& spki = state->key.public_key().der();

    Certificate& cert = state->cert;
    cert.version = 2;
    cert.serial = state->allocate_serial();
    cert.signature_algorithm = signature_algorithm_for(policy.suite);
    cert.issuer = name;
    cert.not_before = now;
    cert.not_after = policy.chain_not_after;
    cert.subject = name;
    cert.public_key_info = spki;
    cert.extensions = ca_extensions(spki, spki);
    cert.signature = state->key.sign_message(cert.to_be_signed());
    state->chain.certificates = {cert};
    return CertificateAuthority(std::move(state));
}

CertificateAuthority CertificateAuthority::create_subordinate(const DistinguishedName& name, CaRole role)
{
    std::shared_lock lock(state_->lifecycle);
    if (state_->state != CaState::active) {
        throw Error(Errc::parent_retired, "parent CA '" + state_->cert.subject.to_string() + "' is retired");
    }
    if (rank(role) >= rank(state_->role)) {
        throw Error(Errc::role_violation, "a " + std::string(to_string(state_->role)) + " CA cannot create a " +
                                              std::string(to_string(role)) + " CA");
    }
    if (name.common_name_value().empty()) {
        throw Error(Errc::invalid_argument, "CA name needs a non-empty commonName");
    }
    auto key = KeyPair::generate(state_->policy.suite);
    const auto spki = key.public_key().der();
    auto cert = sign_certificate(name, spki, ca_extensions(spki, state_->cert.public_key_info));

    auto child = std::make_unique<State>(std::move(key), role, state_->policy, state_->clock);
    child->cert = cert;
    child->chain.certificates.push_back(cert);
    for (const auto& c : state_->chain.certificates) {
        child->chain.certificates.push_back(c);
    }
    {
        std::lock_guard serial_lock(state_->serial_mutex);
        ++state_->children;
    }
    state_->write_metadata();
    return CertificateAuthority(std::move(child));
}

std::vector<CertificateAuthority> CertificateAuthority::spawn_issuer_pool(std::size_t count)
{
    if (state_->role != CaRole::intermediate) {
        throw Error(Errc::role_violation, "issuer pools hang below an intermediate CA");
    }
    std::vector<CertificateAuthority> pool;
    pool.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        std::size_t index = 0;
        {
            std::lock_guard serial_lock(state_->serial_mutex);
            index = state_->children + 1;
        }
        const auto cn = state_->cert.subject.common_name_value() + " Issuer " + two_digits(index);
        pool.push_back(create_subordinate(with_common_name(state_->cert.subject, cn), CaRole::issuer));
    }
    return pool;
}

Certificate CertificateAuthority::issue_otc(const SigningRequest& csr)
{
    std::shared_lock lock(state_->lifecycle);
    state_->require_active();
    if (state_->role != CaRole::issuer) {
        throw Error(Errc::role_violation, "only issuer CAs sign one-time certificates");
    }
    if (state_->registration) {
        state_->registration(csr);
    }
    if (!verify_csr_pop(csr)) {
        throw Error(Errc::pop_failure, "CSR self-signature does not verify under its public key");
    }
    const auto otc_count = count_extensions(csr.extensions, oids::otc_document_digest);
    if (otc_count == 0 && state_->policy.require_otc_extension) {
        throw Error(Errc::missing_otc_extension, "CSR carries no document digest extension");
    }
    if (otc_count > 1) {
        throw Error(Errc::duplicate_otc_extension, "CSR carries " + std::to_string(otc_count) +
                                                       " document digest extensions");
    }
    const auto* otc = find_extension(csr.extensions, oids::otc_document_digest);
    if (otc != nullptr) {
        try {
            (void)OtcExtension::from_extension(*otc);
        } catch (const Error& e) {
            throw Error(Errc::missing_otc_extension, std::string("document digest extension is unusable: ") + e.what());
        }
    }

    std::vector<Extension> extensions{
        Extension{oids::key_usage, true, encode_key_usage(false)},
        Extension{oids::subject_key_identifier, false, encode_key_identifier_extension(csr.public_key_info)},
        Extension{oids::authority_key_identifier, false, encode_authority_key_identifier(state_->cert.public_key_info)},
    };
    if (otc != nullptr) {
        extensions.push_back(*otc);
    }
    return sign_certificate(csr.subject, csr.public_key_info, std::move(extensions));
}

RevocationList CertificateAuthority::issue_blank_crl()
{
    std::shared_lock lock(state_->lifecycle);
    state_->require_active();
    std::lock_guard crl_lock(state_->crl_mutex);
    if (state_->crl) {
        return *state_->crl;
    }
    RevocationList crl;
    crl.version = 1;
    crl.signature_algorithm = signature_algorithm_for(state_->key.suite());
    crl.issuer = state_->cert.subject;
    crl.this_update = state_->issuance_instant();
    crl.next_update = state_->cert.not_after;
    der::Writer number;
    number.integer(1);
    crl.extensions = {
        Extension{oids::authority_key_identifier, false, encode_authority_key_identifier(state_->cert.public_key_info)},
        Extension{oids::crl_number, false, number.take()},
    };
    crl.signature = state_->key.sign_message(crl.to_be_signed());
    state_->crl = crl;
    if (state_->directory) {
        write_text(*state_->directory / "crl.pem", to_pem(crl));
    }
    return crl;
}

RetireOutcome CertificateAuthority::retire() noexcept
{
    std::unique_lock lock(state_->lifecycle);
    if (state_->state == CaState::retired) {
        return RetireOutcome::already_retired;
    }
    state_->key.destroy();
    state_->state = CaState::retired;
    if (state_->directory) {
        std::error_code ec;
        fs::remove(*state_->directory / "key.pem", ec);
        try {
            state_->write_metadata();
        } catch (...) {
        }
    }
    return RetireOutcome::retired;
}

const Certificate& CertificateAuthority::certificate() const noexcept
{
    return state_->cert;
}

const CertificationChain& CertificateAuthority::chain() const noexcept
{
    return state_->chain;
}

CertificationChain CertificateAuthority::chain_for(const Certificate& leaf) const
{
    CertificationChain c;
    c.certificates.reserve(state_->chain.size() + 1);
    c.certificates.push_back(leaf);
    for (const auto& cert : state_->chain.certificates) {
        c.certificates.push_back(cert);
    }
    return c;
}

CaRole CertificateAuthority::role() const noexcept
{
    return state_->role;
}

CaState CertificateAuthority::state() const noexcept
{
    std::shared_lock lock(state_->lifecycle);
    return state_->state;
}

const AlgorithmSuite& CertificateAuthority::suite() const noexcept
{
    return state_->policy.suite;
}

const CaPolicy& CertificateAuthority::policy() const noexcept
{
    return state_->policy;
}

std::size_t CertificateAuthority::issued_count() const
{
    std::lock_guard lock(state_->serial_mutex);
    return state_->serials.size();
}

void CertificateAuthority::set_registration_check(RegistrationCheck check)
{
    std::unique_lock lock(state_->lifecycle);
    state_->registration = std::move(check);
}

void CertificateAuthority::save(const fs::path& dir, std::string_view passphrase)
{
    fs::create_directories(dir);
    write_text(dir / "cert.pem", to_pem(state_->cert));
    write_text(dir / "chain.pem", to_pem(state_->chain));
    {
        std::shared_lock lock(state_->lifecycle);
        if (state_->state == CaState::active) {
            write_text(dir / "key.pem", state_->key.export_encrypted_pem(passphrase), true);
        }
    }
    {
        std::lock_guard lock(state_->serial_mutex);
        std::vector<std::string> sorted(state_->serials.begin(), state_->serials.end());
        std::sort(sorted.begin(), sorted.end());
        std::string journal;
        for (const auto& s : sorted) {
            journal += s;
            journal += '\n';
        }
        write_text(dir / "serials.txt", journal);
        state_->directory = dir;
    }
    state_->write_metadata();
    if (is_active()) {
        (void)issue_blank_crl();
    }
    std::lock_guard crl_lock(state_->crl_mutex);
    if (state_->crl) {
        write_text(dir / "crl.pem", to_pem(*state_->crl));
    }
}

CertificateAuthority CertificateAuthority::load(const fs::path& dir, std::string_view passphrase, Clock clock)
{
    const auto meta = parse_key_values(read_text(dir / "ca.txt"));
    auto field = [&](const std::string& key) -> std::string {
        const auto it = meta.find(key);
        if (it == meta.end()) {
            throw Error(Errc::malformed_encoding, (dir / "ca.txt").string() + " lacks '" + key + "'");
        }
        return it->second;
    };
    const auto role = ca_role_from_string(field("role"));
    const auto suite = AlgorithmSuite::parse(field("suite"));
    if (!role || !suite) {
        throw Error(Errc::malformed_encoding, (dir / "ca.txt").string() + " has an unknown role or suite");
    }
    const bool retired = field("state") == "retired";

    const auto cert = decode_certificate(as_bytes(read_text(dir / "cert.pem")));
    CertificationChain chain{decode_certificates(read_text(dir / "chain.pem"))};
    if (chain.empty() || !(chain.leaf() == cert)) {
        throw Error(Errc::malformed_encoding, (dir / "chain.pem").string() + " does not start with cert.pem");
    }

    std::optional<KeyPair> key;
    if (!retired) {
        key = KeyPair::import_encrypted_pem(read_text(dir / "key.pem"), passphrase, suite->digest);
        if (!(key->public_key().der() == cert.public_key_info)) {
            throw Error(Errc::malformed_key, (dir / "key.pem").string() + " does not match cert.pem");
        }
    } else {
        // A retired CA has no key. Keep a destroyed placeholder.
        key = KeyPair::generate(*suite);
        key->destroy();
    }

    CaPolicy policy{cert.not_after, *suite, true};
    auto state = std::make_unique<State>(std::move(*key), *role, policy, std::move(clock));
    state->cert = cert;
    state->chain = std::move(chain);
    state->state = retired ? CaState::retired : CaState::active;
    state->children = meta.count("children") ? std::stoul(meta.at("children")) : 0;
    std::ifstream journal(dir / "serials.txt");
    std::string line;
    while (std::getline(journal, line)) {
        if (!line.empty()) {
            state->serials.insert(line);
        }
    }
    if (fs::exists(dir / "crl.pem")) {
        state->crl = decode_crl(as_bytes(read_text(dir / "crl.pem")));
    }
    state->directory = dir;
    return CertificateAuthority(std::move(state));
}

// ---------------------------------------------------------------------------
// Hierarchy bootstrap

std::vector<HierarchyMember> init_hierarchy(const HierarchyOptions& options, const fs::path& out,
                                            std::string_view passphrase, Clock clock)
{
    auto root = CertificateAuthority::create_root(options.root_name, CaPolicy{options.not_after, options.suite, true},
                                                  std::move(clock));
    std::vector<HierarchyMember> members;
    const auto root_dir = out / "root";
    root.save(root_dir, passphrase);
    members.push_back({root_dir, CaRole::root, root.certificate()});

    const auto root_cn = options.root_name.common_name_value();
    for (std::size_t i = 1; i <= options.intermediates; ++i) {
        auto intermediate = root.create_subordinate(
            with_common_name(options.root_name, root_cn + " Intermediate " + two_digits(i)), CaRole::intermediate);
        const auto int_dir = root_dir / ("intermediate-" + two_digits(i));
        intermediate.save(int_dir, passphrase);
        members.push_back({int_dir, CaRole::intermediate, intermediate.certificate()});

        auto pool = intermediate.spawn_issuer_pool(options.issuers_per_intermediate);
        for (std::size_t k = 0; k < pool.size(); ++k) {
            const auto iss_dir = int_dir / ("issuer-" + two_digits(k + 1));
            pool[k].save(iss_dir, passphrase);
            members.push_back({iss_dir, CaRole::issuer, pool[k].certificate()});
        }
    }
    return members;
}

std::vector<fs::path> issuer_directories(const fs::path& intermediate_dir)
{
    std::vector<fs::path> out;
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(intermediate_dir, ec)) {
        if (entry.is_directory() && entry.path().filename().string().starts_with("issuer-") &&
            fs::exists(entry.path() / "ca.txt")) {
            out.push_back(entry.path());
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace otc
