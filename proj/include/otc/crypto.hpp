/**
 * @file crypto.hpp
 * @brief Key generation, hashing, signing, verification and key destruction
 *
 * Every key used by the library, ephemeral signer keys and CA keys alike,
 * is a KeyPair. A KeyPair is live from generation until destroy(), after
 * which it refuses to sign and its private material has been released
 * through OpenSSL's clearing free. The public half stays readable.
 *
 * Copyright 2026 otc contributors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

using EVP_PKEY = struct evp_pkey_st;
using EVP_MD_CTX = struct evp_md_ctx_st;

namespace otc {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

enum class SignatureAlgorithm { rsa_2048, rsa_3072, ecdsa_p256, ecdsa_p384 };
enum class DigestAlgorithm { sha256, sha384 };

constexpr std::size_t digest_length(DigestAlgorithm alg) noexcept
{
    return alg == DigestAlgorithm::sha256 ? 32 : 48;
}

std::string_view to_string(SignatureAlgorithm alg) noexcept;
std::string_view to_string(DigestAlgorithm alg) noexcept;
std::optional<DigestAlgorithm> digest_algorithm_from_string(std::string_view name) noexcept;

struct AlgorithmSuite {
    SignatureAlgorithm signature = SignatureAlgorithm::ecdsa_p256;
    DigestAlgorithm digest = DigestAlgorithm::sha256;

    /// e.g. `ecdsa-p256-sha256`
    std::string label() const;

    /// Accepts `ecdsa-p256`, `rsa-3072`, ... (natural digest) or an explicit
    /// `<sig>-<digest>` label such as `ecdsa-p256-sha384`.
    static std::optional<AlgorithmSuite> parse(std::string_view label);

    friend bool operator==(const AlgorithmSuite&, const AlgorithmSuite&) = default;
};

inline constexpr AlgorithmSuite kDefaultSuite{};

class DocumentDigest {
public:
    /// Throws Errc::invalid_argument if `value` has the wrong length.
    DocumentDigest(DigestAlgorithm algorithm, Bytes value);

    static DocumentDigest from_hex(DigestAlgorithm algorithm, std::string_view hex);

    DigestAlgorithm algorithm() const noexcept { return algorithm_; }
    const Bytes& bytes() const noexcept { return value_; }
    std::string hex() const;

    friend bool operator==(const DocumentDigest&, const DocumentDigest&) = default;

private:
    DigestAlgorithm algorithm_;
    Bytes value_;
};

/// Incremental hashing for inputs that do not fit in memory.
class Hasher {
public:
    explicit Hasher(DigestAlgorithm algorithm);
    ~Hasher();
    Hasher(Hasher&&) noexcept;
    Hasher& operator=(Hasher&&) noexcept;

    void update(ByteView data);
    DocumentDigest finish();

private:
    DigestAlgorithm algorithm_;
    EVP_MD_CTX* ctx_;
};

DocumentDigest digest_bytes(ByteView data, DigestAlgorithm algorithm);
DocumentDigest digest_document(std::istream& in, DigestAlgorithm algorithm);
DocumentDigest digest_file(const std::filesystem::path& path, DigestAlgorithm algorithm);

/// SHA-1 over `data`, used only for key identifiers.
Bytes key_identifier(ByteView data);

void random_bytes(std::span<std::uint8_t> out);

struct PKeyDeleter {
    void operator()(EVP_PKEY* key) const noexcept;
};

/// An immutable SubjectPublicKeyInfo with its parsed key.
class PublicKey {
public:
    /// Throws Errc::malformed_key.
    static PublicKey from_der(ByteView spki);

    const Bytes& der() const noexcept { return der_; }

    /// The suite signature algorithm this key can serve, if any.
    std::optional<SignatureAlgorithm> algorithm() const noexcept { return algorithm_; }
    int bits() const noexcept;

    /// Never null for a key obtained from from_der() or a KeyPair.
    EVP_PKEY* native() const noexcept;

    friend bool operator==(const PublicKey& a, const PublicKey& b) { return a.der_ == b.der_; }

private:
    friend class KeyPair;
    struct Handle;

    PublicKey() = default;

    Bytes der_;
    std::optional<SignatureAlgorithm> algorithm_;
    std::shared_ptr<Handle> handle_;
};

enum class VerifyStatus { valid, bad_signature, malformed_key, malformed_signature };

std::string_view to_string(VerifyStatus status) noexcept;

/// Outcome of a signature check. Converts to true only for a valid signature;
/// every failure is a plain `false` to callers that only test the boolean.
struct SignatureCheck {
    VerifyStatus status;

    explicit operator bool() const noexcept { return status == VerifyStatus::valid; }
};

SignatureCheck verify_signature(const PublicKey& key, const DocumentDigest& digest, ByteView signature);
SignatureCheck verify_signature(ByteView spki, const DocumentDigest& digest, ByteView signature);

enum class DestroyOutcome { destroyed, already_destroyed };

class KeyPair {
public:
    static KeyPair generate(AlgorithmSuite suite);

    /// Reads a passphrase-protected PKCS#8 PEM. The suite digest cannot be
    /// recovered from the key itself and is supplied by the caller.
    static KeyPair import_encrypted_pem(std::string_view pem, std::string_view passphrase, DigestAlgorithm digest);

    KeyPair(KeyPair&& other) noexcept;
    KeyPair& operator=(KeyPair&& other) noexcept;
    KeyPair(const KeyPair&) = delete;
    KeyPair& operator=(const KeyPair&) = delete;
    ~KeyPair();

    const AlgorithmSuite& suite() const noexcept { return suite_; }
    const PublicKey& public_key() const noexcept { return public_key_; }
    bool is_live() const noexcept { return static_cast<bool>(private_key_); }

    /// Throws Errc::key_destroyed or Errc::digest_suite_mismatch.
    Bytes sign(const DocumentDigest& digest) const;

    /// Hashes `message` with the suite digest, then signs.
    Bytes sign_message(ByteView message) const;

    DestroyOutcome destroy() noexcept;

    std::string export_encrypted_pem(std::string_view passphrase) const;

    /// Number of live key pairs in the process. Used by leak checks.
    static std::size_t live_count() noexcept;

private:
    KeyPair(AlgorithmSuite suite, std::unique_ptr<EVP_PKEY, PKeyDeleter> key);

    AlgorithmSuite suite_;
    std::unique_ptr<EVP_PKEY, PKeyDeleter> private_key_;
    PublicKey public_key_;
};

inline KeyPair generate_keypair(AlgorithmSuite suite) { return KeyPair::generate(suite); }
inline Bytes sign_digest(const KeyPair& key, const DocumentDigest& digest) { return key.sign(digest); }
inline DestroyOutcome destroy_key(KeyPair& key) noexcept { return key.destroy(); }

std::string to_hex(ByteView data);
std::optional<Bytes> from_hex(std::string_view hex);

} // namespace otc
