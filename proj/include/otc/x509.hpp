/**
 * @file x509.hpp
 * @brief Certificate, CSR and CRL data model, the one-time-certificate extension, and their DER/PEM codec
 *
 * The model keeps every field needed to re-encode what it decoded: string
 * tags of name attributes, raw SubjectPublicKeyInfo, and unknown extensions
 * as opaque (oid, critical, value) triples. Decoding canonical DER and
 * encoding the result gives back the same bytes.
 *
 * Copyright 2026 otc contributors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include "otc/crypto.hpp"
#include "otc/der.hpp"
#include "otc/time.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace otc {

namespace oids {
inline const der::Oid common_name{2, 5, 4, 3};
inline const der::Oid serial_number{2, 5, 4, 5};
inline const der::Oid country{2, 5, 4, 6};
inline const der::Oid locality{2, 5, 4, 7};
inline const der::Oid state{2, 5, 4, 8};
inline const der::Oid organization{2, 5, 4, 10};
inline const der::Oid organizational_unit{2, 5, 4, 11};
inline const der::Oid domain_component{0, 9, 2342, 19200300, 100, 1, 25};
inline const der::Oid user_id{0, 9, 2342, 19200300, 100, 1, 1};
inline const der::Oid email_address{1, 2, 840, 113549, 1, 9, 1};

inline const der::Oid subject_key_identifier{2, 5, 29, 14};
inline const der::Oid key_usage{2, 5, 29, 15};
inline const der::Oid basic_constraints{2, 5, 29, 19};
inline const der::Oid crl_number{2, 5, 29, 20};
inline const der::Oid authority_key_identifier{2, 5, 29, 35};
inline const der::Oid extension_request{1, 2, 840, 113549, 1, 9, 14};

inline const der::Oid sha256{2, 16, 840, 1, 101, 3, 4, 2, 1};
inline const der::Oid sha384{2, 16, 840, 1, 101, 3, 4, 2, 2};
inline const der::Oid ecdsa_with_sha256{1, 2, 840, 10045, 4, 3, 2};
inline const der::Oid ecdsa_with_sha384{1, 2, 840, 10045, 4, 3, 3};
inline const der::Oid sha256_with_rsa{1, 2, 840, 113549, 1, 1, 11};
inline const der::Oid sha384_with_rsa{1, 2, 840, 113549, 1, 1, 12};

/// Private-enterprise arc carrying the signed document's digest.
inline const der::Oid otc_document_digest{1, 3, 6, 1, 4, 1, 55555, 1, 1};
} // namespace oids

struct AlgorithmIdentifier {
    der::Oid algorithm;
    std::optional<Bytes> parameters; ///< raw DER of the parameters element

    friend bool operator==(const AlgorithmIdentifier&, const AlgorithmIdentifier&) = default;
};

AlgorithmIdentifier signature_algorithm_for(const AlgorithmSuite& suite);
std::optional<DigestAlgorithm> signature_digest(const AlgorithmIdentifier& alg) noexcept;
AlgorithmIdentifier digest_algorithm_identifier(DigestAlgorithm alg);

struct NameAttribute {
    der::Oid type;
    std::string value;
    std::uint8_t string_tag = der::tag::utf8_string;

    friend bool operator==(const NameAttribute&, const NameAttribute&) = default;
};

/// An X.501 Name with one attribute per RDN, kept in encoding order.
class DistinguishedName {
public:
    DistinguishedName() = default;
    explicit DistinguishedName(std::vector<NameAttribute> attributes) : attributes_(std::move(attributes)) {}

    static DistinguishedName common_name(std::string_view cn);

    /// RFC 4514 syntax, e.g. `CN=Alice,O=Example`. Throws Errc::invalid_argument.
    static DistinguishedName parse(std::string_view text);

    /// RFC 4514 string (RDNs in reverse encoding order).
    std::string to_string() const;

    std::optional<std::string> find(const der::Oid& type) const;
    std::string common_name_value() const { return find(oids::common_name).value_or(""); }

    const std::vector<NameAttribute>& attributes() const noexcept { return attributes_; }
    bool empty() const noexcept { return attributes_.empty(); }

    void encode(der::Writer& w) const;
    static DistinguishedName decode(der::Reader& r);

    friend bool operator==(const DistinguishedName&, const DistinguishedName&) = default;

private:
    std::vector<NameAttribute> attributes_;
};

struct Extension {
    der::Oid oid;
    bool critical = false;
    Bytes value; ///< contents of extnValue

    friend bool operator==(const Extension&, const Extension&) = default;
};

/// The document digest binding carried by CSRs and one-time certificates.
///
///     OtcDocumentDigest ::= SEQUENCE {
///         hashAlgorithm  AlgorithmIdentifier,
///         docDigest      OCTET STRING }
struct OtcExtension {
    DocumentDigest digest;
    bool critical = false;

    Extension to_extension() const;

    /// Throws Errc::malformed_encoding if the payload does not parse or the
    /// digest length does not match its algorithm.
    static OtcExtension from_extension(const Extension& ext);

    friend bool operator==(const OtcExtension&, const OtcExtension&) = default;
};

std::size_t count_extensions(const std::vector<Extension>& exts, const der::Oid& oid) noexcept;
const Extension* find_extension(const std::vector<Extension>& exts, const der::Oid& oid) noexcept;

struct SigningRequest {
    DistinguishedName subject;
    Bytes public_key_info; ///< SubjectPublicKeyInfo DER
    std::vector<Extension> extensions;
    std::vector<Bytes> other_attributes; ///< non-extensionRequest attributes, raw DER
    AlgorithmIdentifier signature_algorithm;
    Bytes signature;

    Bytes to_be_signed() const;
    PublicKey public_key() const { return PublicKey::from_der(public_key_info); }

    friend bool operator==(const SigningRequest&, const SigningRequest&) = default;
};

struct Certificate {
    int version = 2; ///< 0 = v1, 2 = v3
    Bytes serial;    ///< minimal big-endian magnitude
    AlgorithmIdentifier signature_algorithm;
    DistinguishedName issuer;
    Timestamp not_before{};
    Timestamp not_after{};
    DistinguishedName subject;
    Bytes public_key_info;
    std::vector<Extension> extensions;
    Bytes signature;

    Bytes to_be_signed() const;
    PublicKey public_key() const { return PublicKey::from_der(public_key_info); }
    std::string serial_hex() const { return to_hex(serial); }

    /// basicConstraints cA flag.
    bool is_ca() const;
    std::size_t otc_extension_count() const noexcept;
    /// The first OTC extension, if any. Throws Errc::malformed_encoding if it does not parse.
    std::optional<OtcExtension> otc_extension() const;

    friend bool operator==(const Certificate&, const Certificate&) = default;
};

struct RevokedEntry {
    Bytes serial;
    Timestamp revocation_date{};
    std::vector<Extension> extensions;

    friend bool operator==(const RevokedEntry&, const RevokedEntry&) = default;
};

struct RevocationList {
    int version = 1; ///< 0 = v1 (field absent), 1 = v2
    AlgorithmIdentifier signature_algorithm;
    DistinguishedName issuer;
    Timestamp this_update{};
    std::optional<Timestamp> next_update;
    std::vector<RevokedEntry> revoked;
    std::vector<Extension> extensions;
    Bytes signature;

    Bytes to_be_signed() const;
    bool is_blank() const noexcept { return revoked.empty(); }

    friend bool operator==(const RevocationList&, const RevocationList&) = default;
};

/// Leaf first, root last.
struct CertificationChain {
    std::vector<Certificate> certificates;

    bool empty() const noexcept { return certificates.empty(); }
    std::size_t size() const noexcept { return certificates.size(); }
    const Certificate& leaf() const { return certificates.front(); }
    const Certificate& root() const { return certificates.back(); }

    friend bool operator==(const CertificationChain&, const CertificationChain&) = default;
};

/// Checks that each link's issuer name equals the next subject, each signature
/// verifies under the next key, non-leaf members are CAs, and the last member
/// is self-signed. Returns a description of the first broken link, or nothing.
std::optional<std::string> find_broken_link(const CertificationChain& chain);

/// Every member carries the same notAfter.
bool has_uniform_validity(const CertificationChain& chain) noexcept;

// ---------------------------------------------------------------------------
// Signing and signature checks

Bytes encode_basic_constraints(bool ca);
Bytes encode_key_usage(bool ca);
Bytes encode_key_identifier_extension(ByteView spki);
Bytes encode_authority_key_identifier(ByteView issuer_spki);
/// SHA-1 of the subjectPublicKey bits (RFC 5280 method 1).
Bytes subject_key_id(ByteView spki);

/// Builds a CSR for `subject` carrying the OTC extension for `digest`,
/// self-signed with `key`. Throws Errc::key_destroyed or Errc::invalid_argument.
SigningRequest build_csr(const KeyPair& key, const DistinguishedName& subject, const DocumentDigest& digest);

/// Builds and signs an arbitrary CSR; used for non-OTC requests in tests and tools.
SigningRequest build_csr(const KeyPair& key, const DistinguishedName& subject, std::vector<Extension> extensions);

/// Proof of possession: the self-signature verifies under the embedded key.
bool verify_csr_pop(const SigningRequest& csr) noexcept;

SignatureCheck verify_signed_by(const Certificate& cert, const PublicKey& issuer_key) noexcept;
SignatureCheck verify_signed_by(const RevocationList& crl, const PublicKey& issuer_key) noexcept;

// ---------------------------------------------------------------------------
// Codec

enum class Encoding { der, pem };
enum class ObjectKind { signing_request, certificate, revocation_list };

std::string_view to_string(ObjectKind kind) noexcept;
std::string_view pem_label(ObjectKind kind) noexcept;

Bytes encode(const SigningRequest& csr, Encoding encoding = Encoding::der);
Bytes encode(const Certificate& cert, Encoding encoding = Encoding::der);
Bytes encode(const RevocationList& crl, Encoding encoding = Encoding::der);

std::string to_pem(const SigningRequest& csr);
std::string to_pem(const Certificate& cert);
std::string to_pem(const RevocationList& crl);
std::string to_pem(const CertificationChain& chain);

using AnyObject = std::variant<SigningRequest, Certificate, RevocationList>;

/// Identifies DER input by structure. Throws Errc::malformed_encoding.
ObjectKind detect_kind(ByteView der);

/// Decodes DER or single-block PEM. Throws Errc::malformed_encoding or Errc::kind_mismatch.
AnyObject decode(ByteView bytes, ObjectKind expected);

SigningRequest decode_csr(ByteView bytes);
Certificate decode_certificate(ByteView bytes);
RevocationList decode_crl(ByteView bytes);

/// All CERTIFICATE blocks of a PEM text, in order.
std::vector<Certificate> decode_certificates(std::string_view pem_text);

} // namespace otc
