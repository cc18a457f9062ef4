/**
 * @file x509.cpp
 * @brief X.509 certificate, CSR and CRL codec (RFC 5280 / RFC 2986 layouts)
 *
 * Copyright 2026 otc contributors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "otc/x509.hpp"

#include "otc/error.hpp"
#include "otc/pem.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace otc {

namespace {

using der::Reader;
using der::Writer;
namespace tag = der::tag;

struct ShortName {
    std::string_view name;
    const der::Oid* oid;
    std::uint8_t default_tag;
};

const std::array<ShortName, 10>& short_names()
{
    static const std::array<ShortName, 10> kNames{{
        {"CN", &oids::common_name, tag::utf8_string},
        {"C", &oids::country, tag::printable_string},
        {"L", &oids::locality, tag::utf8_string},
        {"ST", &oids::state, tag::utf8_string},
        {"O", &oids::organization, tag::utf8_string},
        {"OU", &oids::organizational_unit, tag::utf8_string},
        {"serialNumber", &oids::serial_number, tag::printable_string},
        {"DC", &oids::domain_component, tag::ia5_string},
        {"UID", &oids::user_id, tag::utf8_string},
        {"emailAddress", &oids::email_address, tag::ia5_string},
    }};
    return kNames;
}

bool is_string_tag(std::uint8_t t)
{
    return t == tag::utf8_string || t == tag::printable_string || t == tag::ia5_string || t == tag::t61_string ||
           t == tag::bmp_string;
}

void encode_algorithm(Writer& w, const AlgorithmIdentifier& alg)
{
    w.sequence([&](Writer& s) {
        s.oid(alg.algorithm);
        if (alg.parameters) {
            s.raw(*alg.parameters);
        }
    });
}

AlgorithmIdentifier decode_algorithm(Reader& r, std::string_view what)
{
    auto s = r.sequence(what);
    AlgorithmIdentifier alg;
    alg.algorithm = s.read_oid(what);
    if (!s.empty()) {
        const auto params = s.read();
        alg.parameters = Bytes(params.encoded.begin(), params.encoded.end());
    }
    s.expect_end(what);
    return alg;
}

void encode_extension_list(Writer& w, const std::vector<Extension>& exts)
{
    w.sequence([&](Writer& seq) {
        for (const auto& ext : exts) {
            seq.sequence([&](Writer& e) {
                e.oid(ext.oid);
                if (ext.critical) {
                    e.boolean(true);
                }
                e.octet_string(ext.value);
            });
        }
    });
}

std::vector<Extension> decode_extension_list(Reader& r)
{
    auto seq = r.sequence("Extensions");
    std::vector<Extension> exts;
    while (!seq.empty()) {
        auto e = seq.sequence("Extension");
        Extension ext;
        ext.oid = e.read_oid("extnID");
        if (e.peek_tag() == tag::boolean) {
            const auto offset = e.offset();
            ext.critical = e.read_boolean("critical");
            if (!ext.critical) {
                throw Error(Errc::malformed_encoding, "DEFAULT FALSE critical flag must be omitted", offset);
            }
        }
        ext.value = e.read_octet_string("extnValue");
        e.expect_end("Extension");
        exts.push_back(std::move(ext));
    }
    return exts;
}

Bytes signed_envelope(ByteView tbs, const AlgorithmIdentifier& alg, ByteView signature)
{
    Writer w;
    w.sequence([&](Writer& s) {
        s.raw(tbs);
        encode_algorithm(s, alg);
        s.bit_string(signature);
    });
    return w.take();
}

SignatureCheck verify_tbs(ByteView tbs, const AlgorithmIdentifier& alg, ByteView signature, const PublicKey& key)
{
    const auto digest_alg = signature_digest(alg);
    if (!digest_alg) {
        return {VerifyStatus::malformed_signature};
    }
    return verify_signature(key, digest_bytes(tbs, *digest_alg), signature);
}

Bytes output(Bytes der, Encoding encoding, ObjectKind kind)
{
    if (encoding == Encoding::der) {
        return der;
    }
    const auto text = pem::encode(pem_label(kind), der);
    return Bytes(text.begin(), text.end());
}

/// Unwraps PEM if present, checking the armor label.
Bytes to_der(ByteView bytes, ObjectKind expected)
{
    if (!pem::looks_like_pem(bytes)) {
        return Bytes(bytes.begin(), bytes.end());
    }
    const auto blocks = pem::decode_all(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
    if (blocks.size() != 1) {
        throw Error(Errc::malformed_encoding, "expected exactly one PEM block, found " + std::to_string(blocks.size()));
    }
    if (blocks.front().label != pem_label(expected)) {
        throw Error(Errc::kind_mismatch,
                    "PEM label '" + blocks.front().label + "' where '" + std::string(pem_label(expected)) + "' expected");
    }
    return blocks.front().der;
}

void check_kind(ByteView der, ObjectKind expected)
{
    const auto actual = detect_kind(der);
    if (actual != expected) {
        throw Error(Errc::kind_mismatch,
                    "input is a " + std::string(to_string(actual)) + ", not a " + std::string(to_string(expected)));
    }
}

SigningRequest decode_csr_der(ByteView der)
{
    Reader top(der);
    auto outer = top.sequence("CertificationRequest");
    top.expect_end("CertificationRequest");

    SigningRequest csr;
    auto info = outer.sequence("CertificationRequestInfo");
    const auto version_offset = info.offset();
    if (info.read_small_integer("version") != 0) {
        throw Error(Errc::malformed_encoding, "unsupported CSR version", version_offset);
    }
    csr.subject = DistinguishedName::decode(info);
    const auto spki = info.expect(tag::sequence, "SubjectPublicKeyInfo");
    csr.public_key_info.assign(spki.encoded.begin(), spki.encoded.end());
    auto attrs = info.expect(tag::context(0), "attributes").reader();
    bool seen_extensions = false;
    while (!attrs.empty()) {
        const auto attr = attrs.expect(tag::sequence, "Attribute");
        auto a = attr.reader();
        const auto type = a.read_oid("attribute type");
        if (type == oids::extension_request) {
            if (seen_extensions) {
                throw Error(Errc::malformed_encoding, "duplicate extensionRequest attribute", attr.offset);
            }
            seen_extensions = true;
            auto values = a.expect(tag::set, "attribute values").reader();
            csr.extensions = decode_extension_list(values);
            values.expect_end("extensionRequest values");
        } else {
            csr.other_attributes.emplace_back(attr.encoded.begin(), attr.encoded.end());
        }
    }
    info.expect_end("CertificationRequestInfo");

    csr.signature_algorithm = decode_algorithm(outer, "signatureAlgorithm");
    csr.signature = outer.read_bit_string("signature");
    outer.expect_end("CertificationRequest");
    return csr;
}

Certificate decode_certificate_der(ByteView der)
{
    Reader top(der);
    auto outer = top.sequence("Certificate");
    top.expect_end("Certificate");

    Certificate cert;
    auto tbs = outer.sequence("TBSCertificate");
    cert.version = 0;
    if (auto v = tbs.optional(tag::context(0))) {
        auto vr = v->reader();
        cert.version = static_cast<int>(vr.read_small_integer("version"));
        vr.expect_end("version");
        if (cert.version != 1 && cert.version != 2) {
            throw Error(Errc::malformed_encoding, "unsupported certificate version", v->offset);
        }
    }
    cert.serial = tbs.read_unsigned_integer("serialNumber");
    const auto inner_alg = decode_algorithm(tbs, "signature");
    cert.issuer = DistinguishedName::decode(tbs);
    auto validity = tbs.sequence("Validity");
    cert.not_before = validity.read_time("notBefore");
    cert.not_after = validity.read_time("notAfter");
    validity.expect_end("Validity");
    cert.subject = DistinguishedName::decode(tbs);
    const auto spki = tbs.expect(tag::sequence, "SubjectPublicKeyInfo");
    cert.public_key_info.assign(spki.encoded.begin(), spki.encoded.end());
    if (tbs.peek_tag() == tag::context(1, false) || tbs.peek_tag() == tag::context(2, false)) {
        tbs.fail("issuer/subject unique identifiers are not supported");
    }
    if (auto exts = tbs.optional(tag::context(3))) {
        if (cert.version != 2) {
            throw Error(Errc::malformed_encoding, "extensions require a v3 certificate", exts->offset);
        }
        auto er = exts->reader();
        cert.extensions = decode_extension_list(er);
        er.expect_end("extensions");
    }
    tbs.expect_end("TBSCertificate");

    const auto outer_offset = outer.offset();
    cert.signature_algorithm = decode_algorithm(outer, "signatureAlgorithm");
    if (!(cert.signature_algorithm == inner_alg)) {
        throw Error(Errc::malformed_encoding, "signature algorithm differs between TBSCertificate and Certificate",
                    outer_offset);
    }
    cert.signature = outer.read_bit_string("signatureValue");
    outer.expect_end("Certificate");
    return cert;
}

RevocationList decode_crl_der(ByteView der)
{
    Reader top(der);
    auto outer = top.sequence("CertificateList");
    top.expect_end("CertificateList");

    RevocationList crl;
    auto tbs = outer.sequence("TBSCertList");
    crl.version = 0;
    if (tbs.peek_tag() == tag::integer) {
        const auto offset = tbs.offset();
        crl.version = static_cast<int>(tbs.read_small_integer("version"));
        if (crl.version != 1) {
            throw Error(Errc::malformed_encoding, "unsupported CRL version", offset);
        }
    }
    const auto inner_alg = decode_algorithm(tbs, "signature");
    crl.issuer = DistinguishedName::decode(tbs);
    crl.this_update = tbs.read_time("thisUpdate");
    if (tbs.at_time()) {
        crl.next_update = tbs.read_time("nextUpdate");
    }
    if (tbs.peek_tag() == tag::sequence) {
        auto list = tbs.sequence("revokedCertificates");
        while (!list.empty()) {
            auto entry = list.sequence("revoked certificate");
            RevokedEntry rev;
            rev.serial = entry.read_unsigned_integer("userCertificate");
            rev.revocation_date = entry.read_time("revocationDate");
            if (!entry.empty()) {
                rev.extensions = decode_extension_list(entry);
            }
            entry.expect_end("revoked certificate");
            crl.revoked.push_back(std::move(rev));
        }
    }
    if (auto exts = tbs.optional(tag::context(0))) {
        auto er = exts->reader();
        crl.extensions = decode_extension_list(er);
        er.expect_end("crlExtensions");
    }
    tbs.expect_end("TBSCertList");

    const auto outer_offset = outer.offset();
    crl.signature_algorithm = decode_algorithm(outer, "signatureAlgorithm");
    if (!(crl.signature_algorithm == inner_alg)) {
        throw Error(Errc::malformed_encoding, "signature algorithm differs between TBSCertList and CertificateList",
                    outer_offset);
    }
    crl.signature = outer.read_bit_string("signatureValue");
    outer.expect_end("CertificateList");
    return crl;
}

} // namespace

// ---------------------------------------------------------------------------
// Algorithm identifiers

AlgorithmIdentifier signature_algorithm_for(const AlgorithmSuite& suite)
{
    const bool sha256 = suite.digest == DigestAlgorithm::sha256;
    switch (suite.signature) {
    case SignatureAlgorithm::ecdsa_p256:
    case SignatureAlgorithm::ecdsa_p384:
        return {sha256 ? oids::ecdsa_with_sha256 : oids::ecdsa_with_sha384, std::nullopt};
    case SignatureAlgorithm::rsa_2048:
    case SignatureAlgorithm::rsa_3072:
        return {sha256 ? oids::sha256_with_rsa : oids::sha384_with_rsa, Bytes{tag::null, 0x00}};
    }
    throw Error(Errc::unsupported_suite, "unknown signature algorithm");
}

std::optional<DigestAlgorithm> signature_digest(const AlgorithmIdentifier& alg) noexcept
{
    if (alg.algorithm == oids::ecdsa_with_sha256 && !alg.parameters) {
        return DigestAlgorithm::sha256;
    }
    if (alg.algorithm == oids::ecdsa_with_sha384 && !alg.parameters) {
        return DigestAlgorithm::sha384;
    }
    const bool null_params = !alg.parameters || *alg.parameters == Bytes{tag::null, 0x00};
    if (alg.algorithm == oids::sha256_with_rsa && null_params) {
        return DigestAlgorithm::sha256;
    }
    if (alg.algorithm == oids::sha384_with_rsa && null_params) {
        return DigestAlgorithm::sha384;
    }
    return std::nullopt;
}

AlgorithmIdentifier digest_algorithm_identifier(DigestAlgorithm alg)
{
    return {alg == DigestAlgorithm::sha256 ? oids::sha256 : oids::sha384, Bytes{tag::null, 0x00}};
}

// ---------------------------------------------------------------------------
// Distinguished names

DistinguishedName DistinguishedName::common_name(std::string_view cn)
{
    return DistinguishedName({NameAttribute{oids::common_name, std::string(cn), tag::utf8_string}});
}

DistinguishedName DistinguishedName::parse(std::string_view text)
{
    auto bad = [&](const std::string& why) -> Error {
        return Error(Errc::invalid_argument, "bad distinguished name '" + std::string(text) + "': " + why);
    };
    std::vector<NameAttribute> rdns;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && text[i] == ' ') {
            ++i;
        }
        const auto eq = text.find('=', i);
        if (eq == std::string_view::npos) {
            throw bad("missing '='");
        }
        auto key = text.substr(i, eq - i);
        while (!key.empty() && key.back() == ' ') {
            key.remove_suffix(1);
        }
        NameAttribute attr;
        bool known = false;
        for (const auto& sn : short_names()) {
            if (sn.name.size() == key.size() &&
                std::equal(key.begin(), key.end(), sn.name.begin(), [](char a, char b) {
                    return std::tolower(static_cast<unsigned char>(a)) == std::tolower(static_cast<unsigned char>(b));
                })) {
                attr.type = *sn.oid;
                attr.string_tag = sn.default_tag;
                known = true;
                break;
            }
        }
        if (!known) {
            try {
                attr.type = der::Oid::parse(key);
            } catch (const Error&) {
                throw bad("unknown attribute type '" + std::string(key) + "'");
            }
        }
        i = eq + 1;
        std::string value;
        std::size_t trailing_unescaped_spaces = 0;
        while (i < text.size() && text[i] != ',') {
            const char c = text[i];
            if (c == '+') {
                throw bad("multi-valued RDNs are not supported");
            }
            if (c == '\\') {
                if (i + 1 >= text.size()) {
                    throw bad("dangling escape");
                }
                const char n = text[i + 1];
                if (std::isxdigit(static_cast<unsigned char>(n)) && i + 2 < text.size() &&
                    std::isxdigit(static_cast<unsigned char>(text[i + 2]))) {
                    const auto byte = from_hex(text.substr(i + 1, 2));
                    value.push_back(static_cast<char>((*byte)[0]));
                    i += 3;
                } else {
                    value.push_back(n);
                    i += 2;
                }
                trailing_unescaped_spaces = 0;
                continue;
            }
            if (c == ' ' && value.empty()) {
                ++i;
                continue;
            }
            trailing_unescaped_spaces = c == ' ' ? trailing_unescaped_spaces + 1 : 0;
            value.push_back(c);
            ++i;
        }
        value.resize(value.size() - trailing_unescaped_spaces);
        attr.value = std::move(value);
        rdns.push_back(std::move(attr));
        if (i < text.size()) {
            ++i; // ','
            if (i == text.size()) {
                throw bad("trailing ','");
            }
        }
    }
    if (rdns.empty()) {
        throw bad("empty");
    }
    return DistinguishedName(std::vector<NameAttribute>(rdns.rbegin(), rdns.rend()));
}

std::string DistinguishedName::to_string() const
{
    std::string out;
    for (auto it = attributes_.rbegin(); it != attributes_.rend(); ++it) {
        if (!out.empty()) {
            out.push_back(',');
        }
        std::string key = it->type.to_string();
        for (const auto& sn : short_names()) {
            if (*sn.oid == it->type) {
                key = sn.name;
                break;
            }
        }
        out += key;
        out.push_back('=');
        const auto& v = it->value;
        for (std::size_t i = 0; i < v.size(); ++i) {
            const char c = v[i];
            const bool special = c == ',' || c == '+' || c == '"' || c == '\\' || c == '<' || c == '>' || c == ';' ||
                                 c == '=' || (i == 0 && (c == '#' || c == ' ')) || (i + 1 == v.size() && c == ' ');
            if (c == '\0') {
                out += "\\00";
            } else if (special) {
                out.push_back('\\');
                out.push_back(c);
            } else {
                out.push_back(c);
            }
        }
    }
    return out;
}

std::optional<std::string> DistinguishedName::find(const der::Oid& type) const
{
    for (const auto& a : attributes_) {
        if (a.type == type) {
            return a.value;
        }
    }
    return std::nullopt;
}

void DistinguishedName::encode(Writer& w) const
{
    w.sequence([&](Writer& name) {
        for (const auto& a : attributes_) {
            name.constructed(tag::set, [&](Writer& rdn) {
                rdn.sequence([&](Writer& atv) {
                    atv.oid(a.type);
                    atv.string(a.string_tag, a.value);
                });
            });
        }
    });
}

DistinguishedName DistinguishedName::decode(Reader& r)
{
    auto name = r.sequence("Name");
    std::vector<NameAttribute> attrs;
    while (!name.empty()) {
        const auto rdn_el = name.expect(tag::set, "RelativeDistinguishedName");
        auto rdn = rdn_el.reader();
        auto atv = rdn.sequence("AttributeTypeAndValue");
        NameAttribute a;
        a.type = atv.read_oid("attribute type");
        const auto value = atv.read();
        if (!is_string_tag(value.tag)) {
            throw Error(Errc::malformed_encoding, "unsupported attribute value type", value.offset);
        }
        a.string_tag = value.tag;
        a.value.assign(reinterpret_cast<const char*>(value.content.data()), value.content.size());
        atv.expect_end("AttributeTypeAndValue");
        if (!rdn.empty()) {
            throw Error(Errc::malformed_encoding, "multi-valued RDNs are not supported", rdn_el.offset);
        }
        attrs.push_back(std::move(a));
    }
    return DistinguishedName(std::move(attrs));
}

// ---------------------------------------------------------------------------
// Extensions

Extension OtcExtension::to_extension() const
{
    Writer w;
    w.sequence([&](Writer& s) {
        encode_algorithm(s, digest_algorithm_identifier(digest.algorithm()));
        s.octet_string(digest.bytes());
    });
    return Extension{oids::otc_document_digest, critical, w.take()};
}

OtcExtension OtcExtension::from_extension(const Extension& ext)
{
    if (ext.oid != oids::otc_document_digest) {
        throw Error(Errc::invalid_argument, "not an OTC extension: " + ext.oid.to_string());
    }
    Reader top(ext.value);
    auto s = top.sequence("OtcDocumentDigest");
    top.expect_end("OtcDocumentDigest");
    const auto alg_offset = s.offset();
    const auto alg = decode_algorithm(s, "hashAlgorithm");
    const bool params_ok = !alg.parameters || *alg.parameters == Bytes{tag::null, 0x00};
    std::optional<DigestAlgorithm> digest_alg;
    if (alg.algorithm == oids::sha256 && params_ok) {
        digest_alg = DigestAlgorithm::sha256;
    } else if (alg.algorithm == oids::sha384 && params_ok) {
        digest_alg = DigestAlgorithm::sha384;
    } else {
        throw Error(Errc::malformed_encoding, "unsupported hash algorithm " + alg.algorithm.to_string(), alg_offset);
    }
    const auto value_offset = s.offset();
    auto value = s.read_octet_string("docDigest");
    s.expect_end("OtcDocumentDigest");
    if (value.size() != digest_length(*digest_alg)) {
        throw Error(Errc::malformed_encoding, "digest length does not match its algorithm", value_offset);
    }
    return OtcExtension{DocumentDigest(*digest_alg, std::move(value)), ext.critical};
}

std::size_t count_extensions(const std::vector<Extension>& exts, const der::Oid& oid) noexcept
{
    std::size_t n = 0;
    for (const auto& e : exts) {
        n += e.oid == oid ? 1 : 0;
    }
    return n;
}

const Extension* find_extension(const std::vector<Extension>& exts, const der::Oid& oid) noexcept
{
    for (const auto& e : exts) {
        if (e.oid == oid) {
            return &e;
        }
    }
    return nullptr;
}

Bytes encode_basic_constraints(bool ca)
{
    Writer w;
    w.sequence([&](Writer& s) {
        if (ca) {
            s.boolean(true);
        }
    });
    return w.take();
}

Bytes encode_key_usage(bool ca)
{
    Writer w;
    if (ca) {
        // keyCertSign (5) | cRLSign (6)
        const std::uint8_t bits = 0x06;
        w.bit_string(ByteView(&bits, 1), 1);
    } else {
        // digitalSignature (0) | nonRepudiation (1)
        const std::uint8_t bits = 0xc0;
        w.bit_string(ByteView(&bits, 1), 6);
    }
    return w.take();
}

Bytes subject_key_id(ByteView spki)
{
    Reader top(spki);
    auto s = top.sequence("SubjectPublicKeyInfo");
    (void)s.read(); // algorithm
    const auto bits = s.expect(tag::bit_string, "subjectPublicKey");
    if (bits.content.empty()) {
        throw Error(Errc::malformed_key, "empty subjectPublicKey");
    }
    return key_identifier(bits.content.subspan(1));
}

Bytes encode_key_identifier_extension(ByteView spki)
{
    Writer w;
    w.octet_string(subject_key_id(spki));
    return w.take();
}

Bytes encode_authority_key_identifier(ByteView issuer_spki)
{
    Writer w;
    w.sequence([&](Writer& s) { s.tlv(tag::context(0, false), subject_key_id(issuer_spki)); });
    return w.take();
}

bool Certificate::is_ca() const
{
    const auto* ext = find_extension(extensions, oids::basic_constraints);
    if (ext == nullptr) {
        return false;
    }
    Reader top(ext->value);
    auto s = top.sequence("BasicConstraints");
    return s.peek_tag() == tag::boolean && s.read_boolean("cA");
}

std::size_t Certificate::otc_extension_count() const noexcept
{
    return count_extensions(extensions, oids::otc_document_digest);
}

std::optional<OtcExtension> Certificate::otc_extension() const
{
    const auto* ext = find_extension(extensions, oids::otc_document_digest);
    if (ext == nullptr) {
        return std::nullopt;
    }
    return OtcExtension::from_extension(*ext);
}

// ---------------------------------------------------------------------------
// To-be-signed encodings

Bytes SigningRequest::to_be_signed() const
{
    Writer w;
    w.sequence([&](Writer& info) {
        info.integer(0);
        subject.encode(info);
        info.raw(public_key_info);
        info.constructed(tag::context(0), [&](Writer& attrs) {
            if (!extensions.empty()) {
                attrs.sequence([&](Writer& attr) {
                    attr.oid(oids::extension_request);
                    attr.constructed(tag::set, [&](Writer& values) { encode_extension_list(values, extensions); });
                });
            }
            for (const auto& raw : other_attributes) {
                attrs.raw(raw);
            }
        });
    });
    return w.take();
}

Bytes Certificate::to_be_signed() const
{
    Writer w;
    w.sequence([&](Writer& tbs) {
        if (version != 0) {
            tbs.constructed(tag::context(0), [&](Writer& v) { v.integer(version); });
        }
        tbs.unsigned_integer(serial);
        encode_algorithm(tbs, signature_algorithm);
        issuer.encode(tbs);
        tbs.sequence([&](Writer& validity) {
            validity.time(not_before);
            validity.time(not_after);
        });
        subject.encode(tbs);
        tbs.raw(public_key_info);
        if (!extensions.empty()) {
            tbs.constructed(tag::context(3), [&](Writer& e) { encode_extension_list(e, extensions); });
        }
    });
    return w.take();
}

Bytes RevocationList::to_be_signed() const
{
    Writer w;
    w.sequence([&](Writer& tbs) {
        if (version != 0) {
            tbs.integer(version);
        }
        encode_algorithm(tbs, signature_algorithm);
        issuer.encode(tbs);
        tbs.time(this_update);
        if (next_update) {
            tbs.time(*next_update);
        }
        if (!revoked.empty()) {
            tbs.sequence([&](Writer& list) {
                for (const auto& rev : revoked) {
                    list.sequence([&](Writer& entry) {
                        entry.unsigned_integer(rev.serial);
                        entry.time(rev.revocation_date);
                        if (!rev.extensions.empty()) {
                            encode_extension_list(entry, rev.extensions);
                        }
                    });
                }
            });
        }
        if (!extensions.empty()) {
            tbs.constructed(tag::context(0), [&](Writer& e) { encode_extension_list(e, extensions); });
        }
    });
    return w.take();
}

// ---------------------------------------------------------------------------
// Chains

std::optional<std::string> find_broken_link(const CertificationChain& chain)
{
    if (chain.empty()) {
        return "empty chain";
    }
    const auto& certs = chain.certificates;
    for (std::size_t i = 0; i < certs.size(); ++i) {
        const auto& cert = certs[i];
        const auto& issuer = i + 1 < certs.size() ? certs[i + 1] : cert;
        if (!(cert.issuer == issuer.subject)) {
            return "certificate " + std::to_string(i) + " (" + cert.subject.to_string() + ") names issuer '" +
                   cert.issuer.to_string() + "' but the next certificate is '" + issuer.subject.to_string() + "'";
        }
        if (i > 0 && !cert.is_ca()) {
            return "certificate " + std::to_string(i) + " (" + cert.subject.to_string() + ") is not a CA";
        }
        try {
            const auto check = verify_signed_by(cert, issuer.public_key());
            if (!check) {
                return "signature of certificate " + std::to_string(i) + " (" + cert.subject.to_string() +
                       ") does not verify: " + std::string(to_string(check.status));
            }
        } catch (const Error& e) {
            return "certificate " + std::to_string(i + 1) + " has an unusable public key: " + e.what();
        }
    }
    return std::nullopt;
}

bool has_uniform_validity(const CertificationChain& chain) noexcept
{
    for (const auto& c : chain.certificates) {
        if (c.not_after != chain.certificates.front().not_after) {
            return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// CSRs and signatures

SigningRequest build_csr(const KeyPair& key, const DistinguishedName& subject, std::vector<Extension> extensions)
{
    if (!key.is_live()) {
        throw Error(Errc::key_destroyed, "cannot build a CSR with a destroyed key");
    }
    if (subject.common_name_value().empty()) {
        throw Error(Errc::invalid_argument, "subject needs a non-empty commonName");
    }
    SigningRequest csr;
    csr.subject = subject;
    csr.public_key_info = key.public_key().der();
    csr.extensions = std::move(extensions);
    csr.signature_algorithm = signature_algorithm_for(key.suite());
    csr.signature = key.sign_message(csr.to_be_signed());
    return csr;
}

SigningRequest build_csr(const KeyPair& key, const DistinguishedName& subject, const DocumentDigest& digest)
{
    return build_csr(key, subject, std::vector<Extension>{OtcExtension{digest, false}.to_extension()});
}

bool verify_csr_pop(const SigningRequest& csr) noexcept
{
    try {
        return static_cast<bool>(verify_tbs(csr.to_be_signed(), csr.signature_algorithm, csr.signature, csr.public_key()));
    } catch (...) {
        return false;
    }
}

SignatureCheck verify_signed_by(const Certificate& cert, const PublicKey& issuer_key) noexcept
{
    try {
        return verify_tbs(cert.to_be_signed(), cert.signature_algorithm, cert.signature, issuer_key);
    } catch (...) {
        return {VerifyStatus::malformed_signature};
    }
}

SignatureCheck verify_signed_by(const RevocationList& crl, const PublicKey& issuer_key) noexcept
{
    try {
        return verify_tbs(crl.to_be_signed(), crl.signature_algorithm, crl.signature, issuer_key);
    } catch (...) {
        return {VerifyStatus::malformed_signature};
    }
}

// ---------------------------------------------------------------------------
// Codec entry points

std::string_view to_string(ObjectKind kind) noexcept
{
    switch (kind) {
    case ObjectKind::signing_request:
        return "certificate signing request";
    case ObjectKind::certificate:
        return "certificate";
    case ObjectKind::revocation_list:
        return "certificate revocation list";
    }
    return "unknown";
}

std::string_view pem_label(ObjectKind kind) noexcept
{
    switch (kind) {
    case ObjectKind::signing_request:
        return pem::kCertificateRequest;
    case ObjectKind::certificate:
        return pem::kCertificate;
    case ObjectKind::revocation_list:
        return pem::kCrl;
    }
    return "";
}

Bytes encode(const SigningRequest& csr, Encoding encoding)
{
    return output(signed_envelope(csr.to_be_signed(), csr.signature_algorithm, csr.signature), encoding,
                  ObjectKind::signing_request);
}

Bytes encode(const Certificate& cert, Encoding encoding)
{
    return output(signed_envelope(cert.to_be_signed(), cert.signature_algorithm, cert.signature), encoding,
                  ObjectKind::certificate);
}

Bytes encode(const RevocationList& crl, Encoding encoding)
{
    return output(signed_envelope(crl.to_be_signed(), crl.signature_algorithm, crl.signature), encoding,
                  ObjectKind::revocation_list);
}

std::string to_pem(const SigningRequest& csr)
{
    const auto b = encode(csr, Encoding::pem);
    return std::string(b.begin(), b.end());
}

std::string to_pem(const Certificate& cert)
{
    const auto b = encode(cert, Encoding::pem);
    return std::string(b.begin(), b.end());
}

std::string to_pem(const RevocationList& crl)
{
    const auto b = encode(crl, Encoding::pem);
    return std::string(b.begin(), b.end());
}

std::string to_pem(const CertificationChain& chain)
{
    std::string out;
    for (const auto& c : chain.certificates) {
        out += to_pem(c);
    }
    return out;
}

ObjectKind detect_kind(ByteView der)
{
    Reader top(der);
    auto outer = top.sequence("signed object");
    auto tbs = outer.sequence("to-be-signed body");
    const auto first = tbs.read();
    if (first.tag == tag::context(0)) {
        return ObjectKind::certificate;
    }
    if (first.tag == tag::sequence) {
        return ObjectKind::revocation_list; // v1 CRL: AlgorithmIdentifier first
    }
    if (first.tag != tag::integer) {
        throw Error(Errc::malformed_encoding, "unrecognised to-be-signed structure", first.offset);
    }
    const auto second = tbs.expect(tag::sequence, "AlgorithmIdentifier or Name");
    auto second_reader = second.reader();
    const auto inner = second_reader.peek_tag();
    if (inner == tag::set || second.content.empty()) {
        return ObjectKind::signing_request;
    }
    (void)tbs.read(); // issuer
    return tbs.at_time() ? ObjectKind::revocation_list : ObjectKind::certificate;
}

AnyObject decode(ByteView bytes, ObjectKind expected)
{
    const auto der = to_der(bytes, expected);
    check_kind(der, expected);
    switch (expected) {
    case ObjectKind::signing_request:
        return decode_csr_der(der);
    case ObjectKind::certificate:
        return decode_certificate_der(der);
    case ObjectKind::revocation_list:
        return decode_crl_der(der);
    }
    throw Error(Errc::invalid_argument, "unknown object kind");
}

SigningRequest decode_csr(ByteView bytes)
{
    return std::get<SigningRequest>(decode(bytes, ObjectKind::signing_request));
}

Certificate decode_certificate(ByteView bytes)
{
    return std::get<Certificate>(decode(bytes, ObjectKind::certificate));
}

RevocationList decode_crl(ByteView bytes)
{
    return std::get<RevocationList>(decode(bytes, ObjectKind::revocation_list));
}

std::vector<Certificate> decode_certificates(std::string_view pem_text)
{
    std::vector<Certificate> out;
    for (const auto& block : pem::decode_all(pem_text)) {
        if (block.label == pem::kCertificate) {
            check_kind(block.der, ObjectKind::certificate);
            out.push_back(decode_certificate_der(block.der));
        }
    }
    return out;
}

} // namespace otc
