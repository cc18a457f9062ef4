/**
 * @file crypto.cpp
 * @brief OpenSSL-backed implementation of the crypto primitives
 *
 * Copyright 2026 otc contributors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "otc/crypto.hpp"

#include "otc/der.hpp"
#include "otc/error.hpp"

#include <atomic>
#include <array>
#include <cctype>
#include <cstring>
#include <fstream>
#include <mutex>

#include <openssl/bio.h>
#include <openssl/core_names.h>
#include <openssl/ec.h>
#include <openssl/err.h>
#include <openssl/evp.h>
#include <openssl/param_build.h>
#include <openssl/pem.h>
#include <openssl/rand.h>
#include <openssl/x509.h>

namespace otc {

namespace {

std::atomic<std::size_t> g_live_keys{0};

struct MdCtxDeleter {
    void operator()(EVP_MD_CTX* ctx) const noexcept { EVP_MD_CTX_free(ctx); }
};
struct PKeyCtxDeleter {
    void operator()(EVP_PKEY_CTX* ctx) const noexcept { EVP_PKEY_CTX_free(ctx); }
};
struct BioDeleter {
    void operator()(BIO* bio) const noexcept { BIO_free_all(bio); }
};
struct EcdsaSigDeleter {
    void operator()(ECDSA_SIG* sig) const noexcept { ECDSA_SIG_free(sig); }
};

using PKeyCtxPtr = std::unique_ptr<EVP_PKEY_CTX, PKeyCtxDeleter>;
using BioPtr = std::unique_ptr<BIO, BioDeleter>;

std::string openssl_error()
{
    const unsigned long code = ERR_get_error();
    ERR_clear_error();
    if (code == 0) {
        return "unknown OpenSSL error";
    }
    std::array<char, 256> buf{};
    ERR_error_string_n(code, buf.data(), buf.size());
    return buf.data();
}

[[noreturn]] void throw_crypto(const std::string& what)
{
    throw Error(Errc::crypto_failure, what + ": " + openssl_error());
}

const EVP_MD* message_digest(DigestAlgorithm alg)
{
    return alg == DigestAlgorithm::sha256 ? EVP_sha256() : EVP_sha384();
}

std::optional<SignatureAlgorithm> classify(EVP_PKEY* key)
{
    if (EVP_PKEY_is_a(key, "RSA")) {
        switch (EVP_PKEY_get_bits(key)) {
        case 2048:
            return SignatureAlgorithm::rsa_2048;
        case 3072:
            return SignatureAlgorithm::rsa_3072;
        default:
            return std::nullopt;
        }
    }
    if (EVP_PKEY_is_a(key, "EC")) {
        std::array<char, 64> group{};
        std::size_t len = 0;
        if (EVP_PKEY_get_utf8_string_param(key, OSSL_PKEY_PARAM_GROUP_NAME, group.data(), group.size(), &len) != 1) {
            return std::nullopt;
        }
        const std::string_view name(group.data(), len);
        if (name == "prime256v1" || name == "P-256") {
            return SignatureAlgorithm::ecdsa_p256;
        }
        if (name == "secp384r1" || name == "P-384") {
            return SignatureAlgorithm::ecdsa_p384;
        }
    }
    return std::nullopt;
}

// SubjectPublicKeyInfo is built and parsed here directly for the supported
// algorithms. OpenSSL's generic encoder/decoder path costs several times a
// P-256 key generation, which would distort the key lifecycle timings.

const der::Oid kRsaEncryption{1, 2, 840, 113549, 1, 1, 1};
const der::Oid kEcPublicKey{1, 2, 840, 10045, 2, 1};
const der::Oid kPrime256v1{1, 2, 840, 10045, 3, 1, 7};
const der::Oid kSecp384r1{1, 3, 132, 0, 34};

Bytes bn_param(EVP_PKEY* key, const char* name)
{
    BIGNUM* bn = nullptr;
    if (EVP_PKEY_get_bn_param(key, name, &bn) != 1) {
        throw_crypto(std::string("reading ") + name);
    }
    Bytes out(static_cast<std::size_t>(BN_num_bytes(bn)));
    BN_bn2bin(bn, out.data());
    BN_free(bn);
    return out;
}

Bytes encode_spki_openssl(EVP_PKEY* key)
{
    unsigned char* out = nullptr;
    const int len = i2d_PUBKEY(key, &out);
    if (len <= 0) {
        throw_crypto("encoding public key");
    }
    Bytes der(out, out + len);
    OPENSSL_free(out);
    return der;
}

Bytes encode_spki(EVP_PKEY* key, std::optional<SignatureAlgorithm> alg)
{
    if (!alg) {
        return encode_spki_openssl(key);
    }
    der::Writer w;
    if (*alg == SignatureAlgorithm::rsa_2048 || *alg == SignatureAlgorithm::rsa_3072) {
        der::Writer rsa;
        rsa.sequence([&](der::Writer& seq) {
            seq.unsigned_integer(bn_param(key, OSSL_PKEY_PARAM_RSA_N));
            seq.unsigned_integer(bn_param(key, OSSL_PKEY_PARAM_RSA_E));
        });
        w.sequence([&](der::Writer& spki) {
            spki.sequence([](der::Writer& a) {
                a.oid(kRsaEncryption);
                a.null();
            });
            spki.bit_string(rsa.bytes());
        });
        return w.take();
    }
    std::array<unsigned char, 160> point{};
    std::size_t len = 0;
    if (EVP_PKEY_get_octet_string_param(key, OSSL_PKEY_PARAM_ENCODED_PUBLIC_KEY, point.data(), point.size(), &len) != 1) {
        throw_crypto("reading EC public point");
    }
    w.sequence([&](der::Writer& spki) {
        spki.sequence([&](der::Writer& a) {
            a.oid(kEcPublicKey);
            a.oid(*alg == SignatureAlgorithm::ecdsa_p256 ? kPrime256v1 : kSecp384r1);
        });
        spki.bit_string(ByteView(point.data(), len));
    });
    return w.take();
}

EVP_PKEY* from_params(const char* type, const OSSL_PARAM* params)
{
    std::unique_ptr<EVP_PKEY_CTX, decltype(&EVP_PKEY_CTX_free)> ctx(EVP_PKEY_CTX_new_from_name(nullptr, type, nullptr),
                                                                     EVP_PKEY_CTX_free);
    EVP_PKEY* out = nullptr;
    if (!ctx || EVP_PKEY_fromdata_init(ctx.get()) != 1 ||
        EVP_PKEY_fromdata(ctx.get(), &out, EVP_PKEY_PUBLIC_KEY, const_cast<OSSL_PARAM*>(params)) != 1) {
        ERR_clear_error();
        return nullptr;
    }
    return out;
}

/// nullptr: not an algorithm handled here; throws on malformed input for one
/// that is.
EVP_PKEY* decode_spki_direct(ByteView spki)
{
    der::Reader top(spki);
    auto body = top.sequence("SubjectPublicKeyInfo");
    top.expect_end("SubjectPublicKeyInfo");
    auto alg = body.sequence("AlgorithmIdentifier");
    const auto oid = alg.read_oid("algorithm");
    if (oid == kRsaEncryption) {
        alg.expect(der::tag::null, "RSA parameters");
        alg.expect_end("AlgorithmIdentifier");
        const auto key_bits = body.read_bit_string("subjectPublicKey");
        body.expect_end("SubjectPublicKeyInfo");
        der::Reader rsa_top(key_bits);
        auto rsa = rsa_top.sequence("RSAPublicKey");
        rsa_top.expect_end("RSAPublicKey");
        const auto n = rsa.read_unsigned_integer("modulus");
        const auto e = rsa.read_unsigned_integer("publicExponent");
        rsa.expect_end("RSAPublicKey");

        std::unique_ptr<BIGNUM, decltype(&BN_free)> bn_n(BN_bin2bn(n.data(), static_cast<int>(n.size()), nullptr), BN_free);
        std::unique_ptr<BIGNUM, decltype(&BN_free)> bn_e(BN_bin2bn(e.data(), static_cast<int>(e.size()), nullptr), BN_free);
        std::unique_ptr<OSSL_PARAM_BLD, decltype(&OSSL_PARAM_BLD_free)> bld(OSSL_PARAM_BLD_new(), OSSL_PARAM_BLD_free);
        if (!bn_n || !bn_e || !bld || OSSL_PARAM_BLD_push_BN(bld.get(), OSSL_PKEY_PARAM_RSA_N, bn_n.get()) != 1 ||
            OSSL_PARAM_BLD_push_BN(bld.get(), OSSL_PKEY_PARAM_RSA_E, bn_e.get()) != 1) {
            throw_crypto("building RSA parameters");
        }
        std::unique_ptr<OSSL_PARAM, decltype(&OSSL_PARAM_free)> params(OSSL_PARAM_BLD_to_param(bld.get()), OSSL_PARAM_free);
        return params ? from_params("RSA", params.get()) : nullptr;
    }
    if (oid == kEcPublicKey) {
        if (alg.peek_tag() != der::tag::oid) {
            return nullptr;
        }
        const auto curve = alg.read_oid("namedCurve");
        alg.expect_end("AlgorithmIdentifier");
        const char* group = curve == kPrime256v1 ? "P-256" : curve == kSecp384r1 ? "P-384" : nullptr;
        if (group == nullptr) {
            return nullptr;
        }
        auto point = body.read_bit_string("subjectPublicKey");
        body.expect_end("SubjectPublicKeyInfo");
        OSSL_PARAM params[] = {
            OSSL_PARAM_construct_utf8_string(OSSL_PKEY_PARAM_GROUP_NAME, const_cast<char*>(group), 0),
            OSSL_PARAM_construct_octet_string(OSSL_PKEY_PARAM_PUB_KEY, point.data(), point.size()),
            OSSL_PARAM_construct_end(),
        };
        EVP_PKEY* key = from_params("EC", params);
        if (key == nullptr) {
            throw Error(Errc::malformed_key, "EC public point is not on the named curve");
        }
        return key;
    }
    return nullptr;
}

bool well_formed_ecdsa_signature(ByteView signature)
{
    const unsigned char* p = signature.data();
    std::unique_ptr<ECDSA_SIG, EcdsaSigDeleter> sig(d2i_ECDSA_SIG(nullptr, &p, static_cast<long>(signature.size())));
    ERR_clear_error();
    if (!sig || p != signature.data() + signature.size()) {
        return false;
    }
    // Reject BER variants: the re-encoding must be identical.
    unsigned char* der = nullptr;
    const int len = i2d_ECDSA_SIG(sig.get(), &der);
    const bool same = len == static_cast<int>(signature.size()) && std::memcmp(der, signature.data(), signature.size()) == 0;
    OPENSSL_free(der);
    return same;
}

} // namespace

// ---------------------------------------------------------------------------
// Names

std::string_view to_string(SignatureAlgorithm alg) noexcept
{
    switch (alg) {
    case SignatureAlgorithm::rsa_2048:
        return "RSA-2048";
    case SignatureAlgorithm::rsa_3072:
        return "RSA-3072";
    case SignatureAlgorithm::ecdsa_p256:
        return "ECDSA-P256";
    case SignatureAlgorithm::ecdsa_p384:
        return "ECDSA-P384";
    }
    return "unknown";
}

std::string_view to_string(DigestAlgorithm alg) noexcept
{
    return alg == DigestAlgorithm::sha256 ? "SHA-256" : "SHA-384";
}

std::optional<DigestAlgorithm> digest_algorithm_from_string(std::string_view name) noexcept
{
    if (name == "SHA-256" || name == "sha256" || name == "sha-256") {
        return DigestAlgorithm::sha256;
    }
    if (name == "SHA-384" || name == "sha384" || name == "sha-384") {
        return DigestAlgorithm::sha384;
    }
    return std::nullopt;
}

std::string AlgorithmSuite::label() const
{
    std::string out;
    switch (signature) {
    case SignatureAlgorithm::rsa_2048:
        out = "rsa-2048";
        break;
    case SignatureAlgorithm::rsa_3072:
        out = "rsa-3072";
        break;
    case SignatureAlgorithm::ecdsa_p256:
        out = "ecdsa-p256";
        break;
    case SignatureAlgorithm::ecdsa_p384:
        out = "ecdsa-p384";
        break;
    }
    out += digest == DigestAlgorithm::sha256 ? "-sha256" : "-sha384";
    return out;
}

std::optional<AlgorithmSuite> AlgorithmSuite::parse(std::string_view label)
{
    struct Entry {
        std::string_view name;
        SignatureAlgorithm sig;
        DigestAlgorithm natural;
    };
    static constexpr std::array<Entry, 4> kEntries{{
        {"rsa-2048", SignatureAlgorithm::rsa_2048, DigestAlgorithm::sha256},
        {"rsa-3072", SignatureAlgorithm::rsa_3072, DigestAlgorithm::sha256},
        {"ecdsa-p256", SignatureAlgorithm::ecdsa_p256, DigestAlgorithm::sha256},
        {"ecdsa-p384", SignatureAlgorithm::ecdsa_p384, DigestAlgorithm::sha384},
    }};
    std::string lower(label);
    for (auto& c : lower) {
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    for (const auto& e : kEntries) {
        if (lower == e.name) {
            return AlgorithmSuite{e.sig, e.natural};
        }
        if (lower.size() == e.name.size() + 7 && lower.starts_with(e.name)) {
            const auto tail = std::string_view(lower).substr(e.name.size());
            if (tail == "-sha256") {
                return AlgorithmSuite{e.sig, DigestAlgorithm::sha256};
            }
            if (tail == "-sha384") {
                return AlgorithmSuite{e.sig, DigestAlgorithm::sha384};
            }
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Hex

std::string to_hex(ByteView data)
{
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    out.reserve(data.size() * 2);
    for (const auto b : data) {
        out.push_back(kDigits[b >> 4]);
        out.push_back(kDigits[b & 0x0f]);
    }
    return out;
}

std::optional<Bytes> from_hex(std::string_view hex)
{
    if (hex.size() % 2 != 0) {
        return std::nullopt;
    }
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        return -1;
    };
    Bytes out;
    out.reserve(hex.size() / 2);
    for (std::size_t i = 0; i < hex.size(); i += 2) {
        const int hi = nibble(hex[i]);
        const int lo = nibble(hex[i + 1]);
        if (hi < 0 || lo < 0) {
            return std::nullopt;
        }
        out.push_back(static_cast<std::uint8_t>((hi << 4) | lo));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Digests

DocumentDigest::DocumentDigest(DigestAlgorithm algorithm, Bytes value)
    : algorithm_(algorithm), value_(std::move(value))
{
    if (value_.size() != digest_length(algorithm_)) {
        throw Error(Errc::invalid_argument, std::string(to_string(algorithm_)) + " digest must be " +
                                                std::to_string(digest_length(algorithm_)) + " bytes, got " +
                                                std::to_string(value_.size()));
    }
}

DocumentDigest DocumentDigest::from_hex(DigestAlgorithm algorithm, std::string_view hex)
{
    auto bytes = otc::from_hex(hex);
    if (!bytes) {
        throw Error(Errc::invalid_argument, "digest is not valid hex");
    }
    return DocumentDigest(algorithm, std::move(*bytes));
}

std::string DocumentDigest::hex() const
{
    return to_hex(value_);
}

Hasher::Hasher(DigestAlgorithm algorithm) : algorithm_(algorithm), ctx_(EVP_MD_CTX_new())
{
    if (ctx_ == nullptr || EVP_DigestInit_ex(ctx_, message_digest(algorithm), nullptr) != 1) {
        EVP_MD_CTX_free(ctx_);
        throw_crypto("initialising digest");
    }
}

Hasher::~Hasher()
{
    EVP_MD_CTX_free(ctx_);
}

Hasher::Hasher(Hasher&& other) noexcept : algorithm_(other.algorithm_), ctx_(other.ctx_)
{
    other.ctx_ = nullptr;
}

Hasher& Hasher::operator=(Hasher&& other) noexcept
{
    if (this != &other) {
        EVP_MD_CTX_free(ctx_);
        algorithm_ = other.algorithm_;
        ctx_ = other.ctx_;
        other.ctx_ = nullptr;
    }
    return *this;
}

void Hasher::update(ByteView data)
{
    if (ctx_ == nullptr) {
        throw Error(Errc::invalid_argument, "hasher already finished");
    }
    if (!data.empty() && EVP_DigestUpdate(ctx_, data.data(), data.size()) != 1) {
        throw_crypto("updating digest");
    }
}

DocumentDigest Hasher::finish()
{
    if (ctx_ == nullptr) {
        throw Error(Errc::invalid_argument, "hasher already finished");
    }
    Bytes out(digest_length(algorithm_));
    unsigned int len = 0;
    if (EVP_DigestFinal_ex(ctx_, out.data(), &len) != 1) {
        throw_crypto("finalising digest");
    }
    EVP_MD_CTX_free(ctx_);
    ctx_ = nullptr;
    return DocumentDigest(algorithm_, std::move(out));
}

DocumentDigest digest_bytes(ByteView data, DigestAlgorithm algorithm)
{
    Hasher h(algorithm);
    h.update(data);
    return h.finish();
}

DocumentDigest digest_document(std::istream& in, DigestAlgorithm algorithm)
{
    Hasher h(algorithm);
    std::array<char, 64 * 1024> buf{};
    while (in) {
        in.read(buf.data(), buf.size());
        const auto got = in.gcount();
        if (got > 0) {
            h.update(ByteView(reinterpret_cast<const std::uint8_t*>(buf.data()), static_cast<std::size_t>(got)));
        }
    }
    if (in.bad() || !in.eof()) {
        throw Error(Errc::io_failure, "error while reading document stream");
    }
    return h.finish();
}

DocumentDigest digest_file(const std::filesystem::path& path, DigestAlgorithm algorithm)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(Errc::io_failure, "cannot open " + path.string());
    }
    return digest_document(in, algorithm);
}

Bytes key_identifier(ByteView data)
{
    Bytes out(20);
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha1(), nullptr) != 1) {
        throw_crypto("computing key identifier");
    }
    return out;
}

void random_bytes(std::span<std::uint8_t> out)
{
    if (RAND_bytes(out.data(), static_cast<int>(out.size())) != 1) {
        throw_crypto("drawing random bytes");
    }
}

// ---------------------------------------------------------------------------
// Public keys and verification

void PKeyDeleter::operator()(EVP_PKEY* key) const noexcept
{
    EVP_PKEY_free(key);
}

// Keys decoded from untrusted bytes are parsed up front. Keys derived from a
// freshly generated pair are only materialized when something verifies with
// them, keeping key generation free of a decode it rarely needs.
struct PublicKey::Handle {
    std::once_flag once;
    std::unique_ptr<EVP_PKEY, PKeyDeleter> key;
};

PublicKey PublicKey::from_der(ByteView spki)
{
    EVP_PKEY* raw = nullptr;
    try {
        raw = decode_spki_direct(spki);
    } catch (const Error& e) {
        throw Error(Errc::malformed_key, std::string("SubjectPublicKeyInfo does not parse: ") + e.what());
    }
    if (raw == nullptr) {
        const unsigned char* p = spki.data();
        raw = d2i_PUBKEY(nullptr, &p, static_cast<long>(spki.size()));
        if (raw == nullptr || p != spki.data() + spki.size()) {
            EVP_PKEY_free(raw);
            ERR_clear_error();
            throw Error(Errc::malformed_key, "SubjectPublicKeyInfo does not parse");
        }
    }
    PublicKey pk;
    pk.handle_ = std::make_shared<Handle>();
    std::call_once(pk.handle_->once, [&] { pk.handle_->key.reset(raw); });
    pk.der_.assign(spki.begin(), spki.end());
    pk.algorithm_ = classify(raw);
    return pk;
}

EVP_PKEY* PublicKey::native() const noexcept
{
    if (!handle_) {
        return nullptr;
    }
    std::call_once(handle_->once, [this] {
        try {
            handle_->key.reset(decode_spki_direct(der_));
        } catch (const Error&) {
        }
        if (!handle_->key) {
            const unsigned char* p = der_.data();
            handle_->key.reset(d2i_PUBKEY(nullptr, &p, static_cast<long>(der_.size())));
            ERR_clear_error();
        }
    });
    return handle_->key.get();
}

int PublicKey::bits() const noexcept
{
    auto* key = native();
    return key ? EVP_PKEY_get_bits(key) : 0;
}

std::string_view to_string(VerifyStatus status) noexcept
{
    switch (status) {
    case VerifyStatus::valid:
        return "valid";
    case VerifyStatus::bad_signature:
        return "bad-signature";
    case VerifyStatus::malformed_key:
        return "malformed-key";
    case VerifyStatus::malformed_signature:
        return "malformed-signature";
    }
    return "unknown";
}

SignatureCheck verify_signature(const PublicKey& key, const DocumentDigest& digest, ByteView signature)
{
    EVP_PKEY* pkey = key.native();
    if (pkey == nullptr) {
        return {VerifyStatus::malformed_key};
    }
    if (EVP_PKEY_is_a(pkey, "EC")) {
        if (!well_formed_ecdsa_signature(signature)) {
            return {VerifyStatus::malformed_signature};
        }
    } else if (EVP_PKEY_is_a(pkey, "RSA")) {
        if (signature.size() != static_cast<std::size_t>(EVP_PKEY_get_size(pkey))) {
            return {VerifyStatus::malformed_signature};
        }
    } else {
        return {VerifyStatus::malformed_key};
    }

    PKeyCtxPtr ctx(EVP_PKEY_CTX_new_from_pkey(nullptr, pkey, nullptr));
    if (!ctx || EVP_PKEY_verify_init(ctx.get()) != 1 ||
        EVP_PKEY_CTX_set_signature_md(ctx.get(), message_digest(digest.algorithm())) != 1) {
        ERR_clear_error();
        return {VerifyStatus::malformed_key};
    }
    const int rc = EVP_PKEY_verify(ctx.get(), signature.data(), signature.size(), digest.bytes().data(),
                                   digest.bytes().size());
    ERR_clear_error();
    return {rc == 1 ? VerifyStatus::valid : VerifyStatus::bad_signature};
}

SignatureCheck verify_signature(ByteView spki, const DocumentDigest& digest, ByteView signature)
{
    try {
        return verify_signature(PublicKey::from_der(spki), digest, signature);
    } catch (const Error&) {
        return {VerifyStatus::malformed_key};
    }
}

// ---------------------------------------------------------------------------
// Key pairs

KeyPair::KeyPair(AlgorithmSuite suite, std::unique_ptr<EVP_PKEY, PKeyDeleter> key)
    : suite_(suite), private_key_(std::move(key))
{
    public_key_.algorithm_ = suite.signature;
    public_key_.der_ = encode_spki(private_key_.get(), public_key_.algorithm_);
    public_key_.handle_ = std::make_shared<PublicKey::Handle>();
    g_live_keys.fetch_add(1, std::memory_order_relaxed);
}

namespace {

/// EC domain parameters built once per curve and shared read-only. Building
/// the group on every call costs about as much as the key generation itself.
EVP_PKEY* curve_parameters(const char* group)
{
    auto build = [](const char* name) -> EVP_PKEY* {
        PKeyCtxPtr ctx(EVP_PKEY_CTX_new_from_name(nullptr, "EC", nullptr));
        EVP_PKEY* params = nullptr;
        if (!ctx || EVP_PKEY_paramgen_init(ctx.get()) != 1 || EVP_PKEY_CTX_set_group_name(ctx.get(), name) != 1 ||
            EVP_PKEY_paramgen(ctx.get(), &params) != 1) {
            ERR_clear_error();
            return nullptr;
        }
        return params;
    };
    static EVP_PKEY* const p256 = build("P-256");
    static EVP_PKEY* const p384 = build("P-384");
    return std::string_view(group) == "P-256" ? p256 : p384;
}

EVP_PKEY* ec_keygen(const char* group)
{
    EVP_PKEY* params = curve_parameters(group);
    if (params == nullptr) {
        return EVP_PKEY_Q_keygen(nullptr, nullptr, "EC", group);
    }
    // One initialized context per thread and curve.
    thread_local PKeyCtxPtr p256_ctx;
    thread_local PKeyCtxPtr p384_ctx;
    auto& ctx = std::string_view(group) == "P-256" ? p256_ctx : p384_ctx;
    if (!ctx) {
        PKeyCtxPtr fresh(EVP_PKEY_CTX_new_from_pkey(nullptr, params, nullptr));
        if (!fresh || EVP_PKEY_keygen_init(fresh.get()) != 1) {
            return nullptr;
        }
        ctx = std::move(fresh);
    }
    EVP_PKEY* key = nullptr;
    if (EVP_PKEY_keygen(ctx.get(), &key) != 1) {
        return nullptr;
    }
    return key;
}

} // namespace

KeyPair KeyPair::generate(AlgorithmSuite suite)
{
    EVP_PKEY* raw = nullptr;
    switch (suite.signature) {
    case SignatureAlgorithm::rsa_2048:
        raw = EVP_PKEY_Q_keygen(nullptr, nullptr, "RSA", static_cast<size_t>(2048));
        break;
    case SignatureAlgorithm::rsa_3072:
        raw = EVP_PKEY_Q_keygen(nullptr, nullptr, "RSA", static_cast<size_t>(3072));
        break;
    case SignatureAlgorithm::ecdsa_p256:
        raw = ec_keygen("P-256");
        break;
    case SignatureAlgorithm::ecdsa_p384:
        raw = ec_keygen("P-384");
        break;
    default:
        throw Error(Errc::unsupported_suite, "unknown signature algorithm");
    }
    if (raw == nullptr) {
        throw_crypto("generating " + std::string(to_string(suite.signature)) + " key");
    }
    return KeyPair(suite, std::unique_ptr<EVP_PKEY, PKeyDeleter>(raw));
}

KeyPair KeyPair::import_encrypted_pem(std::string_view pem, std::string_view passphrase, DigestAlgorithm digest)
{
    BioPtr bio(BIO_new_mem_buf(pem.data(), static_cast<int>(pem.size())));
    if (!bio) {
        throw_crypto("allocating BIO");
    }
    std::string pass(passphrase);
    EVP_PKEY* raw = PEM_read_bio_PrivateKey(bio.get(), nullptr, nullptr, pass.data());
    OPENSSL_cleanse(pass.data(), pass.size());
    if (raw == nullptr) {
        ERR_clear_error();
        throw Error(Errc::malformed_key, "private key does not decrypt or parse (wrong passphrase?)");
    }
    std::unique_ptr<EVP_PKEY, PKeyDeleter> key(raw);
    const auto alg = classify(raw);
    if (!alg) {
        throw Error(Errc::unsupported_suite, "private key is not one of the supported algorithms");
    }
    return KeyPair(AlgorithmSuite{*alg, digest}, std::move(key));
}

KeyPair::KeyPair(KeyPair&& other) noexcept
    : suite_(other.suite_), private_key_(std::move(other.private_key_)), public_key_(other.public_key_)
{
}

KeyPair& KeyPair::operator=(KeyPair&& other) noexcept
{
    if (this != &other) {
        destroy();
        suite_ = other.suite_;
        private_key_ = std::move(other.private_key_);
        public_key_ = other.public_key_;
    }
    return *this;
}

KeyPair::~KeyPair()
{
    destroy();
}

Bytes KeyPair::sign(const DocumentDigest& digest) const
{
    if (!private_key_) {
        throw Error(Errc::key_destroyed, "key pair has been destroyed");
    }
    if (digest.algorithm() != suite_.digest) {
        throw Error(Errc::digest_suite_mismatch, std::string(to_string(digest.algorithm())) +
                                                     " digest given to a " + suite_.label() + " key");
    }
    PKeyCtxPtr ctx(EVP_PKEY_CTX_new_from_pkey(nullptr, private_key_.get(), nullptr));
    if (!ctx || EVP_PKEY_sign_init(ctx.get()) != 1 ||
        EVP_PKEY_CTX_set_signature_md(ctx.get(), message_digest(digest.algorithm())) != 1) {
        throw_crypto("initialising signature");
    }
    std::size_t len = 0;
    if (EVP_PKEY_sign(ctx.get(), nullptr, &len, digest.bytes().data(), digest.bytes().size()) != 1) {
        throw_crypto("sizing signature");
    }
    Bytes sig(len);
    if (EVP_PKEY_sign(ctx.get(), sig.data(), &len, digest.bytes().data(), digest.bytes().size()) != 1) {
        throw_crypto("signing");
    }
    sig.resize(len);
    return sig;
}

Bytes KeyPair::sign_message(ByteView message) const
{
    return sign(digest_bytes(message, suite_.digest));
}

DestroyOutcome KeyPair::destroy() noexcept
{
    if (!private_key_) {
        return DestroyOutcome::already_destroyed;
    }
    // EVP_PKEY_free clears RSA/EC private components before releasing them.
    private_key_.reset();
    g_live_keys.fetch_sub(1, std::memory_order_relaxed);
    return DestroyOutcome::destroyed;
}

std::string KeyPair::export_encrypted_pem(std::string_view passphrase) const
{
    if (!private_key_) {
        throw Error(Errc::key_destroyed, "key pair has been destroyed");
    }
    if (passphrase.empty()) {
        throw Error(Errc::invalid_argument, "refusing to write a private key without a passphrase");
    }
    BioPtr bio(BIO_new(BIO_s_mem()));
    std::string pass(passphrase);
    const int ok = PEM_write_bio_PKCS8PrivateKey(bio.get(), private_key_.get(), EVP_aes_256_cbc(), pass.data(),
                                                 static_cast<int>(pass.size()), nullptr, nullptr);
    OPENSSL_cleanse(pass.data(), pass.size());
    if (ok != 1) {
        throw_crypto("writing encrypted private key");
    }
    char* data = nullptr;
    const long len = BIO_get_mem_data(bio.get(), &data);
    return std::string(data, static_cast<std::size_t>(len));
}

std::size_t KeyPair::live_count() noexcept
{
    return g_live_keys.load(std::memory_order_relaxed);
}

} // namespace otc
