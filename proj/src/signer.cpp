/**
 * @file signer.cpp
 * @brief One-shot signing flow
 *
 * Copyright 2026 otc contributors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "otc/signer.hpp"

#include "otc/error.hpp"

namespace otc {

namespace {

SignedDocumentBundle enroll_and_sign(const KeyPair& key, const DocumentDigest& digest,
                                     const DistinguishedName& subject, EnrollmentClient& enrollment,
                                     const SignOptions& options)
{
    const auto csr = build_csr(key, subject, digest);
    auto result = enrollment.enroll(csr);

    // Never sign under a certificate that does not describe this request.
    if (result.chain.empty()) {
        throw Error(Errc::enrollment_rejected, "enrollment returned no certificate");
    }
    const auto& leaf = result.chain.leaf();
    if (leaf.public_key_info != key.public_key().der()) {
        throw Error(Errc::enrollment_rejected, "issued certificate carries a different public key");
    }
    const auto bound = leaf.otc_extension_count() == 1 ? leaf.otc_extension() : std::nullopt;
    if (!bound || !(bound->digest == digest)) {
        throw Error(Errc::enrollment_rejected, "issued certificate is not bound to the document digest");
    }

    return SignedDocumentBundle{digest,
                                options.locator,
                                key.sign(digest),
                                std::move(result.chain),
                                std::move(result.crl),
                                options.clock(),
                                subject};
}

} // namespace

SignOutcome one_shot_sign(std::istream& document, const DistinguishedName& subject, EnrollmentClient& enrollment,
                          const SignOptions& options)
{
    const auto digest = digest_document(document, options.suite.digest);
    // The key dies with this scope on every exception path.
    auto key = KeyPair::generate(options.suite);
    auto bundle = enroll_and_sign(key, digest, subject, enrollment, options);
    if (options.keep_key) {
        return SignOutcome{std::move(bundle), std::move(key)};
    }
    key.destroy();
    return SignOutcome{std::move(bundle), std::nullopt};
}

SignedDocumentBundle resign_with_existing_key(const KeyPair& key, std::istream& document,
                                              const DistinguishedName& subject, EnrollmentClient& enrollment,
                                              const SignOptions& options)
{
    if (!key.is_live()) {
        throw Error(Errc::key_destroyed, "cannot re-sign with a destroyed key");
    }
    const auto digest = digest_document(document, key.suite().digest);
    return enroll_and_sign(key, digest, subject, enrollment, options);
}

} // namespace otc
