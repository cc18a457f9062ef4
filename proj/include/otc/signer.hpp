/**
 * @file signer.hpp
 * @brief End-user signing flow: fresh key, OTC enrollment, one signature
 *
 * Copyright 2026 otc contributors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include "otc/bundle.hpp"
#include "otc/enrollment.hpp"

#include <istream>
#include <optional>

namespace otc {

struct SignOptions {
    /// Hand the live key back to the caller instead of destroying it.
    bool keep_key = false;
    AlgorithmSuite suite = kDefaultSuite;
    std::optional<std::string> locator;
    Clock clock = system_clock();
};

struct SignOutcome {
    SignedDocumentBundle bundle;
    /// Set only when SignOptions::keep_key was true.
    std::optional<KeyPair> key;
};

/// Hashes `document`, generates a key pair, enrolls a CSR carrying the
/// digest, signs the digest and destroys the key unless keep_key is set.
/// Any failure after key generation destroys the key.
///
/// Throws EnrollmentRejected, Errc::enrollment_unreachable, Errc::io_failure.
SignOutcome one_shot_sign(std::istream& document, const DistinguishedName& subject, EnrollmentClient& enrollment,
                          const SignOptions& options = {});

/// Enrolls a new OTC for `document` under an existing live key and signs.
/// The key stays live.
///
/// Throws Errc::key_destroyed plus the errors of one_shot_sign.
SignedDocumentBundle resign_with_existing_key(const KeyPair& key, std::istream& document,
                                              const DistinguishedName& subject, EnrollmentClient& enrollment,
                                              const SignOptions& options = {});

} // namespace otc
