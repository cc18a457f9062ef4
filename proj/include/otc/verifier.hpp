/**
 * @file verifier.hpp
 * @brief Acceptor-side validation of signed document bundles
 *
 * Copyright 2026 otc contributors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include "otc/bundle.hpp"

#include <chrono>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace otc {

enum class FailureCode {
    untrusted_chain,
    expired,
    non_uniform_validity,
    missing_binding,
    binding_mismatch,
    bad_signature,
    stale,
    bad_crl,
};

std::string_view to_string(FailureCode code) noexcept;
std::optional<FailureCode> failure_code_from_string(std::string_view name) noexcept;

enum class CheckOutcome { pass, fail, skipped };
std::string_view to_string(CheckOutcome outcome) noexcept;

struct CheckResult {
    std::string name;
    CheckOutcome outcome = CheckOutcome::pass;
    std::optional<FailureCode> code;
    std::string detail;

    friend bool operator==(const CheckResult&, const CheckResult&) = default;
};

enum class Verdict { accepted, rejected };
std::string_view to_string(Verdict verdict) noexcept;

struct VerificationReport {
    std::vector<CheckResult> checks;

    /// Accepted iff no check failed. Skipped checks do not count.
    Verdict verdict() const noexcept;
    bool accepted() const noexcept { return verdict() == Verdict::accepted; }
    std::vector<FailureCode> failures() const;
    bool has_failure(FailureCode code) const noexcept;

    std::string to_text() const;
    /// One key=value pair per line: check.NAME, check.NAME.code,
    /// check.NAME.detail, failures, verdict.
    std::string to_key_value() const;

    friend bool operator==(const VerificationReport&, const VerificationReport&) = default;
};

struct RecencyPolicy {
    Duration max_age{std::chrono::hours(24)};
    Duration clock_skew{300};
};

struct VerifyOptions {
    /// Plain path validation: binding, recency and uniform-validity checks are
    /// reported as skipped.
    bool legacy_mode = false;
};

/// Runs, in order: chain, validity, uniform-validity, binding-extension,
/// binding, signature, recency, crl. Every check is reported.
VerificationReport verify_bundle(const SignedDocumentBundle& bundle, std::istream& document,
                                 std::span<const Certificate> trust_anchors, const RecencyPolicy& policy,
                                 Timestamp at, const VerifyOptions& options = {});

/// As above with the document already hashed (with the bundle's digest
/// algorithm).
VerificationReport verify_bundle(const SignedDocumentBundle& bundle, const DocumentDigest& document_digest,
                                 std::span<const Certificate> trust_anchors, const RecencyPolicy& policy,
                                 Timestamp at, const VerifyOptions& options = {});

/// Pass iff the certificate holds exactly one document digest extension
/// equal to `digest`, algorithm included.
CheckResult check_binding(const Certificate& certificate, const DocumentDigest& digest);

/// Pass iff at - notBefore <= max_age + clock_skew.
CheckResult check_recency(const Certificate& leaf, const RecencyPolicy& policy, Timestamp at);

} // namespace otc
