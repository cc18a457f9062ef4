/**
 * @file verifier.cpp
 * @brief Bundle verification checks and report formatting
 *
 * Copyright 2026 otc contributors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "otc/verifier.hpp"

#include "otc/error.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <utility>

namespace otc {

namespace {

constexpr std::array<std::pair<FailureCode, std::string_view>, 8> kCodeNames{{
    {FailureCode::untrusted_chain, "untrusted-chain"},
    {FailureCode::expired, "expired"},
    {FailureCode::non_uniform_validity, "non-uniform-validity"},
    {FailureCode::missing_binding, "missing-binding"},
    {FailureCode::binding_mismatch, "binding-mismatch"},
    {FailureCode::bad_signature, "bad-signature"},
    {FailureCode::stale, "stale"},
    {FailureCode::bad_crl, "bad-crl"},
}};

CheckResult pass(std::string name, std::string detail)
{
    return CheckResult{std::move(name), CheckOutcome::pass, std::nullopt, std::move(detail)};
}

CheckResult fail(std::string name, FailureCode code, std::string detail)
{
    return CheckResult{std::move(name), CheckOutcome::fail, code, std::move(detail)};
}

CheckResult skip(std::string name, std::string detail)
{
    return CheckResult{std::move(name), CheckOutcome::skipped, std::nullopt, std::move(detail)};
}

std::string describe(Duration d)
{
    return format_duration(d);
}

bool same_der(const Certificate& a, const Certificate& b)
{
    return encode(a, Encoding::der) == encode(b, Encoding::der);
}

/// The chain as presented, extended by the anchor that issued its last
/// member when the bundle stops short of the root.
CertificationChain trust_path(const CertificationChain& chain, std::span<const Certificate> anchors)
{
    CertificationChain path = chain;
    if (path.empty()) {
        return path;
    }
    const auto& last = path.root();
    if (last.issuer == last.subject) {
        return path;
    }
    for (const auto& anchor : anchors) {
        if (anchor.subject == last.issuer) {
            path.certificates.push_back(anchor);
            break;
        }
    }
    return path;
}

CheckResult check_chain(const CertificationChain& path, std::span<const Certificate> anchors)
{
    const char* name = "chain";
    if (path.empty()) {
        return fail(name, FailureCode::untrusted_chain, "bundle carries no certificates");
    }
    if (const auto broken = find_broken_link(path)) {
        return fail(name, FailureCode::untrusted_chain, *broken);
    }
    const auto& root = path.root();
    const bool anchored = std::any_of(anchors.begin(), anchors.end(), [&](const Certificate& a) { return same_der(a, root); });
    if (!anchored) {
        return fail(name, FailureCode::untrusted_chain, "root '" + root.subject.to_string() + "' is not a trust anchor");
    }
    return pass(name, std::to_string(path.size()) + " certificates up to trust anchor '" + root.subject.to_string() + "'");
}

CheckResult check_validity(const CertificationChain& path, Timestamp at)
{
    const char* name = "validity";
    if (path.empty()) {
        return fail(name, FailureCode::expired, "no certificates to check");
    }
    for (const auto& c : path.certificates) {
        if (at < c.not_before) {
            return fail(name, FailureCode::expired, "'" + c.subject.to_string() + "' is not valid before " +
                                                        format_iso8601(c.not_before));
        }
        if (at > c.not_after) {
            return fail(name, FailureCode::expired, "'" + c.subject.to_string() + "' expired at " +
                                                        format_iso8601(c.not_after));
        }
    }
    return pass(name, "all certificates valid at " + format_iso8601(at));
}

CheckResult check_uniform(const CertificationChain& path)
{
    const char* name = "uniform-validity";
    if (path.empty()) {
        return fail(name, FailureCode::non_uniform_validity, "no certificates to check");
    }
    for (const auto& c : path.certificates) {
        if (c.not_after != path.leaf().not_after) {
            return fail(name, FailureCode::non_uniform_validity,
                        "'" + c.subject.to_string() + "' expires " + format_iso8601(c.not_after) + ", leaf expires " +
                            format_iso8601(path.leaf().not_after));
        }
    }
    return pass(name, "every certificate expires " + format_iso8601(path.leaf().not_after));
}

std::optional<OtcExtension> sole_binding(const Certificate& leaf)
{
    if (leaf.otc_extension_count() != 1) {
        return std::nullopt;
    }
    try {
        return leaf.otc_extension();
    } catch (const Error&) {
        return std::nullopt;
    }
}

CheckResult check_binding_extension(const CertificationChain& chain)
{
    const char* name = "binding-extension";
    if (chain.empty()) {
        return fail(name, FailureCode::missing_binding, "no leaf certificate");
    }
    const auto count = chain.leaf().otc_extension_count();
    if (count == 0) {
        return fail(name, FailureCode::missing_binding, "leaf carries no document digest extension");
    }
    if (count > 1) {
        return fail(name, FailureCode::missing_binding,
                    "leaf carries " + std::to_string(count) + " document digest extensions");
    }
    if (!sole_binding(chain.leaf())) {
        return fail(name, FailureCode::missing_binding, "document digest extension does not parse");
    }
    return pass(name, "leaf carries one document digest extension");
}

CheckResult check_document_binding(const SignedDocumentBundle& bundle, const DocumentDigest& document)
{
    const char* name = "binding";
    if (!(document == bundle.digest)) {
        return fail(name, FailureCode::binding_mismatch,
                    "document hashes to " + document.hex() + ", bundle records " + bundle.digest.hex());
    }
    if (bundle.chain.empty()) {
        return skip(name, "no leaf certificate to compare with");
    }
    const auto bound = sole_binding(bundle.chain.leaf());
    if (!bound) {
        return skip(name, "no usable document digest extension to compare with");
    }
    if (!(bound->digest == document)) {
        return fail(name, FailureCode::binding_mismatch,
                    "certificate is bound to " + std::string(to_string(bound->digest.algorithm())) + ":" +
                        bound->digest.hex() + ", document is " + std::string(to_string(document.algorithm())) + ":" +
                        document.hex());
    }
    return pass(name, std::string(to_string(document.algorithm())) + ":" + document.hex());
}

CheckResult check_document_signature(const SignedDocumentBundle& bundle, const DocumentDigest& document)
{
    const char* name = "signature";
    if (bundle.chain.empty()) {
        return fail(name, FailureCode::bad_signature, "no leaf certificate");
    }
    const auto check = verify_signature(ByteView(bundle.chain.leaf().public_key_info), document, bundle.signature);
    if (!check) {
        return fail(name, FailureCode::bad_signature,
                    "signature does not verify under the leaf key: " + std::string(to_string(check.status)));
    }
    return pass(name, "signature verifies under the leaf key");
}

CheckResult check_crl(const SignedDocumentBundle& bundle, const CertificationChain& path, Timestamp at)
{
    const char* name = "crl";
    if (!bundle.crl) {
        return fail(name, FailureCode::bad_crl, "bundle carries no CRL");
    }
    const auto& crl = *bundle.crl;
    if (!crl.revoked.empty()) {
        return fail(name, FailureCode::bad_crl, "CRL lists " + std::to_string(crl.revoked.size()) +
                                                    " revoked certificate(s); a blank CRL is expected");
    }
    if (path.size() < 2) {
        return fail(name, FailureCode::bad_crl, "issuer of the leaf is unknown");
    }
    const auto& issuer = path.certificates[1];
    if (!(crl.issuer == issuer.subject)) {
        return fail(name, FailureCode::bad_crl, "CRL issued by '" + crl.issuer.to_string() + "', leaf issued by '" +
                                                    issuer.subject.to_string() + "'");
    }
    try {
        const auto check = verify_signed_by(crl, issuer.public_key());
        if (!check) {
            return fail(name, FailureCode::bad_crl, "CRL signature does not verify: " + std::string(to_string(check.status)));
        }
    } catch (const Error& e) {
        return fail(name, FailureCode::bad_crl, std::string("issuer key unusable: ") + e.what());
    }
    if (at < crl.this_update) {
        return fail(name, FailureCode::bad_crl, "CRL not yet issued at " + format_iso8601(at));
    }
    if (!crl.next_update || at > *crl.next_update) {
        return fail(name, FailureCode::bad_crl, "CRL is past its nextUpdate");
    }
    return pass(name, "blank CRL from '" + crl.issuer.to_string() + "', next update " + format_iso8601(*crl.next_update));
}

} // namespace

std::string_view to_string(FailureCode code) noexcept
{
    for (const auto& [c, n] : kCodeNames) {
        if (c == code) {
            return n;
        }
    }
    return "unknown";
}

std::optional<FailureCode> failure_code_from_string(std::string_view name) noexcept
{
    for (const auto& [c, n] : kCodeNames) {
        if (n == name) {
            return c;
        }
    }
    return std::nullopt;
}

std::string_view to_string(CheckOutcome outcome) noexcept
{
    switch (outcome) {
    case CheckOutcome::pass:
        return "pass";
    case CheckOutcome::fail:
        return "fail";
    case CheckOutcome::skipped:
        return "skipped";
    }
    return "unknown";
}

std::string_view to_string(Verdict verdict) noexcept
{
    return verdict == Verdict::accepted ? "accepted" : "rejected";
}

Verdict VerificationReport::verdict() const noexcept
{
    const bool failed =
        std::any_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.outcome == CheckOutcome::fail; });
    return failed ? Verdict::rejected : Verdict::accepted;
}

std::vector<FailureCode> VerificationReport::failures() const
{
    std::vector<FailureCode> out;
    for (const auto& c : checks) {
        if (c.outcome == CheckOutcome::fail && c.code) {
            out.push_back(*c.code);
        }
    }
    return out;
}

bool VerificationReport::has_failure(FailureCode code) const noexcept
{
    return std::any_of(checks.begin(), checks.end(), [&](const CheckResult& c) {
        return c.outcome == CheckOutcome::fail && c.code == code;
    });
}

std::string VerificationReport::to_text() const
{
    std::string out;
    char line[64];
    for (const auto& c : checks) {
        std::snprintf(line, sizeof line, "%-18s %-8s", c.name.c_str(), std::string(to_string(c.outcome)).c_str());
        out += line;
        if (c.code) {
            out += "[";
            out += to_string(*c.code);
            out += "] ";
        }
        out += c.detail;
        out += '\n';
    }
    out += "verdict: ";
    out += to_string(verdict());
    const auto codes = failures();
    if (!codes.empty()) {
        out += " (";
        for (std::size_t i = 0; i < codes.size(); ++i) {
            out += (i ? ", " : "");
            out += to_string(codes[i]);
        }
        out += ")";
    }
    out += '\n';
    return out;
}

std::string VerificationReport::to_key_value() const
{
    std::string out;
    for (const auto& c : checks) {
        out += "check." + c.name + "=" + std::string(to_string(c.outcome)) + "\n";
        if (c.code) {
            out += "check." + c.name + ".code=" + std::string(to_string(*c.code)) + "\n";
        }
        out += "check." + c.name + ".detail=" + c.detail + "\n";
    }
    out += "failures=";
    const auto codes = failures();
    for (std::size_t i = 0; i < codes.size(); ++i) {
        out += (i ? "," : "");
        out += to_string(codes[i]);
    }
    out += "\nverdict=" + std::string(to_string(verdict())) + "\n";
    return out;
}

CheckResult check_binding(const Certificate& certificate, const DocumentDigest& digest)
{
    const auto count = certificate.otc_extension_count();
    if (count == 0) {
        return fail("binding", FailureCode::missing_binding, "certificate carries no document digest extension");
    }
    const auto bound = sole_binding(certificate);
    if (!bound) {
        return fail("binding", FailureCode::missing_binding, "certificate does not carry exactly one usable extension");
    }
    if (!(bound->digest == digest)) {
        return fail("binding", FailureCode::binding_mismatch, "certificate digest differs from the document digest");
    }
    return pass("binding", std::string(to_string(digest.algorithm())) + ":" + digest.hex());
}

CheckResult check_recency(const Certificate& leaf, const RecencyPolicy& policy, Timestamp at)
{
    const auto age = at - leaf.not_before;
    const auto limit = policy.max_age + policy.clock_skew;
    if (age > limit) {
        return fail("recency", FailureCode::stale,
                    "issued " + describe(age) + " before " + format_iso8601(at) + ", limit " + describe(limit));
    }
    return pass("recency", "issued " + describe(std::max(age, Duration(0))) + " ago, limit " + describe(limit));
}

VerificationReport verify_bundle(const SignedDocumentBundle& bundle, const DocumentDigest& document_digest,
                                 std::span<const Certificate> trust_anchors, const RecencyPolicy& policy,
                                 Timestamp at, const VerifyOptions& options)
{
    const auto path = trust_path(bundle.chain, trust_anchors);
    const bool legacy = options.legacy_mode;
    VerificationReport report;
    auto& checks = report.checks;

    checks.push_back(check_chain(path, trust_anchors));
    checks.push_back(check_validity(path, at));
    checks.push_back(legacy ? skip("uniform-validity", "legacy mode") : check_uniform(path));
    checks.push_back(legacy ? skip("binding-extension", "legacy mode") : check_binding_extension(bundle.chain));
    checks.push_back(legacy ? skip("binding", "legacy mode") : check_document_binding(bundle, document_digest));
    checks.push_back(check_document_signature(bundle, document_digest));
    if (legacy) {
        checks.push_back(skip("recency", "legacy mode"));
    } else if (bundle.chain.empty()) {
        checks.push_back(fail("recency", FailureCode::stale, "no leaf certificate"));
    } else {
        checks.push_back(check_recency(bundle.chain.leaf(), policy, at));
    }
    checks.push_back(check_crl(bundle, path, at));
    return report;
}

VerificationReport verify_bundle(const SignedDocumentBundle& bundle, std::istream& document,
                                 std::span<const Certificate> trust_anchors, const RecencyPolicy& policy,
                                 Timestamp at, const VerifyOptions& options)
{
    const auto digest = digest_document(document, bundle.digest.algorithm());
    return verify_bundle(bundle, digest, trust_anchors, policy, at, options);
}

} // namespace otc
