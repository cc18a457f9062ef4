/**
 * @file test_verifier.cpp
 * @brief Bundle verification: happy path, tampering, recency, legacy mode
 *
 * Copyright 2026 otc contributors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "openssl_oracle.hpp"
#include "scenarios.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace otc;
using namespace otc::testing;

namespace {

std::vector<std::string> names(const VerificationReport& r)
{
    std::vector<std::string> out;
    for (const auto& c : r.checks) {
        out.push_back(c.name);
    }
    return out;
}

std::vector<FailureCode> only(FailureCode c)
{
    return {c};
}

/// A two-member chain signed by hand so the two notAfter values can differ.
struct HandChain {
    KeyPair root_key = KeyPair::generate(kDefaultSuite);
    KeyPair leaf_key = KeyPair::generate(kDefaultSuite);
    Certificate root;
    Certificate leaf;

    HandChain(Timestamp root_expiry, Timestamp leaf_expiry, const DocumentDigest& d)
    {
        root.serial = {0x01};
        root.signature_algorithm = signature_algorithm_for(kDefaultSuite);
        root.issuer = root.subject = DistinguishedName::parse("CN=Hand Root");
        root.not_before = at("2026-01-01T00:00:00Z");
        root.not_after = root_expiry;
        root.public_key_info = root_key.public_key().der();
        root.extensions = {Extension{oids::basic_constraints, true, encode_basic_constraints(true)},
                           Extension{oids::key_usage, true, encode_key_usage(true)}};
        root.signature = root_key.sign_message(root.to_be_signed());

        leaf.serial = {0x02};
        leaf.signature_algorithm = root.signature_algorithm;
        leaf.issuer = root.subject;
        leaf.subject = DistinguishedName::parse("CN=Leaf");
        leaf.not_before = at("2026-01-01T00:00:00Z");
        leaf.not_after = leaf_expiry;
        leaf.public_key_info = leaf_key.public_key().der();
        leaf.extensions = {OtcExtension{d, false}.to_extension()};
        leaf.signature = root_key.sign_message(leaf.to_be_signed());
    }
};

} // namespace

TEST(VerifyBundle, FreshHonestBundleAccepted)
{
    auto s = make_scenario();
    s.policy.max_age = std::chrono::hours(24);
    const auto report = s.verify(s.honest());
    EXPECT_TRUE(report.accepted()) << report.to_text();
    EXPECT_TRUE(report.failures().empty());
    EXPECT_EQ(names(report), (std::vector<std::string>{"chain", "validity", "uniform-validity", "binding-extension",
                                                       "binding", "signature", "recency", "crl"}));
    for (const auto& c : report.checks) {
        EXPECT_EQ(c.outcome, CheckOutcome::pass) << c.name;
    }
}

TEST(VerifyBundle, FlippedDocumentByte)
{
    auto s = make_scenario();
    const auto report = s.verify(flip_document_byte(s, 3));
    EXPECT_FALSE(report.accepted());
    EXPECT_TRUE(report.has_failure(FailureCode::binding_mismatch));
}

TEST(VerifyBundle, EverySingleByteMutationRejected)
{
    auto s = make_scenario();
    std::mt19937 rng(99);
    for (std::size_t i = 0; i < s.document.size(); ++i) {
        const auto mask = static_cast<std::uint8_t>(std::uniform_int_distribution<int>(1, 255)(rng));
        const auto report = s.verify(flip_document_byte(s, i, mask));
        EXPECT_FALSE(report.accepted()) << "byte " << i;
        EXPECT_TRUE(report.has_failure(FailureCode::binding_mismatch)) << "byte " << i;
    }
    // Truncation and extension are mutations too.
    auto shorter = s.honest();
    shorter.document.pop_back();
    EXPECT_TRUE(s.verify(shorter).has_failure(FailureCode::binding_mismatch));
    auto longer = s.honest();
    longer.document += ' ';
    EXPECT_TRUE(s.verify(longer).has_failure(FailureCode::binding_mismatch));
}

TEST(VerifyBundle, StrippedExtension)
{
    auto s = make_scenario();
    const auto report = s.verify(strip_binding_extension(s));
    EXPECT_FALSE(report.accepted());
    EXPECT_TRUE(report.has_failure(FailureCode::missing_binding));
}

TEST(VerifyBundle, ExtensionlessCertificateFromTrustedIssuer)
{
    // An issuer that does not insist on the extension issues an ordinary certificate.
    ManualClock clock(at("2026-01-01T00:00:00Z"));
    auto root = CertificateAuthority::create_root(DistinguishedName::parse("CN=Lax Root"),
                                                  CaPolicy{at("2030-01-01T00:00:00Z"), kDefaultSuite, false},
                                                  clock.clock());
    auto issuer = root.create_subordinate(DistinguishedName::parse("CN=Lax Issuer"), CaRole::issuer);
    auto key = KeyPair::generate(kDefaultSuite);
    const auto leaf = issuer.issue_otc(build_csr(key, DistinguishedName::parse("CN=Alice"), std::vector<Extension>{}));
    const auto d = digest_of("doc");
    SignedDocumentBundle bundle{d, std::nullopt, key.sign(d), issuer.chain_for(leaf), issuer.issue_blank_crl(),
                                clock.now(), leaf.subject};
    std::istringstream in("doc");
    const std::vector<Certificate> anchors{root.certificate()};
    const auto report = verify_bundle(bundle, in, anchors, RecencyPolicy{}, clock.now());
    EXPECT_EQ(report.failures(), only(FailureCode::missing_binding)) << report.to_text();

    std::istringstream again("doc");
    EXPECT_TRUE(verify_bundle(bundle, again, anchors, RecencyPolicy{}, clock.now(), VerifyOptions{true}).accepted());
}

TEST(VerifyBundle, SwappedLeaf)
{
    auto s = make_scenario();
    const auto report = s.verify(swap_leaf(s));
    EXPECT_EQ(report.failures(), only(FailureCode::bad_signature)) << report.to_text();
}

TEST(VerifyBundle, CompromisedKeyCannotMoveToAnotherDocument)
{
    auto s = make_scenario();
    const auto report = s.verify(reuse_key_for_other_document(s));
    EXPECT_EQ(report.failures(), only(FailureCode::binding_mismatch)) << report.to_text();

    // Forging for the other document takes a fresh issuance by the CA.
    IssuerClient client(s.pki.issuer);
    std::istringstream other("I owe Bob 1,000,000 EUR.\n");
    SignOptions options;
    options.clock = s.pki.clock.clock();
    const auto fresh = resign_with_existing_key(*s.key, other, DistinguishedName::parse("CN=Alice,O=Example"), client, options);
    EXPECT_EQ(client.calls, 1);
    EXPECT_TRUE(s.verify({fresh, "I owe Bob 1,000,000 EUR.\n", s.pki.clock.now()}).accepted());
}

TEST(VerifyBundle, ThirtyDayOldBundleIsStale)
{
    auto s = make_scenario();
    const auto report = s.verify(present_late(s, std::chrono::hours(30 * 24)));
    EXPECT_EQ(report.failures(), only(FailureCode::stale)) << report.to_text();
}

TEST(VerifyBundle, NonEmptyCrl)
{
    auto s = make_scenario();
    const auto report = s.verify(non_empty_crl(s));
    EXPECT_TRUE(report.has_failure(FailureCode::bad_crl));
    EXPECT_EQ(report.failures(), only(FailureCode::bad_crl));
}

TEST(VerifyBundle, MissingCrl)
{
    auto s = make_scenario();
    auto p = s.honest();
    p.bundle.crl.reset();
    EXPECT_EQ(s.verify(p).failures(), only(FailureCode::bad_crl));
}

TEST(VerifyBundle, CrlFromAnotherIssuer)
{
    auto s = make_scenario();
    auto p = s.honest();
    p.bundle.crl = s.pki.intermediate.issue_blank_crl();
    EXPECT_EQ(s.verify(p).failures(), only(FailureCode::bad_crl));
}

TEST(VerifyBundle, BrokenChainSignatureAnywhere)
{
    auto s = make_scenario();
    for (std::size_t member = 0; member < s.bundle.chain.size(); ++member) {
        const auto report = s.verify(break_chain_signature(s, member));
        EXPECT_TRUE(report.has_failure(FailureCode::untrusted_chain)) << "member " << member;
    }
}

TEST(VerifyBundle, UnknownTrustAnchor)
{
    auto s = make_scenario();
    auto other = make_pki();
    std::istringstream in(s.document);
    const std::vector<Certificate> anchors{other.root.certificate()};
    const auto report = verify_bundle(s.bundle, in, anchors, s.policy, s.pki.clock.now());
    EXPECT_EQ(report.failures(), only(FailureCode::untrusted_chain));
}

TEST(VerifyBundle, ChainWithoutRootUsesAnchor)
{
    auto s = make_scenario();
    auto p = s.honest();
    p.bundle.chain.certificates.pop_back();
    EXPECT_TRUE(s.verify(p).accepted()) << s.verify(p).to_text();
}

TEST(VerifyBundle, ExpiredAndNotYetValid)
{
    auto s = make_scenario();
    s.policy.max_age = std::chrono::hours(24 * 365 * 30);
    auto late = s.honest();
    late.at = at("2051-01-01T00:00:01Z");
    EXPECT_TRUE(s.verify(late).has_failure(FailureCode::expired));
    auto early = s.honest();
    early.at = at("2025-12-31T00:00:00Z");
    EXPECT_TRUE(s.verify(early).has_failure(FailureCode::expired));
    auto edge = s.honest();
    edge.at = at("2051-01-01T00:00:00Z");
    EXPECT_FALSE(s.verify(edge).has_failure(FailureCode::expired));
}

TEST(VerifyBundle, NonUniformValidity)
{
    const auto d = digest_of("doc");
    HandChain chain(at("2040-01-01T00:00:00Z"), at("2030-01-01T00:00:00Z"), d);
    SignedDocumentBundle bundle{d, std::nullopt, chain.leaf_key.sign(d), CertificationChain{{chain.leaf, chain.root}},
                                std::nullopt, at("2026-01-01T00:00:00Z"), chain.leaf.subject};
    const std::vector<Certificate> anchors{chain.root};
    const auto report = verify_bundle(bundle, d, anchors, RecencyPolicy{}, at("2026-01-01T00:10:00Z"));
    EXPECT_TRUE(report.has_failure(FailureCode::non_uniform_validity)) << report.to_text();
    EXPECT_FALSE(report.has_failure(FailureCode::untrusted_chain));

    HandChain uniform(at("2040-01-01T00:00:00Z"), at("2040-01-01T00:00:00Z"), d);
    SignedDocumentBundle ok{d, std::nullopt, uniform.leaf_key.sign(d), CertificationChain{{uniform.leaf, uniform.root}},
                            std::nullopt, at("2026-01-01T00:00:00Z"), uniform.leaf.subject};
    const std::vector<Certificate> anchors2{uniform.root};
    EXPECT_FALSE(verify_bundle(ok, d, anchors2, RecencyPolicy{}, at("2026-01-01T00:10:00Z"))
                     .has_failure(FailureCode::non_uniform_validity));
}

TEST(VerifyBundle, ReportsEveryCheckAfterFirstFailure)
{
    auto s = make_scenario();
    auto p = break_chain_signature(s, 1);
    p.document += "tampered";
    p.at = s.bundle.chain.leaf().not_before + std::chrono::hours(24 * 60);
    const auto report = s.verify(p);
    EXPECT_EQ(report.checks.size(), 8u);
    EXPECT_TRUE(report.has_failure(FailureCode::untrusted_chain));
    EXPECT_TRUE(report.has_failure(FailureCode::binding_mismatch));
    EXPECT_TRUE(report.has_failure(FailureCode::bad_signature));
    EXPECT_TRUE(report.has_failure(FailureCode::stale));
}

TEST(VerifyBundle, Deterministic)
{
    auto s = make_scenario();
    for (const auto& p : {s.honest(), flip_document_byte(s, 0), present_late(s, std::chrono::hours(24 * 9))}) {
        const auto a = s.verify(p);
        const auto b = s.verify(p);
        EXPECT_EQ(a, b);
        EXPECT_EQ(a.to_text(), b.to_text());
        EXPECT_EQ(a.to_key_value(), b.to_key_value());
    }
}

TEST(VerifyBundle, LegacyModeSkipsOtcChecks)
{
    auto s = make_scenario();
    auto p = reuse_key_for_other_document(s);
    p.at = s.bundle.chain.leaf().not_before + std::chrono::hours(24 * 60);
    const auto report = s.verify(p, VerifyOptions{true});
    EXPECT_TRUE(report.accepted()) << report.to_text();
    for (const auto* name : {"uniform-validity", "binding-extension", "binding", "recency"}) {
        const auto it = std::find_if(report.checks.begin(), report.checks.end(),
                                     [&](const CheckResult& c) { return c.name == name; });
        ASSERT_NE(it, report.checks.end());
        EXPECT_EQ(it->outcome, CheckOutcome::skipped) << name;
    }
    // The signature still has to match the presented document.
    EXPECT_TRUE(s.verify(flip_document_byte(s, 1), VerifyOptions{true}).has_failure(FailureCode::bad_signature));
}

TEST(VerifyBundle, LegacyModeAgreesWithOpenssl)
{
    auto s = make_scenario();
    const auto mine = s.verify(s.honest(), VerifyOptions{true});
    EXPECT_TRUE(mine.accepted());
    const auto theirs = openssl_validate(s.bundle.chain, s.pki.root.certificate(), s.bundle.crl, s.pki.clock.now());
    EXPECT_TRUE(theirs.ok) << theirs.message;
    EXPECT_EQ(theirs.crl_entries, 0);

    const auto broken = break_chain_signature(s, 1);
    EXPECT_FALSE(openssl_validate(broken.bundle.chain, s.pki.root.certificate(), s.bundle.crl, s.pki.clock.now()).ok);
    EXPECT_TRUE(s.verify(broken, VerifyOptions{true}).has_failure(FailureCode::untrusted_chain));
}

TEST(VerifyBundle, RsaSuite)
{
    auto s = make_scenario(*AlgorithmSuite::parse("rsa-2048-sha256"));
    EXPECT_TRUE(s.verify(s.honest()).accepted());
    EXPECT_TRUE(s.verify(flip_document_byte(s, 5)).has_failure(FailureCode::binding_mismatch));
    const auto theirs = openssl_validate(s.bundle.chain, s.pki.root.certificate(), s.bundle.crl, s.pki.clock.now());
    EXPECT_TRUE(theirs.ok) << theirs.message;
}

TEST(VerifyBundle, ReportFormats)
{
    auto s = make_scenario();
    const auto report = s.verify(flip_document_byte(s, 0));
    const auto text = report.to_text();
    EXPECT_NE(text.find("binding            fail    [binding-mismatch]"), std::string::npos) << text;
    EXPECT_NE(text.find("verdict: rejected (binding-mismatch, bad-signature)"), std::string::npos) << text;
    const auto kv = report.to_key_value();
    EXPECT_NE(kv.find("check.chain=pass\n"), std::string::npos);
    EXPECT_NE(kv.find("check.binding.code=binding-mismatch\n"), std::string::npos);
    EXPECT_NE(kv.find("failures=binding-mismatch,bad-signature\n"), std::string::npos);
    EXPECT_NE(kv.find("verdict=rejected\n"), std::string::npos);
    EXPECT_NE(s.verify(s.honest()).to_key_value().find("failures=\nverdict=accepted\n"), std::string::npos);
}

TEST(CheckBinding, Cases)
{
    auto s = make_scenario();
    const auto& leaf = s.bundle.chain.leaf();
    EXPECT_EQ(check_binding(leaf, s.bundle.digest).outcome, CheckOutcome::pass);

    const auto stripped = strip_binding_extension(s).bundle.chain.leaf();
    EXPECT_EQ(check_binding(stripped, s.bundle.digest).code, FailureCode::missing_binding);

    // Same 32 bytes labelled with a different algorithm: the label is part of the identity.
    Bytes widened = s.bundle.digest.bytes();
    widened.resize(48, 0);
    auto relabelled = leaf;
    for (auto& e : relabelled.extensions) {
        if (e.oid == oids::otc_document_digest) {
            e = OtcExtension{DocumentDigest(DigestAlgorithm::sha384, widened), false}.to_extension();
        }
    }
    EXPECT_EQ(check_binding(relabelled, DocumentDigest(DigestAlgorithm::sha384, Bytes(widened))).outcome,
              CheckOutcome::pass);
    EXPECT_EQ(check_binding(relabelled, s.bundle.digest).code, FailureCode::binding_mismatch);
}

TEST(CheckRecency, Boundaries)
{
    Certificate leaf;
    leaf.not_before = at("2026-05-01T12:00:00Z");
    const RecencyPolicy hour{std::chrono::hours(1), std::chrono::minutes(5)};
    EXPECT_EQ(check_recency(leaf, hour, leaf.not_before).outcome, CheckOutcome::pass);
    EXPECT_EQ(check_recency(leaf, hour, leaf.not_before + std::chrono::minutes(65)).outcome, CheckOutcome::pass);
    EXPECT_EQ(check_recency(leaf, hour, leaf.not_before + std::chrono::minutes(65) + Duration(1)).code,
              FailureCode::stale);
    EXPECT_EQ(check_recency(leaf, hour, leaf.not_before + std::chrono::hours(2)).code, FailureCode::stale);
    const RecencyPolicy zero{Duration(0), Duration(0)};
    EXPECT_EQ(check_recency(leaf, zero, leaf.not_before).outcome, CheckOutcome::pass);
    EXPECT_EQ(check_recency(leaf, zero, leaf.not_before + Duration(1)).code, FailureCode::stale);
}

TEST(FailureCodes, NamesRoundTrip)
{
    for (const auto* n : {"untrusted-chain", "expired", "non-uniform-validity", "missing-binding", "binding-mismatch",
                          "bad-signature", "stale", "bad-crl"}) {
        const auto c = failure_code_from_string(n);
        ASSERT_TRUE(c.has_value()) << n;
        EXPECT_EQ(to_string(*c), n);
    }
    EXPECT_FALSE(failure_code_from_string("fine").has_value());
}
