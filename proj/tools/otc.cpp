/**
 * @file otc.cpp
 * @brief Command-line front end: pki-init, sign, verify, bench, serve
 *
 * Copyright 2026 otc contributors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "otc/analysis.hpp"
#include "otc/bundle.hpp"
#include "otc/ca.hpp"
#include "otc/enrollment.hpp"
#include "otc/error.hpp"
#include "otc/signer.hpp"
#include "otc/verifier.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <sys/stat.h>

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

constexpr const char* kKeyPassphraseEnv = "OTC_KEY_PASSPHRASE";

/// Bad input from the operator rather than a failed operation.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string env_or_throw(const char* name)
{
    const char* value = std::getenv(name);
    if (value == nullptr || *value == '\0') {
        throw UsageError(std::string(name) + " is not set");
    }
    return value;
}

otc::AlgorithmSuite suite_arg(const std::string& label)
{
    auto suite = otc::AlgorithmSuite::parse(label);
    if (!suite) {
        throw UsageError("unknown suite: " + label);
    }
    return *suite;
}

otc::Timestamp timestamp_arg(const std::string& text, const char* flag)
{
    auto t = otc::parse_iso8601(text);
    if (!t) {
        throw UsageError(std::string(flag) + ": not an ISO-8601 UTC timestamp: " + text);
    }
    return *t;
}

otc::Duration duration_arg(const std::string& text, const char* flag)
{
    auto d = otc::parse_duration(text);
    if (!d) {
        throw UsageError(std::string(flag) + ": not a duration (e.g. 30s, 15m, 24h, 7d): " + text);
    }
    return *d;
}

otc::DistinguishedName name_arg(const std::string& text, const char* flag)
{
    try {
        return otc::DistinguishedName::parse(text);
    } catch (const otc::Error& e) {
        throw UsageError(std::string(flag) + ": " + e.what());
    }
}

void require_file(const fs::path& path, const char* flag)
{
    std::error_code ec;
    if (!fs::is_regular_file(path, ec)) {
        throw UsageError(std::string(flag) + ": no such file: " + path.string());
    }
}

std::string read_text(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw UsageError("cannot read " + path.string());
    }
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// ---------------------------------------------------------------------------
// pki-init

struct PkiInitArgs {
    std::string root_name = "CN=OTC Root";
    std::string not_after;
    std::size_t intermediates = 1;
    std::size_t issuers = 1;
    std::string suite = "ecdsa-p256";
    std::string out;
};

int run_pki_init(const PkiInitArgs& a)
{
    otc::HierarchyOptions options;
    options.root_name = name_arg(a.root_name, "--root-name");
    const auto now = otc::now_utc();
    options.not_after = a.not_after.empty() ? now + std::chrono::hours(24 * 365 * 10)
                                            : timestamp_arg(a.not_after, "--not-after");
    if (options.not_after <= now) {
        throw UsageError("--not-after is not in the future");
    }
    if (a.intermediates == 0 || a.issuers == 0) {
        throw UsageError("--intermediates and --issuers-per-intermediate must be at least 1");
    }
    options.intermediates = a.intermediates;
    options.issuers_per_intermediate = a.issuers;
    options.suite = suite_arg(a.suite);
    const auto passphrase = env_or_throw(otc::kPassphraseEnv);

    const auto members = otc::init_hierarchy(options, a.out, passphrase);
    for (const auto& m : members) {
        std::cout << otc::to_string(m.role) << "  " << m.certificate.subject.to_string() << "\n"
                  << "  dir       " << m.directory.string() << "\n"
                  << "  issuer    " << m.certificate.issuer.to_string() << "\n"
                  << "  notAfter  " << otc::format_iso8601(m.certificate.not_after) << "\n";
    }
    std::cout << members.size() << " CAs, suite " << options.suite.label() << ", notAfter "
              << otc::format_iso8601(options.not_after) << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// sign

struct SignArgs {
    std::string doc;
    std::string subject;
    std::string enroll;
    std::string out;
    std::string suite = "ecdsa-p256";
    std::string locator;
    std::string secret;
    bool keep_key = false;
};

int run_sign(const SignArgs& a)
{
    require_file(a.doc, "--doc");
    const auto subject = name_arg(a.subject, "--subject");
    otc::SignOptions options;
    options.suite = suite_arg(a.suite);
    options.keep_key = a.keep_key;
    if (!a.locator.empty()) {
        options.locator = a.locator;
    }
    std::string key_passphrase;
    if (a.keep_key) {
        key_passphrase = env_or_throw(kKeyPassphraseEnv);
    }
    const fs::path out = a.out.empty() ? fs::path(a.doc + ".otcb") : fs::path(a.out);

    std::ifstream document(a.doc, std::ios::binary);
    if (!document) {
        throw UsageError("cannot read " + a.doc);
    }
    otc::HttpEnrollmentClient client(a.enroll,
                                     a.secret.empty() ? std::nullopt : std::optional<std::string>(a.secret));
    auto outcome = otc::one_shot_sign(document, subject, client, options);
    otc::write_bundle(out, outcome.bundle);
    std::cout << "wrote " << out.string() << "\n"
              << "serial " << outcome.bundle.chain.leaf().serial_hex() << "\n";

    if (outcome.key) {
        const fs::path key_path = out.string() + ".key.pem";
        const auto pem = outcome.key->export_encrypted_pem(key_passphrase);
        outcome.key->destroy();
        {
            std::ofstream k(key_path, std::ios::binary | std::ios::trunc);
            k << pem;
            if (!k) {
                throw otc::Error(otc::Errc::io_failure, "cannot write " + key_path.string());
            }
        }
        ::chmod(key_path.c_str(), 0600);
        std::cout << "wrote " << key_path.string() << "\n";
        std::cerr << "warning: the signing key was kept in " << key_path.string()
                  << "; anyone holding it can sign further documents under this identity. "
                     "Delete it once it is no longer needed.\n";
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyArgs {
    std::string doc;
    std::string bundle;
    std::vector<std::string> trust;
    std::string max_age = "24h";
    std::string skew = "300s";
    std::string at;
    std::string format = "text";
    bool legacy = false;
};

int run_verify(const VerifyArgs& a)
{
    require_file(a.doc, "--doc");
    require_file(a.bundle, "--bundle");
    otc::RecencyPolicy policy;
    policy.max_age = duration_arg(a.max_age, "--max-age");
    policy.clock_skew = duration_arg(a.skew, "--skew");
    const auto at = a.at.empty() ? otc::now_utc() : timestamp_arg(a.at, "--at");

    std::vector<otc::Certificate> anchors;
    for (const auto& path : a.trust) {
        require_file(path, "--trust");
        try {
            auto certs = otc::decode_certificates(read_text(path));
            if (certs.empty()) {
                throw UsageError("--trust: no certificate in " + path);
            }
            anchors.insert(anchors.end(), certs.begin(), certs.end());
        } catch (const otc::Error& e) {
            throw UsageError("--trust: " + path + ": " + e.what());
        }
    }

    otc::SignedDocumentBundle bundle = [&] {
        try {
            return otc::read_bundle(a.bundle);
        } catch (const otc::Error& e) {
            throw UsageError("--bundle: " + std::string(e.what()));
        }
    }();

    std::ifstream document(a.doc, std::ios::binary);
    if (!document) {
        throw UsageError("cannot read " + a.doc);
    }
    otc::VerifyOptions options;
    options.legacy_mode = a.legacy;
    const auto report = otc::verify_bundle(bundle, document, anchors, policy, at, options);
    std::cout << (a.format == "kv" ? report.to_key_value() : report.to_text());
    return report.accepted() ? kExitOk : kExitFailed;
}

// ---------------------------------------------------------------------------
// bench

struct BenchArgs {
    bool paper = false;
    bool local = false;
    std::string suites = "ecdsa-p256,rsa-3072";
    int iters = 10;
    bool csv = false;
};

int run_bench(const BenchArgs& a)
{
    if (a.paper == a.local) {
        throw UsageError("pass exactly one of --paper or --local");
    }
    if (a.paper) {
        const auto tables = otc::reproduce_paper_tables();
        if (a.csv) {
            auto rows = tables.rsa;
            rows.insert(rows.end(), tables.ecdsa.begin(), tables.ecdsa.end());
            std::cout << otc::format_csv(rows);
        } else {
            std::cout << otc::format_table("RSA overhead", tables.rsa) << "\n"
                      << otc::format_table("ECDSA overhead", tables.ecdsa);
        }
        return kExitOk;
    }
    if (a.iters < 3) {
        throw UsageError("--iters must be at least 3");
    }
    std::vector<otc::AlgorithmSuite> suites;
    std::stringstream list(a.suites);
    for (std::string item; std::getline(list, item, ',');) {
        if (!item.empty()) {
            suites.push_back(suite_arg(item));
        }
    }
    if (suites.empty()) {
        throw UsageError("--suites is empty");
    }
    std::cout << otc::format_csv(otc::run_local_bench(suites, a.iters), 6);
    return kExitOk;
}

// ---------------------------------------------------------------------------
// serve

int run_serve(const std::string& config_path)
{
    require_file(config_path, "--config");
    otc::ServiceConfig config;
    try {
        config = otc::ServiceConfig::load(config_path);
    } catch (const otc::Error& e) {
        throw UsageError("--config: " + std::string(e.what()));
    }
    const auto passphrase = env_or_throw(otc::kPassphraseEnv);

    // Block before any thread starts so only sigwait sees these.
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    auto service = [&] {
        try {
            return otc::EnrollmentService::from_directory(config.ca_dir, config.pool_size, passphrase);
        } catch (const otc::Error& e) {
            throw UsageError("ca_dir " + config.ca_dir.string() + ": " + e.what());
        }
    }();
    service.set_shared_secret(config.shared_secret);

    otc::EnrollmentServer server(service, config.host, config.port);
    std::cout << "listening on " << server.url() << " (" << service.pool_size() << " issuer"
              << (service.pool_size() == 1 ? "" : "s") << ")" << std::endl;

    int received = 0;
    sigwait(&signals, &received);
    std::cout << "signal " << received << ", shutting down" << std::endl;
    server.stop();
    return kExitOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"One-time certificate toolkit"};
    app.require_subcommand(1);

    PkiInitArgs pki;
    auto* pki_cmd = app.add_subcommand("pki-init", "Create and persist a root/intermediate/issuer hierarchy");
    pki_cmd->add_option("--root-name", pki.root_name, "Root distinguished name");
    pki_cmd->add_option("--not-after", pki.not_after, "Chain notAfter, ISO-8601 UTC (default: now + 10 years)");
    pki_cmd->add_option("--intermediates", pki.intermediates, "Number of intermediate CAs");
    pki_cmd->add_option("--issuers-per-intermediate", pki.issuers, "Issuer CAs under each intermediate");
    pki_cmd->add_option("--suite", pki.suite, "Algorithm suite");
    pki_cmd->add_option("--out", pki.out, "Output directory")->required();

    SignArgs sign;
    auto* sign_cmd = app.add_subcommand("sign", "Sign a document under a freshly enrolled one-time certificate");
    sign_cmd->add_option("--doc", sign.doc, "Document to sign")->required();
    sign_cmd->add_option("--subject", sign.subject, "Signer distinguished name")->required();
    sign_cmd->add_option("--enroll", sign.enroll, "Enrollment service URL")->required();
    sign_cmd->add_option("--out", sign.out, "Bundle path (default: DOC.otcb)");
    sign_cmd->add_option("--suite", sign.suite, "Algorithm suite");
    sign_cmd->add_option("--locator", sign.locator, "Document locator recorded in the bundle");
    sign_cmd->add_option("--secret", sign.secret, "Enrollment shared secret");
    sign_cmd->add_flag("--keep-key", sign.keep_key, "Keep the signing key, encrypted with $OTC_KEY_PASSPHRASE");

    VerifyArgs verify;
    auto* verify_cmd = app.add_subcommand("verify", "Verify a signed document bundle");
    verify_cmd->add_option("--doc", verify.doc, "Presented document")->required();
    verify_cmd->add_option("--bundle", verify.bundle, "Bundle (.otcb)")->required();
    verify_cmd->add_option("--trust", verify.trust, "Trusted root certificate PEM file(s)")->required();
    verify_cmd->add_option("--max-age", verify.max_age, "Maximum certificate age");
    verify_cmd->add_option("--skew", verify.skew, "Allowed clock skew");
    verify_cmd->add_option("--at", verify.at, "Verification time, ISO-8601 UTC (default: now)");
    verify_cmd->add_option("--format", verify.format, "Report format")->check(CLI::IsMember({"text", "kv"}));
    verify_cmd->add_flag("--legacy", verify.legacy, "Plain path validation without binding and recency");

    BenchArgs bench;
    auto* bench_cmd = app.add_subcommand("bench", "Overhead tables and local key-generation benchmark");
    bench_cmd->add_flag("--paper", bench.paper, "Print the published overhead tables");
    bench_cmd->add_flag("--local", bench.local, "Measure suites on this machine");
    bench_cmd->add_option("--suites", bench.suites, "Comma-separated suites for --local");
    bench_cmd->add_option("--iters", bench.iters, "Iterations per suite for --local");
    bench_cmd->add_flag("--csv", bench.csv, "CSV output for --paper");

    std::string config_path;
    auto* serve_cmd = app.add_subcommand("serve", "Run the enrollment service");
    serve_cmd->add_option("--config", config_path, "Service configuration file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*pki_cmd) {
            return run_pki_init(pki);
        }
        if (*sign_cmd) {
            return run_sign(sign);
        }
        if (*verify_cmd) {
            return run_verify(verify);
        }
        if (*bench_cmd) {
            return run_bench(bench);
        }
        if (*serve_cmd) {
            return run_serve(config_path);
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const otc::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        switch (e.code()) {
        case otc::Errc::invalid_argument:
        case otc::Errc::invalid_policy:
        case otc::Errc::unsupported_suite:
        case otc::Errc::precondition_failed:
            return kExitUsage;
        default:
            return kExitFailed;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailed;
    }
    return kExitUsage;
}
