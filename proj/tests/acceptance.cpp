/**
 * @file acceptance.cpp
 * @brief Acceptance suite: one PASS/FAIL line per criterion
 *
 * Copyright 2026 otc contributors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "openssl_oracle.hpp"
#include "scenarios.hpp"
#include "support.hpp"

#include "otc/analysis.hpp"
#include "otc/ca.hpp"
#include "otc/enrollment.hpp"
#include "otc/signer.hpp"
#include "otc/verifier.hpp"

#include <array>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include <fcntl.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#ifndef OTC_CLI_PATH
#error "OTC_CLI_PATH must name the otc executable"
#endif

extern char** environ;

using namespace otc;
using namespace otc::testing;
namespace fs = std::filesystem;
using SteadyClock = std::chrono::steady_clock;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

/// Thrown by expect() to end a criterion with a reason.
struct Unmet : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void expect(bool condition, const std::string& what)
{
    if (!condition) {
        throw Unmet(what);
    }
}

double seconds_since(SteadyClock::time_point start)
{
    return std::chrono::duration<double>(SteadyClock::now() - start).count();
}

std::string fmt(const char* format, double value)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, format, value);
    return buf;
}

std::string read_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// ---------------------------------------------------------------------------
// Child processes

struct Child {
    pid_t pid = -1;
    int out = -1;
};

Child spawn(const std::vector<std::string>& args)
{
    int fds[2];
    if (pipe(fds) != 0) {
        throw Unmet("pipe failed");
    }
    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    posix_spawn_file_actions_adddup2(&actions, fds[1], STDOUT_FILENO);
    posix_spawn_file_actions_adddup2(&actions, fds[1], STDERR_FILENO);
    posix_spawn_file_actions_addclose(&actions, fds[0]);
    posix_spawn_file_actions_addclose(&actions, fds[1]);
    std::vector<char*> argv;
    for (const auto& a : args) {
        argv.push_back(const_cast<char*>(a.c_str()));
    }
    argv.push_back(nullptr);
    Child c;
    const int rc = posix_spawn(&c.pid, argv[0], &actions, nullptr, argv.data(), environ);
    posix_spawn_file_actions_destroy(&actions);
    close(fds[1]);
    if (rc != 0) {
        close(fds[0]);
        throw Unmet("cannot start " + args[0]);
    }
    c.out = fds[0];
    return c;
}

std::string read_line(int fd)
{
    std::string line;
    char ch = 0;
    while (read(fd, &ch, 1) == 1 && ch != '\n') {
        line += ch;
    }
    return line;
}

std::string drain(int fd)
{
    std::string text;
    std::array<char, 4096> buf{};
    ssize_t n = 0;
    while ((n = read(fd, buf.data(), buf.size())) > 0) {
        text.append(buf.data(), static_cast<std::size_t>(n));
    }
    return text;
}

int wait_exit(pid_t pid)
{
    int status = 0;
    waitpid(pid, &status, 0);
    return WIFEXITED(status) ? WEXITSTATUS(status) : 128 + WTERMSIG(status);
}

struct Run {
    int exit_code;
    std::string output;
};

Run run(const std::vector<std::string>& args)
{
    auto c = spawn(args);
    auto text = drain(c.out);
    close(c.out);
    return {wait_exit(c.pid), std::move(text)};
}

// ---------------------------------------------------------------------------
// 1. Published overhead tables

Outcome criterion_published_tables()
{
    const auto start = SteadyClock::now();
    struct Row {
        const char* suite;
        const char* total;
        long overhead;
    };
    const std::array<Row, 10> expected{{{"rsa-1024", "0.17", 1600},
                                        {"rsa-2240", "7.62", 4980},
                                        {"rsa-3072", "10.01", 4667},
                                        {"rsa-7680", "135.43", 8752},
                                        {"rsa-15360", "688.26", 7381},
                                        {"ecdsa-163", "0.23", 53},
                                        {"ecdsa-233", "0.52", 53},
                                        {"ecdsa-283", "0.86", 46},
                                        {"ecdsa-409", "1.82", 54},
                                        {"ecdsa-571", "4.51", 47}}};
    const auto tables = reproduce_paper_tables();
    std::vector<BenchRecord> rows = tables.rsa;
    rows.insert(rows.end(), tables.ecdsa.begin(), tables.ecdsa.end());
    expect(tables.rsa.size() == 5 && tables.ecdsa.size() == 5, "expected 5 RSA and 5 ECDSA rows");
    const auto csv = run({OTC_CLI_PATH, "bench", "--paper", "--csv"});
    const auto text = run({OTC_CLI_PATH, "bench", "--paper"});
    expect(csv.exit_code == 0 && text.exit_code == 0, "bench --paper exited non-zero");
    int matched = 0;
    for (std::size_t i = 0; i < expected.size(); ++i) {
        const auto& e = expected[i];
        expect(rows[i].suite == e.suite, "row order: " + rows[i].suite);
        expect(fmt("%.2f", rows[i].total_s) == e.total, std::string(e.suite) + " total " + fmt("%.2f", rows[i].total_s));
        expect(rows[i].overhead_pct == e.overhead,
               std::string(e.suite) + " overhead " + std::to_string(rows[i].overhead_pct));
        // The CLI prints the same numbers.
        char line[128];
        std::snprintf(line, sizeof line, "\n%s,%.2f,%.2f,%s,%ld\n", e.suite, rows[i].keygen_s, rows[i].sign_s, e.total,
                      e.overhead);
        expect(csv.output.find(line) != std::string::npos, std::string("CLI csv row for ") + e.suite);
        expect(text.output.find(std::to_string(e.overhead) + "%") != std::string::npos,
               std::string("CLI table row for ") + e.suite);
        ++matched;
    }
    const double elapsed = seconds_since(start);
    expect(elapsed < 1.0, "took " + fmt("%.3f s", elapsed));
    return {true, std::to_string(matched) + "/10 rows exact, " + fmt("%.3f s", elapsed)};
}

// ---------------------------------------------------------------------------
// 2. Cost model

Outcome criterion_cost_model()
{
    const auto c = deployment_cost(CostModel{0, 1, 100'000'000, 0});
    expect(c.traditional_total == 100'000'000.0, "traditional " + fmt("%.0f", c.traditional_total));
    expect(c.otc_total == 0.0, "otc " + fmt("%.0f", c.otc_total));
    return {true, "traditional " + fmt("%.0f", c.traditional_total) + ", otc " + fmt("%.0f", c.otc_total)};
}

// ---------------------------------------------------------------------------
// 3. pki-init, serve, sign, verify through the CLI

Outcome criterion_end_to_end()
{
    TempDir dir;
    setenv(kPassphraseEnv, "acceptance-passphrase", 1);
    const auto start = SteadyClock::now();
    const auto pki = dir.path() / "pki";
    const auto init = run({OTC_CLI_PATH, "pki-init", "--out", pki.string(), "--suite", "ecdsa-p256"});
    expect(init.exit_code == 0, "pki-init: " + init.output);

    const auto config = dir.path() / "service.conf";
    std::ofstream(config) << "listen=127.0.0.1:0\nca_dir=" << (pki / "root" / "intermediate-01").string() << "\n";
    auto server = spawn({OTC_CLI_PATH, "serve", "--config", config.string()});
    const auto banner = read_line(server.out);
    const auto url_at = banner.find("http://");
    if (url_at == std::string::npos) {
        kill(server.pid, SIGKILL);
        wait_exit(server.pid);
        close(server.out);
        throw Unmet("serve: " + banner);
    }
    const auto url = banner.substr(url_at, banner.find(' ', url_at) - url_at);

    const auto doc = dir.path() / "contract.txt";
    std::ofstream(doc) << "Alice agrees to pay Bob 100 EUR.\n";
    const auto bundle = dir.path() / "contract.otcb";
    const auto sign = run({OTC_CLI_PATH, "sign", "--doc", doc.string(), "--subject", "CN=Alice,O=Example",
                           "--enroll", url, "--out", bundle.string()});
    kill(server.pid, SIGINT);
    const auto served = drain(server.out);
    close(server.out);
    const int serve_exit = wait_exit(server.pid);
    expect(sign.exit_code == 0, "sign: " + sign.output);

    const auto verify = run({OTC_CLI_PATH, "verify", "--doc", doc.string(), "--bundle", bundle.string(), "--trust",
                             (pki / "root" / "cert.pem").string()});
    const double elapsed = seconds_since(start);
    expect(verify.exit_code == 0, "verify: " + verify.output);
    expect(verify.output.find("verdict: accepted") != std::string::npos, "verify report: " + verify.output);
    expect(serve_exit == 0, "serve exit " + std::to_string(serve_exit) + ": " + served);
    expect(elapsed < 5.0, "took " + fmt("%.2f s", elapsed));

    // Library and CLI agree on the same inputs.
    const auto parsed = read_bundle(bundle);
    std::ifstream in(doc, std::ios::binary);
    const std::vector<Certificate> anchors{decode_certificates(read_file(pki / "root" / "cert.pem")).at(0)};
    expect(verify_bundle(parsed, in, anchors, RecencyPolicy{}, now_utc()).accepted(), "library verdict differs");
    expect(parsed.chain.leaf().public_key().algorithm() == SignatureAlgorithm::ecdsa_p256, "leaf is not P-256");
    return {true, "accepted in " + fmt("%.2f s", elapsed) + " wall"};
}

// ---------------------------------------------------------------------------
// 4. Mutations

Outcome criterion_mutations()
{
    struct Mutation {
        const char* name;
        FailureCode expected;
        std::function<Presented(Scenario&, std::mt19937&)> apply;
    };
    const std::vector<Mutation> mutations{
        {"flip-document-byte", FailureCode::binding_mismatch,
         [](Scenario& s, std::mt19937& rng) {
             return flip_document_byte(s, rng(), static_cast<std::uint8_t>(1u << (rng() % 8)));
         }},
        {"strip-otc-extension", FailureCode::missing_binding,
         [](Scenario& s, std::mt19937&) { return strip_binding_extension(s); }},
        {"swap-leaf", FailureCode::bad_signature, [](Scenario& s, std::mt19937&) { return swap_leaf(s); }},
        {"reuse-compromised-key", FailureCode::binding_mismatch,
         [](Scenario& s, std::mt19937& rng) {
             return reuse_key_for_other_document(s, "I owe Mallory " + std::to_string(rng()) + " EUR.\n");
         }},
        {"older-than-max-age", FailureCode::stale,
         [](Scenario& s, std::mt19937& rng) {
             const auto age = s.policy.max_age + s.policy.clock_skew + Duration(1 + rng() % (30 * 86400));
             return present_late(s, age);
         }},
        {"non-empty-crl", FailureCode::bad_crl, [](Scenario& s, std::mt19937&) { return non_empty_crl(s); }},
        {"break-chain-signature", FailureCode::untrusted_chain,
         [](Scenario& s, std::mt19937& rng) { return break_chain_signature(s, rng() % s.bundle.chain.size()); }},
    };
    constexpr int kTrials = 20;
    std::mt19937 rng(20260101);
    int rejected = 0;
    for (const auto& m : mutations) {
        for (int trial = 0; trial < kTrials; ++trial) {
            std::string doc(1 + rng() % 512, '\0');
            for (auto& ch : doc) {
                ch = static_cast<char>(rng());
            }
            auto s = make_scenario(kDefaultSuite, doc);
            expect(s.verify(s.honest()).accepted(), std::string(m.name) + ": honest baseline rejected");
            const auto report = s.verify(m.apply(s, rng));
            expect(!report.accepted(), std::string(m.name) + ": accepted");
            expect(report.has_failure(m.expected), std::string(m.name) + ": expected " +
                                                       std::string(to_string(m.expected)) + ", got\n" +
                                                       report.to_text());
        }
        ++rejected;
    }
    return {true, std::to_string(rejected) + "/7 mutations rejected with their code, " + std::to_string(kTrials) +
                      " random trials each"};
}

// ---------------------------------------------------------------------------
// 5. Uniform validity over random hierarchies

Outcome criterion_uniform_validity()
{
    std::mt19937 rng(5);
    int chains = 0;
    for (int h = 0; h < 100; ++h) {
        ManualClock clock(at("2026-01-01T00:00:00Z") + Duration(rng() % (86400 * 365)));
        const auto not_after = clock.now() + Duration(86400 * (30 + rng() % 3650));
        auto root = CertificateAuthority::create_root(DistinguishedName::parse("CN=Root " + std::to_string(h)),
                                                      CaPolicy{not_after, kDefaultSuite, true}, clock.clock());
        const int intermediates = 1 + static_cast<int>(rng() % 3);
        int leaves = 0;
        for (int i = 0; i < intermediates; ++i) {
            clock.advance(Duration(1 + rng() % 86400));
            auto inter = root.create_subordinate(
                DistinguishedName::parse("CN=Root " + std::to_string(h) + " Intermediate " + std::to_string(i)),
                CaRole::intermediate);
            clock.advance(Duration(1 + rng() % 86400));
            auto pool = inter.spawn_issuer_pool(1 + rng() % 5);
            for (auto& issuer : pool) {
                clock.advance(Duration(1 + rng() % 3600));
                auto key = KeyPair::generate(kDefaultSuite);
                const auto leaf = issuer.issue_otc(
                    build_csr(key, DistinguishedName::parse("CN=Signer"), digest_of(std::to_string(rng()))));
                const auto chain = issuer.chain_for(leaf);
                std::set<Timestamp> distinct;
                for (const auto& c : chain.certificates) {
                    distinct.insert(c.not_after);
                }
                expect(chain.size() == 4, "chain length " + std::to_string(chain.size()));
                expect(distinct.size() == 1, "hierarchy " + std::to_string(h) + ": " +
                                                 std::to_string(distinct.size()) + " distinct notAfter values");
                expect(has_uniform_validity(chain), "has_uniform_validity disagrees");
                ++leaves;
            }
        }
        expect(leaves > 0, "empty hierarchy");
        ++chains;
    }
    return {true, std::to_string(chains) + "/100 hierarchies with a single notAfter per chain"};
}

// ---------------------------------------------------------------------------
// 6. Concurrent enrollments

Outcome criterion_concurrent_serials()
{
    constexpr int kClients = 8;
    constexpr int kPerClient = 125;
    ManualClock clock(at("2026-03-01T00:00:00Z"));
    auto root = CertificateAuthority::create_root(DistinguishedName::parse("CN=Load Root"),
                                                  CaPolicy{at("2031-01-01T00:00:00Z"), kDefaultSuite, true},
                                                  clock.clock());
    auto inter = root.create_subordinate(DistinguishedName::parse("CN=Load Intermediate"), CaRole::intermediate);
    EnrollmentService service(inter.spawn_issuer_pool(2));
    EnrollmentServer server(service);

    std::mutex mu;
    std::vector<SignedDocumentBundle> bundles;
    std::vector<std::string> documents;
    std::vector<std::string> errors;
    const auto start = SteadyClock::now();
    std::vector<std::thread> threads;
    for (int c = 0; c < kClients; ++c) {
        threads.emplace_back([&, c] {
            HttpEnrollmentClient client(server.url());
            SignOptions options;
            options.clock = clock.clock();
            for (int i = 0; i < kPerClient; ++i) {
                const auto doc = "client " + std::to_string(c) + " document " + std::to_string(i);
                std::istringstream in(doc);
                try {
                    auto outcome = one_shot_sign(in, DistinguishedName::parse("CN=Client " + std::to_string(c)),
                                                 client, options);
                    std::lock_guard lock(mu);
                    bundles.push_back(std::move(outcome.bundle));
                    documents.push_back(doc);
                } catch (const std::exception& e) {
                    std::lock_guard lock(mu);
                    errors.emplace_back(e.what());
                }
            }
        });
    }
    for (auto& t : threads) {
        t.join();
    }
    server.stop();
    const double elapsed = seconds_since(start);
    expect(errors.empty(), std::to_string(errors.size()) + " enrollments failed, first: " +
                               (errors.empty() ? "" : errors.front()));
    expect(bundles.size() == kClients * kPerClient, std::to_string(bundles.size()) + " bundles");

    std::set<std::pair<std::string, Bytes>> serials;
    const std::vector<Certificate> anchors{root.certificate()};
    int verified = 0;
    for (std::size_t i = 0; i < bundles.size(); ++i) {
        serials.emplace(bundles[i].chain.leaf().issuer.to_string(), bundles[i].chain.leaf().serial);
        std::istringstream in(documents[i]);
        const auto report = verify_bundle(bundles[i], in, anchors, RecencyPolicy{}, clock.now());
        expect(report.accepted(), "bundle " + std::to_string(i) + "\n" + report.to_text());
        ++verified;
    }
    std::set<Bytes> bare;
    for (const auto& s : serials) {
        bare.insert(s.second);
    }
    expect(bare.size() == bundles.size(), std::to_string(bare.size()) + " distinct serials");
    return {true, std::to_string(bare.size()) + " distinct serials, " + std::to_string(verified) +
                      " bundles verified, " + std::to_string(kClients) + " clients over HTTP, " +
                      fmt("%.2f s", elapsed)};
}

// ---------------------------------------------------------------------------
// 7. Key lifecycle

/// Returns a scripted answer instead of asking a CA.
class ScriptedClient : public EnrollmentClient {
public:
    explicit ScriptedClient(std::function<EnrollmentResult(const SigningRequest&)> answer) : answer_(std::move(answer))
    {
    }
    EnrollmentResult enroll(const SigningRequest& csr) override { return answer_(csr); }

private:
    std::function<EnrollmentResult(const SigningRequest&)> answer_;
};

Outcome criterion_key_lifecycle()
{
    auto pki = make_pki();
    const auto subject = DistinguishedName::parse("CN=Alice");
    const std::size_t baseline = KeyPair::live_count();

    SignOptions options;
    options.clock = pki.clock.clock();
    IssuerClient honest(pki.issuer);
    {
        std::istringstream in("first document");
        const auto outcome = one_shot_sign(in, subject, honest, options);
        expect(!outcome.key.has_value(), "default one_shot_sign returned its key");
        expect(KeyPair::live_count() == baseline, "a key is still live after one_shot_sign");
    }

    // A key that was handed out and then destroyed cannot sign again.
    int refused = 0;
    {
        std::istringstream in("kept");
        SignOptions keep = options;
        keep.keep_key = true;
        auto outcome = one_shot_sign(in, subject, honest, keep);
        expect(outcome.key && outcome.key->is_live(), "keep_key did not return a live key");
        outcome.key->destroy();
        const auto d = digest_of("second document");
        const std::vector<std::function<void()>> attempts{
            [&] { outcome.key->sign(d); },
            [&] { outcome.key->sign_message(ByteView(d.bytes())); },
            [&] { outcome.key->export_encrypted_pem("pw"); },
            [&] {
                std::istringstream again("second document");
                resign_with_existing_key(*outcome.key, again, subject, honest, options);
            },
            [&] { build_csr(*outcome.key, subject, d); },
        };
        for (const auto& attempt : attempts) {
            try {
                attempt();
            } catch (const Error& e) {
                if (e.code() == Errc::key_destroyed) {
                    ++refused;
                }
            }
        }
        expect(refused == static_cast<int>(attempts.size()),
               std::to_string(refused) + "/" + std::to_string(attempts.size()) + " second-signature attempts refused");
    }
    expect(KeyPair::live_count() == baseline, "kept key still counted live after destroy");

    // Every failure after key generation must leave no live key behind.
    auto other = make_pki(at("2026-02-01T00:00:00Z"));
    auto retired = make_pki(at("2026-02-01T00:00:00Z"));
    retired.issuer.retire();
    std::vector<std::pair<std::string, std::unique_ptr<EnrollmentClient>>> failing;
    failing.emplace_back("rejected", std::make_unique<ScriptedClient>([](const SigningRequest&) -> EnrollmentResult {
                             throw EnrollmentRejected(Errc::pop_failure, 422, "scripted rejection");
                         }));
    failing.emplace_back("unreachable", std::make_unique<HttpEnrollmentClient>("http://127.0.0.1:1"));
    failing.emplace_back("retired-issuer", std::make_unique<IssuerClient>(retired.issuer));
    failing.emplace_back("foreign-key", std::make_unique<ScriptedClient>([&](const SigningRequest& csr) {
                             auto k = KeyPair::generate(kDefaultSuite);
                             (void)csr;
                             const auto leaf = other.issuer.issue_otc(build_csr(k, subject, digest_of("doomed document")));
                             return EnrollmentResult{other.issuer.chain_for(leaf), other.issuer.issue_blank_crl()};
                         }));
    failing.emplace_back("no-extension", std::make_unique<ScriptedClient>([&](const SigningRequest& csr) {
                             auto cert = other.issuer.chain_for(other.issuer.issue_otc(csr));
                             auto& leaf = cert.certificates.front();
                             std::erase_if(leaf.extensions,
                                           [](const Extension& e) { return e.oid == oids::otc_document_digest; });
                             return EnrollmentResult{cert, std::nullopt};
                         }));
    failing.emplace_back("empty-chain", std::make_unique<ScriptedClient>([](const SigningRequest&) {
                             return EnrollmentResult{CertificationChain{}, std::nullopt};
                         }));
    failing.emplace_back("client-crash", std::make_unique<ScriptedClient>([](const SigningRequest&) -> EnrollmentResult {
                             throw std::runtime_error("client crashed");
                         }));
    // The CA keys created above are live by design; count from here.
    const std::size_t idle = KeyPair::live_count();
    int paths = 0;
    for (auto& [name, client] : failing) {
        bool threw = false;
        for (const bool keep : {false, true}) {
            std::istringstream in("doomed document");
            SignOptions o = options;
            o.keep_key = keep;
            try {
                one_shot_sign(in, subject, *client, o);
            } catch (...) {
                threw = true;
            }
            expect(threw, name + ": signing succeeded");
            expect(KeyPair::live_count() == idle,
                   name + ": " + std::to_string(KeyPair::live_count() - idle) + " live key(s) left behind");
        }
        ++paths;
    }
    {
        // Unreadable document.
        std::istringstream in("x");
        in.setstate(std::ios::badbit);
        try {
            one_shot_sign(in, subject, honest, options);
        } catch (...) {
        }
        expect(KeyPair::live_count() == idle, "unreadable document left a live key");
        ++paths;
    }
    return {true, std::to_string(refused) + " second-signature attempts refused, " + std::to_string(paths) +
                      " error paths with 0 live keys"};
}

// ---------------------------------------------------------------------------
// 8. Interop with OpenSSL's X509 stack

Outcome criterion_interop()
{
    int validated = 0;
    for (const auto& label : {"ecdsa-p256", "ecdsa-p384", "rsa-2048"}) {
        auto s = make_scenario(*AlgorithmSuite::parse(label));
        const auto& b = s.bundle;
        expect(b.crl.has_value(), std::string(label) + ": bundle without CRL");
        const auto verdict = openssl_validate(b.chain, s.pki.root.certificate(), b.crl, s.pki.clock.now());
        expect(verdict.ok, std::string(label) + ": OpenSSL rejects: " + verdict.message);
        expect(verdict.crl_entries == 0, std::string(label) + ": CRL has " + std::to_string(verdict.crl_entries) +
                                             " entries");
        // OpenSSL checks a CRL for every chain member; give it the full set.
        const auto root_check = openssl_validate(s.pki.intermediate.chain(), s.pki.root.certificate(),
                                                 s.pki.root.issue_blank_crl(), s.pki.clock.now());
        expect(root_check.ok && root_check.crl_entries == 0, std::string(label) + ": root CRL: " + root_check.message);

        // A tampered chain must fail for OpenSSL too, or the oracle proves nothing.
        auto broken = b.chain;
        broken.certificates.at(1).signature.back() ^= 0x01;
        expect(!openssl_validate(broken, s.pki.root.certificate(), b.crl, s.pki.clock.now()).ok,
               std::string(label) + ": OpenSSL accepted a broken chain");

        std::istringstream in(s.document);
        const auto anchors = s.anchors();
        const auto legacy = verify_bundle(b, in, anchors, s.policy, s.pki.clock.now(), VerifyOptions{true});
        expect(legacy.accepted(), std::string(label) + ": legacy verdict\n" + legacy.to_text());
        ++validated;
    }
    return {true, std::to_string(validated) + " suites: leaf, chain and blank CRL accepted by OpenSSL, 0 revoked"};
}

// ---------------------------------------------------------------------------
// 9. Local benchmark shape

Outcome criterion_local_bench()
{
    const auto rsa = run_local_bench({*AlgorithmSuite::parse("rsa-3072-sha256")}, 5).at(0);
    const auto ec = run_local_bench({kDefaultSuite}, 301).at(0);
    const std::string detail = "rsa-3072 " + std::to_string(rsa.overhead_pct) + "%, ecdsa-p256 " +
                               std::to_string(ec.overhead_pct) + "%";
    expect(rsa.overhead_pct > 100, detail);
    expect(ec.overhead_pct < 100, detail);
    return {true, detail};
}

} // namespace

int main()
{
    struct Criterion {
        int id;
        const char* name;
        Outcome (*run)();
    };
    const std::array<Criterion, 9> criteria{{
        {1, "overhead tables reproduced", criterion_published_tables},
        {2, "deployment cost model", criterion_cost_model},
        {3, "end-to-end CLI roundtrip", criterion_end_to_end},
        {4, "mutation suite", criterion_mutations},
        {5, "uniform validity", criterion_uniform_validity},
        {6, "serial uniqueness under load", criterion_concurrent_serials},
        {7, "key lifecycle", criterion_key_lifecycle},
        {8, "X.509 interop", criterion_interop},
        {9, "local benchmark shape", criterion_local_bench},
    }};
    int failed = 0;
    for (const auto& c : criteria) {
        Outcome outcome;
        try {
            outcome = c.run();
        } catch (const Unmet& e) {
            outcome = {false, e.what()};
        } catch (const std::exception& e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        if (!outcome.pass) {
            ++failed;
        }
        std::printf("%s  %d  %-30s %s\n", outcome.pass ? "PASS" : "FAIL", c.id, c.name, outcome.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
