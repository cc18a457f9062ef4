/**
 * @file generators.hpp
 * @brief Random model objects for codec property tests
 *
 * Copyright 2026 otc contributors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include "otc/x509.hpp"

#include <random>

namespace otc::testing {

class ModelGenerator {
public:
    explicit ModelGenerator(std::uint64_t seed) : rng_(seed) {}

    std::size_t below(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }

    Bytes bytes(std::size_t n)
    {
        Bytes b(n);
        for (auto& x : b) {
            x = static_cast<std::uint8_t>(rng_());
        }
        return b;
    }

    std::string text(std::size_t max_len)
    {
        static constexpr std::string_view kAlphabet = "abcdefXYZ0129 -_.,+=\"\\<>;#";
        std::string s(1 + below(max_len), ' ');
        for (auto& c : s) {
            c = kAlphabet[below(kAlphabet.size())];
        }
        return s;
    }

    Timestamp time()
    {
        using namespace std::chrono;
        const auto lo = sys_days{year{1950} / 1 / 1}.time_since_epoch().count() * 86400LL;
        const auto hi = sys_days{year{2300} / 1 / 1}.time_since_epoch().count() * 86400LL;
        return Timestamp{seconds{lo + static_cast<long long>(rng_() % static_cast<std::uint64_t>(hi - lo))}};
    }

    DistinguishedName name()
    {
        static const std::vector<std::pair<der::Oid, std::uint8_t>> kTypes{
            {oids::common_name, der::tag::utf8_string},
            {oids::organization, der::tag::utf8_string},
            {oids::country, der::tag::printable_string},
            {oids::organizational_unit, der::tag::printable_string},
            {der::Oid{1, 3, 6, 1, 4, 1, 99999, 7}, der::tag::ia5_string},
        };
        std::vector<NameAttribute> attrs;
        const auto n = 1 + below(4);
        for (std::size_t i = 0; i < n; ++i) {
            const auto& [oid, t] = kTypes[below(kTypes.size())];
            attrs.push_back({oid, text(24), t});
        }
        return DistinguishedName(std::move(attrs));
    }

    Bytes serial()
    {
        auto s = bytes(1 + below(20));
        s[0] &= 0x7f;
        if (s[0] == 0) {
            s[0] = 1;
        }
        return s;
    }

    Bytes spki()
    {
        der::Writer w;
        w.sequence([&](der::Writer& s) {
            s.sequence([&](der::Writer& a) { a.oid(der::Oid{1, 2, 840, 10045, 2, 1}); });
            s.bit_string(bytes(1 + below(100)));
        });
        return w.take();
    }

    AlgorithmIdentifier signature_algorithm()
    {
        static const std::vector<AlgorithmSuite> kSuites{
            {SignatureAlgorithm::ecdsa_p256, DigestAlgorithm::sha256},
            {SignatureAlgorithm::ecdsa_p384, DigestAlgorithm::sha384},
            {SignatureAlgorithm::rsa_3072, DigestAlgorithm::sha256},
        };
        return signature_algorithm_for(kSuites[below(kSuites.size())]);
    }

    Extension extension()
    {
        if (below(3) == 0) {
            const auto alg = below(2) == 0 ? DigestAlgorithm::sha256 : DigestAlgorithm::sha384;
            return OtcExtension{DocumentDigest(alg, bytes(digest_length(alg))), below(2) == 0}.to_extension();
        }
        return Extension{der::Oid{1, 3, 6, 1, 4, 1, 99999, static_cast<std::uint32_t>(below(1000))}, below(2) == 0,
                         bytes(below(40))};
    }

    std::vector<Extension> extensions(std::size_t max)
    {
        std::vector<Extension> out;
        const auto n = below(max + 1);
        for (std::size_t i = 0; i < n; ++i) {
            out.push_back(extension());
        }
        return out;
    }

    SigningRequest csr()
    {
        SigningRequest c;
        c.subject = name();
        c.public_key_info = spki();
        c.extensions = extensions(3);
        if (below(4) == 0) {
            der::Writer w;
            w.sequence([&](der::Writer& a) {
                a.oid(der::Oid{1, 2, 840, 113549, 1, 9, 7});
                a.constructed(der::tag::set, [&](der::Writer& v) { v.string(der::tag::utf8_string, text(10)); });
            });
            c.other_attributes.push_back(w.take());
        }
        c.signature_algorithm = signature_algorithm();
        c.signature = bytes(8 + below(100));
        return c;
    }

    Certificate certificate()
    {
        Certificate c;
        c.version = below(8) == 0 ? 0 : 2;
        c.serial = serial();
        c.signature_algorithm = signature_algorithm();
        c.issuer = name();
        c.not_before = time();
        c.not_after = time();
        c.subject = name();
        c.public_key_info = spki();
        if (c.version == 2) {
            c.extensions = extensions(5);
        }
        c.signature = bytes(8 + below(100));
        return c;
    }

    RevocationList crl()
    {
        RevocationList l;
        l.version = 1;
        l.signature_algorithm = signature_algorithm();
        l.issuer = name();
        l.this_update = time();
        if (below(3) != 0) {
            l.next_update = time();
        }
        const auto n = below(3) == 0 ? below(4) : 0;
        for (std::size_t i = 0; i < n; ++i) {
            l.revoked.push_back({serial(), time(), below(2) == 0 ? std::vector<Extension>{} : extensions(2)});
        }
        l.extensions = extensions(2);
        l.signature = bytes(8 + below(100));
        return l;
    }

private:
    std::mt19937_64 rng_;
};

} // namespace otc::testing
