/**
 * @file bundle.cpp
 * @brief .otcb serialization
 *
 * Copyright 2026 otc contributors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "otc/bundle.hpp"

#include "otc/archive.hpp"
#include "otc/error.hpp"

#include <fstream>
#include <map>
#include <sstream>

namespace otc {

namespace {

Bytes text_bytes(std::string_view s)
{
    return Bytes(s.begin(), s.end());
}

std::string_view bytes_text(const Bytes& b)
{
    return std::string_view(reinterpret_cast<const char*>(b.data()), b.size());
}

bool has_line_break(std::string_view s)
{
    return s.find_first_of("\r\n") != std::string_view::npos;
}

} // namespace

Bytes serialize_bundle(const SignedDocumentBundle& bundle)
{
    std::ostringstream meta;
    meta << "digest-alg=" << to_string(bundle.digest.algorithm()) << '\n'
         << "digest-hex=" << bundle.digest.hex() << '\n'
         << "created-at=" << format_iso8601(bundle.created_at) << '\n'
         << "subject=" << bundle.subject.to_string() << '\n';
    if (bundle.locator) {
        if (has_line_break(*bundle.locator)) {
            throw Error(Errc::invalid_argument, "document locator contains a line break");
        }
        meta << "locator=" << *bundle.locator << '\n';
    }

    std::vector<archive::Entry> entries{
        {"meta.txt", text_bytes(meta.str())},
        {"signature.bin", bundle.signature},
        {"chain.pem", text_bytes(to_pem(bundle.chain))},
    };
    if (bundle.crl) {
        entries.push_back({"crl.pem", text_bytes(to_pem(*bundle.crl))});
    }
    return archive::write_tar(entries, bundle.created_at);
}

SignedDocumentBundle parse_bundle(ByteView bytes)
{
    std::map<std::string, Bytes> members;
    for (auto& e : archive::read_tar(bytes)) {
        members.emplace(e.name, std::move(e.data));
    }
    auto member = [&](const std::string& name) -> const Bytes& {
        const auto it = members.find(name);
        if (it == members.end()) {
            throw Error(Errc::malformed_encoding, "bundle lacks " + name);
        }
        return it->second;
    };

    std::map<std::string, std::string> meta;
    std::istringstream in{std::string(bytes_text(member("meta.txt")))};
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw Error(Errc::malformed_encoding, "meta.txt line without '=': " + line);
        }
        meta[line.substr(0, eq)] = line.substr(eq + 1);
    }
    auto field = [&](const std::string& key) -> const std::string& {
        const auto it = meta.find(key);
        if (it == meta.end()) {
            throw Error(Errc::malformed_encoding, "meta.txt lacks " + key);
        }
        return it->second;
    };

    const auto alg = digest_algorithm_from_string(field("digest-alg"));
    if (!alg) {
        throw Error(Errc::malformed_encoding, "unknown digest-alg '" + field("digest-alg") + "'");
    }
    std::optional<DocumentDigest> digest;
    try {
        digest = DocumentDigest::from_hex(*alg, field("digest-hex"));
    } catch (const Error& e) {
        throw Error(Errc::malformed_encoding, std::string("bad digest-hex: ") + e.what());
    }
    const auto created = parse_iso8601(field("created-at"));
    if (!created) {
        throw Error(Errc::malformed_encoding, "bad created-at '" + field("created-at") + "'");
    }
    DistinguishedName subject;
    try {
        subject = DistinguishedName::parse(field("subject"));
    } catch (const Error& e) {
        throw Error(Errc::malformed_encoding, std::string("bad subject: ") + e.what());
    }

    CertificationChain chain{decode_certificates(bytes_text(member("chain.pem")))};
    if (chain.empty()) {
        throw Error(Errc::malformed_encoding, "chain.pem holds no certificates");
    }
    std::optional<RevocationList> crl;
    if (const auto it = members.find("crl.pem"); it != members.end()) {
        crl = decode_crl(it->second);
    }
    std::optional<std::string> locator;
    if (const auto it = meta.find("locator"); it != meta.end()) {
        locator = it->second;
    }
    return SignedDocumentBundle{*digest, locator, member("signature.bin"), std::move(chain), std::move(crl), *created,
                                std::move(subject)};
}

void write_bundle(const std::filesystem::path& path, const SignedDocumentBundle& bundle)
{
    const auto bytes = serialize_bundle(bundle);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    out.close();
    if (!out) {
        throw Error(Errc::io_failure, "cannot write " + path.string());
    }
}

SignedDocumentBundle read_bundle(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(Errc::io_failure, "cannot read " + path.string());
    }
    const Bytes bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_bundle(bytes);
}

} // namespace otc
