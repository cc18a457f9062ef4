/**
 * @file bundle.hpp
 * @brief Detached signature bundle (.otcb) model and serialization
 *
 * An .otcb file is a ustar archive with four members:
 *   meta.txt       key=value lines: digest-alg, digest-hex, created-at,
 *                  subject, and optionally locator
 *   signature.bin  raw signature bytes
 *   chain.pem      leaf first, root last
 *   crl.pem        the issuing CA's blank CRL
 *
 * Copyright 2026 otc contributors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include "otc/crypto.hpp"
#include "otc/time.hpp"
#include "otc/x509.hpp"

#include <filesystem>
#include <optional>
#include <string>

namespace otc {

struct SignedDocumentBundle {
    DocumentDigest digest;
    /// Where the document lives. The bundle never embeds the document.
    std::optional<std::string> locator;
    Bytes signature;
    CertificationChain chain;
    /// Optional only so that a bundle missing its CRL can be represented and
    /// rejected by the verifier.
    std::optional<RevocationList> crl;
    Timestamp created_at;
    DistinguishedName subject;
};

Bytes serialize_bundle(const SignedDocumentBundle& bundle);

/// Throws Errc::malformed_encoding.
SignedDocumentBundle parse_bundle(ByteView bytes);

void write_bundle(const std::filesystem::path& path, const SignedDocumentBundle& bundle);

/// Throws Errc::io_failure or Errc::malformed_encoding.
SignedDocumentBundle read_bundle(const std::filesystem::path& path);

} // namespace otc
