/**
 * @file pem.hpp
 * @brief RFC 7468 textual encoding
 *
 * Copyright 2026 otc contributors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include "otc/crypto.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace otc::pem {

inline constexpr std::string_view kCertificate = "CERTIFICATE";
inline constexpr std::string_view kCertificateRequest = "CERTIFICATE REQUEST";
inline constexpr std::string_view kCrl = "X509 CRL";

struct Block {
    std::string label;
    Bytes der;
};

std::string encode(std::string_view label, ByteView der);

/// All blocks in `text`, in order. Text outside blocks is ignored.
/// Throws Errc::malformed_encoding on a broken block.
std::vector<Block> decode_all(std::string_view text);

bool looks_like_pem(ByteView data) noexcept;

} // namespace otc::pem
