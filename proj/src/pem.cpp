/**
 * @file pem.cpp
 * @brief PEM armor on top of OpenSSL's base64 block codec
 *
 * Copyright 2026 otc contributors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "otc/pem.hpp"

#include "otc/error.hpp"

#include <openssl/evp.h>

namespace otc::pem {

namespace {

constexpr std::string_view kBegin = "-----BEGIN ";
constexpr std::string_view kEnd = "-----END ";
constexpr std::string_view kDashes = "-----";

Bytes base64_decode(std::string_view body, std::size_t offset)
{
    std::string compact;
    compact.reserve(body.size());
    for (const char c : body) {
        if (c == '\r' || c == '\n' || c == ' ' || c == '\t') {
            continue;
        }
        compact.push_back(c);
    }
    if (compact.size() % 4 != 0) {
        throw Error(Errc::malformed_encoding, "PEM body is not whole base64 quanta", offset);
    }
    Bytes out(compact.size() / 4 * 3);
    const int n = EVP_DecodeBlock(out.data(), reinterpret_cast<const unsigned char*>(compact.data()),
                                  static_cast<int>(compact.size()));
    if (n < 0) {
        throw Error(Errc::malformed_encoding, "PEM body is not valid base64", offset);
    }
    std::size_t pad = 0;
    if (!compact.empty() && compact.back() == '=') {
        ++pad;
        if (compact.size() > 1 && compact[compact.size() - 2] == '=') {
            ++pad;
        }
    }
    out.resize(static_cast<std::size_t>(n) - pad);
    return out;
}

} // namespace

std::string encode(std::string_view label, ByteView der)
{
    std::string b64(4 * ((der.size() + 2) / 3) + 1, '\0');
    const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(b64.data()), der.data(), static_cast<int>(der.size()));
    b64.resize(static_cast<std::size_t>(n));

    std::string out;
    out += kBegin;
    out += label;
    out += "-----\n";
    for (std::size_t i = 0; i < b64.size(); i += 64) {
        out += b64.substr(i, 64);
        out += '\n';
    }
    out += kEnd;
    out += label;
    out += "-----\n";
    return out;
}

std::vector<Block> decode_all(std::string_view text)
{
    std::vector<Block> blocks;
    std::size_t pos = 0;
    while (true) {
        const auto begin = text.find(kBegin, pos);
        if (begin == std::string_view::npos) {
            break;
        }
        const auto label_start = begin + kBegin.size();
        const auto label_end = text.find(kDashes, label_start);
        if (label_end == std::string_view::npos) {
            throw Error(Errc::malformed_encoding, "unterminated PEM BEGIN line", begin);
        }
        Block block;
        block.label = std::string(text.substr(label_start, label_end - label_start));
        const auto body_start = label_end + kDashes.size();
        const std::string end_line = std::string(kEnd) + block.label + std::string(kDashes);
        const auto end = text.find(end_line, body_start);
        if (end == std::string_view::npos) {
            throw Error(Errc::malformed_encoding, "missing PEM END line for " + block.label, begin);
        }
        block.der = base64_decode(text.substr(body_start, end - body_start), body_start);
        blocks.push_back(std::move(block));
        pos = end + end_line.size();
    }
    return blocks;
}

bool looks_like_pem(ByteView data) noexcept
{
    const std::string_view s(reinterpret_cast<const char*>(data.data()), data.size());
    return s.find(kBegin) != std::string_view::npos;
}

} // namespace otc::pem
