/**
 * @file der.hpp
 * @brief Minimal ASN.1 DER reader and writer (X.690 subset used by X.509)
 *
 * Copyright 2026 otc contributors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include "otc/crypto.hpp"
#include "otc/time.hpp"

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace otc::der {

namespace tag {
inline constexpr std::uint8_t boolean = 0x01;
inline constexpr std::uint8_t integer = 0x02;
inline constexpr std::uint8_t bit_string = 0x03;
inline constexpr std::uint8_t octet_string = 0x04;
inline constexpr std::uint8_t null = 0x05;
inline constexpr std::uint8_t oid = 0x06;
inline constexpr std::uint8_t utf8_string = 0x0c;
inline constexpr std::uint8_t printable_string = 0x13;
inline constexpr std::uint8_t t61_string = 0x14;
inline constexpr std::uint8_t ia5_string = 0x16;
inline constexpr std::uint8_t utc_time = 0x17;
inline constexpr std::uint8_t generalized_time = 0x18;
inline constexpr std::uint8_t bmp_string = 0x1e;
inline constexpr std::uint8_t sequence = 0x30;
inline constexpr std::uint8_t set = 0x31;

constexpr std::uint8_t context(unsigned number, bool constructed = true)
{
    return static_cast<std::uint8_t>(0x80 | (constructed ? 0x20 : 0x00) | (number & 0x1f));
}
} // namespace tag

class Oid {
public:
    Oid() = default;
    Oid(std::initializer_list<std::uint32_t> arcs);
    explicit Oid(std::vector<std::uint32_t> arcs);

    /// Dotted form, e.g. "2.5.4.3". Throws Errc::invalid_argument.
    static Oid parse(std::string_view dotted);
    /// From DER content octets. Throws Errc::malformed_encoding.
    static Oid from_content(ByteView content, std::size_t offset = 0);

    std::string to_string() const;
    Bytes content() const;
    const std::vector<std::uint32_t>& arcs() const noexcept { return arcs_; }

    friend auto operator<=>(const Oid&, const Oid&) = default;
    friend bool operator==(const Oid&, const Oid&) = default;

private:
    std::vector<std::uint32_t> arcs_;
};

class Writer {
public:
    void raw(ByteView bytes);
    void tlv(std::uint8_t tag, ByteView content);

    template <class Body>
    void constructed(std::uint8_t tag, Body&& body)
    {
        Writer inner;
        body(inner);
        tlv(tag, inner.bytes());
    }

    template <class Body>
    void sequence(Body&& body)
    {
        constructed(tag::sequence, std::forward<Body>(body));
    }

    void boolean(bool value);
    void null();
    /// Non-negative integer from its big-endian magnitude.
    void unsigned_integer(ByteView magnitude);
    void integer(std::int64_t value);
    void oid(const Oid& value);
    void octet_string(ByteView value);
    void bit_string(ByteView value, std::uint8_t unused_bits = 0);
    void string(std::uint8_t string_tag, std::string_view value);
    /// UTCTime through 2049, GeneralizedTime from 2050 on.
    void time(Timestamp value);

    const Bytes& bytes() const noexcept { return out_; }
    Bytes take() noexcept { return std::move(out_); }

private:
    Bytes out_;
};

class Reader;

struct Element {
    std::uint8_t tag = 0;
    ByteView content;
    ByteView encoded; ///< full TLV
    std::size_t offset = 0; ///< absolute offset of the tag byte

    Reader reader() const;
};

class Reader {
public:
    explicit Reader(ByteView data, std::size_t base_offset = 0) : data_(data), base_(base_offset) {}

    bool empty() const noexcept { return pos_ >= data_.size(); }
    std::size_t offset() const noexcept { return base_ + pos_; }
    std::optional<std::uint8_t> peek_tag() const noexcept;

    Element read();
    Element expect(std::uint8_t tag, std::string_view what);
    std::optional<Element> optional(std::uint8_t tag);

    Reader sequence(std::string_view what) { return expect(tag::sequence, what).reader(); }
    Oid read_oid(std::string_view what);
    bool read_boolean(std::string_view what);
    /// Minimal big-endian magnitude of a non-negative INTEGER.
    Bytes read_unsigned_integer(std::string_view what);
    std::int64_t read_small_integer(std::string_view what);
    Bytes read_octet_string(std::string_view what);
    /// BIT STRING payload; requires zero unused bits.
    Bytes read_bit_string(std::string_view what);
    Timestamp read_time(std::string_view what);
    bool at_time() const noexcept;

    void expect_end(std::string_view what) const;

    [[noreturn]] void fail(const std::string& message) const;

private:
    ByteView data_;
    std::size_t base_;
    std::size_t pos_ = 0;
};

/// Reads exactly one element spanning all of `data`.
Element parse_single(ByteView data, std::string_view what);

} // namespace otc::der
