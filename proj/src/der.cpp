/**
 * @file der.cpp
 * @brief DER encoding rules: definite minimal lengths, low tag numbers only
 *
 * Copyright 2026 otc contributors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "otc/der.hpp"

#include "otc/error.hpp"

#include <charconv>
#include <cstdio>

namespace otc::der {

// ---------------------------------------------------------------------------
// Oid

Oid::Oid(std::initializer_list<std::uint32_t> arcs) : arcs_(arcs) {}

Oid::Oid(std::vector<std::uint32_t> arcs) : arcs_(std::move(arcs)) {}

Oid Oid::parse(std::string_view dotted)
{
    std::vector<std::uint32_t> arcs;
    std::size_t pos = 0;
    while (pos <= dotted.size()) {
        const auto dot = dotted.find('.', pos);
        const auto part = dotted.substr(pos, dot == std::string_view::npos ? std::string_view::npos : dot - pos);
        std::uint32_t value = 0;
        const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), value);
        if (part.empty() || ec != std::errc{} || ptr != part.data() + part.size()) {
            throw Error(Errc::invalid_argument, "bad object identifier '" + std::string(dotted) + "'");
        }
        arcs.push_back(value);
        if (dot == std::string_view::npos) {
            break;
        }
        pos = dot + 1;
    }
    if (arcs.size() < 2 || arcs[0] > 2 || (arcs[0] < 2 && arcs[1] > 39)) {
        throw Error(Errc::invalid_argument, "bad object identifier '" + std::string(dotted) + "'");
    }
    return Oid(std::move(arcs));
}

Oid Oid::from_content(ByteView content, std::size_t offset)
{
    if (content.empty()) {
        throw Error(Errc::malformed_encoding, "empty object identifier", offset);
    }
    std::vector<std::uint64_t> subids;
    std::uint64_t value = 0;
    bool in_progress = false;
    for (std::size_t i = 0; i < content.size(); ++i) {
        const auto b = content[i];
        if (!in_progress && b == 0x80) {
            throw Error(Errc::malformed_encoding, "non-minimal object identifier arc", offset + i);
        }
        value = (value << 7) | (b & 0x7f);
        if (value > 0xffffffffULL) {
            throw Error(Errc::malformed_encoding, "object identifier arc too large", offset + i);
        }
        in_progress = (b & 0x80) != 0;
        if (!in_progress) {
            subids.push_back(value);
            value = 0;
        }
    }
    if (in_progress) {
        throw Error(Errc::malformed_encoding, "truncated object identifier", offset);
    }
    std::vector<std::uint32_t> arcs;
    const auto first = subids.front();
    if (first < 40) {
        arcs = {0, static_cast<std::uint32_t>(first)};
    } else if (first < 80) {
        arcs = {1, static_cast<std::uint32_t>(first - 40)};
    } else {
        arcs = {2, static_cast<std::uint32_t>(first - 80)};
    }
    for (std::size_t i = 1; i < subids.size(); ++i) {
        arcs.push_back(static_cast<std::uint32_t>(subids[i]));
    }
    return Oid(std::move(arcs));
}

std::string Oid::to_string() const
{
    std::string out;
    for (std::size_t i = 0; i < arcs_.size(); ++i) {
        if (i != 0) {
            out.push_back('.');
        }
        out += std::to_string(arcs_[i]);
    }
    return out;
}

Bytes Oid::content() const
{
    if (arcs_.size() < 2) {
        throw Error(Errc::invalid_argument, "object identifier needs at least two arcs");
    }
    Bytes out;
    auto put = [&](std::uint64_t v) {
        std::uint8_t tmp[10];
        int n = 0;
        do {
            tmp[n++] = static_cast<std::uint8_t>(v & 0x7f);
            v >>= 7;
        } while (v != 0);
        while (n > 1) {
            out.push_back(static_cast<std::uint8_t>(tmp[--n] | 0x80));
        }
        out.push_back(tmp[0]);
    };
    put(static_cast<std::uint64_t>(arcs_[0]) * 40 + arcs_[1]);
    for (std::size_t i = 2; i < arcs_.size(); ++i) {
        put(arcs_[i]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Writer

void Writer::raw(ByteView bytes)
{
    out_.insert(out_.end(), bytes.begin(), bytes.end());
}

void Writer::tlv(std::uint8_t tag, ByteView content)
{
    out_.push_back(tag);
    const auto len = content.size();
    if (len < 0x80) {
        out_.push_back(static_cast<std::uint8_t>(len));
    } else {
        std::uint8_t tmp[8];
        int n = 0;
        for (auto v = len; v != 0; v >>= 8) {
            tmp[n++] = static_cast<std::uint8_t>(v & 0xff);
        }
        out_.push_back(static_cast<std::uint8_t>(0x80 | n));
        while (n > 0) {
            out_.push_back(tmp[--n]);
        }
    }
    raw(content);
}

void Writer::boolean(bool value)
{
    const std::uint8_t v = value ? 0xff : 0x00;
    tlv(tag::boolean, ByteView(&v, 1));
}

void Writer::null()
{
    tlv(tag::null, {});
}

void Writer::unsigned_integer(ByteView magnitude)
{
    std::size_t skip = 0;
    while (skip + 1 < magnitude.size() && magnitude[skip] == 0) {
        ++skip;
    }
    Bytes content;
    if (magnitude.empty()) {
        content.push_back(0);
    } else {
        if (magnitude[skip] & 0x80) {
            content.push_back(0);
        }
        content.insert(content.end(), magnitude.begin() + static_cast<std::ptrdiff_t>(skip), magnitude.end());
    }
    tlv(tag::integer, content);
}

void Writer::integer(std::int64_t value)
{
    Bytes content;
    for (int shift = 56; shift >= 0; shift -= 8) {
        content.push_back(static_cast<std::uint8_t>((static_cast<std::uint64_t>(value) >> shift) & 0xff));
    }
    std::size_t skip = 0;
    while (skip + 1 < content.size() &&
           ((content[skip] == 0x00 && !(content[skip + 1] & 0x80)) ||
            (content[skip] == 0xff && (content[skip + 1] & 0x80)))) {
        ++skip;
    }
    tlv(tag::integer, ByteView(content).subspan(skip));
}

void Writer::oid(const Oid& value)
{
    tlv(tag::oid, value.content());
}

void Writer::octet_string(ByteView value)
{
    tlv(tag::octet_string, value);
}

void Writer::bit_string(ByteView value, std::uint8_t unused_bits)
{
    Bytes content;
    content.reserve(value.size() + 1);
    content.push_back(unused_bits);
    content.insert(content.end(), value.begin(), value.end());
    tlv(tag::bit_string, content);
}

void Writer::string(std::uint8_t string_tag, std::string_view value)
{
    tlv(string_tag, ByteView(reinterpret_cast<const std::uint8_t*>(value.data()), value.size()));
}

void Writer::time(Timestamp value)
{
    using namespace std::chrono;
    const auto day = floor<days>(value);
    const year_month_day ymd{day};
    const hh_mm_ss hms{value - day};
    const int y = static_cast<int>(ymd.year());
    char buf[32];
    if (y >= 1950 && y < 2050) {
        std::snprintf(buf, sizeof buf, "%02d%02u%02u%02d%02d%02dZ", y % 100, static_cast<unsigned>(ymd.month()),
                      static_cast<unsigned>(ymd.day()), static_cast<int>(hms.hours().count()),
                      static_cast<int>(hms.minutes().count()), static_cast<int>(hms.seconds().count()));
        string(tag::utc_time, buf);
    } else {
        if (y < 0 || y > 9999) {
            throw Error(Errc::invalid_argument, "year out of range for GeneralizedTime");
        }
        std::snprintf(buf, sizeof buf, "%04d%02u%02u%02d%02d%02dZ", y, static_cast<unsigned>(ymd.month()),
                      static_cast<unsigned>(ymd.day()), static_cast<int>(hms.hours().count()),
                      static_cast<int>(hms.minutes().count()), static_cast<int>(hms.seconds().count()));
        string(tag::generalized_time, buf);
    }
}

// ---------------------------------------------------------------------------
// Reader

Reader Element::reader() const
{
    return Reader(content, offset + (encoded.size() - content.size()));
}

std::optional<std::uint8_t> Reader::peek_tag() const noexcept
{
    if (empty()) {
        return std::nullopt;
    }
    return data_[pos_];
}

void Reader::fail(const std::string& message) const
{
    throw Error(Errc::malformed_encoding, message, offset());
}

Element Reader::read()
{
    const std::size_t start = pos_;
    if (pos_ >= data_.size()) {
        fail("unexpected end of data");
    }
    const std::uint8_t t = data_[pos_++];
    if ((t & 0x1f) == 0x1f) {
        pos_ = start;
        fail("high tag numbers are not supported");
    }
    if (pos_ >= data_.size()) {
        pos_ = start;
        fail("truncated length");
    }
    std::size_t len = data_[pos_++];
    if (len & 0x80) {
        const std::size_t n = len & 0x7f;
        if (n == 0) {
            pos_ = start;
            fail("indefinite length is not DER");
        }
        if (n > sizeof(std::size_t) || pos_ + n > data_.size()) {
            pos_ = start;
            fail("truncated length");
        }
        if (data_[pos_] == 0) {
            pos_ = start;
            fail("non-minimal length encoding");
        }
        len = 0;
        for (std::size_t i = 0; i < n; ++i) {
            len = (len << 8) | data_[pos_++];
        }
        if (len < 0x80) {
            pos_ = start;
            fail("non-minimal length encoding");
        }
    }
    if (len > data_.size() - pos_) {
        pos_ = start;
        fail("element length exceeds available data");
    }
    Element e;
    e.tag = t;
    e.offset = base_ + start;
    e.content = data_.subspan(pos_, len);
    e.encoded = data_.subspan(start, pos_ - start + len);
    pos_ += len;
    return e;
}

Element Reader::expect(std::uint8_t t, std::string_view what)
{
    const auto next = peek_tag();
    if (!next || *next != t) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "expected %.*s (tag 0x%02x)", static_cast<int>(what.size()), what.data(), t);
        fail(buf);
    }
    return read();
}

std::optional<Element> Reader::optional(std::uint8_t t)
{
    if (peek_tag() == t) {
        return read();
    }
    return std::nullopt;
}

Oid Reader::read_oid(std::string_view what)
{
    const auto e = expect(tag::oid, what);
    return Oid::from_content(e.content, e.offset + 2);
}

bool Reader::read_boolean(std::string_view what)
{
    const auto e = expect(tag::boolean, what);
    if (e.content.size() != 1 || (e.content[0] != 0x00 && e.content[0] != 0xff)) {
        throw Error(Errc::malformed_encoding, "BOOLEAN must be 0x00 or 0xff", e.offset);
    }
    return e.content[0] == 0xff;
}

Bytes Reader::read_unsigned_integer(std::string_view what)
{
    const auto e = expect(tag::integer, what);
    const auto c = e.content;
    if (c.empty()) {
        throw Error(Errc::malformed_encoding, "empty INTEGER", e.offset);
    }
    if (c.size() > 1 && ((c[0] == 0x00 && !(c[1] & 0x80)) || (c[0] == 0xff && (c[1] & 0x80)))) {
        throw Error(Errc::malformed_encoding, "non-minimal INTEGER", e.offset);
    }
    if (c[0] & 0x80) {
        throw Error(Errc::malformed_encoding, "negative INTEGER where non-negative required", e.offset);
    }
    std::size_t skip = (c.size() > 1 && c[0] == 0) ? 1 : 0;
    return Bytes(c.begin() + static_cast<std::ptrdiff_t>(skip), c.end());
}

std::int64_t Reader::read_small_integer(std::string_view what)
{
    const auto e = expect(tag::integer, what);
    const auto c = e.content;
    if (c.empty() || c.size() > 8) {
        throw Error(Errc::malformed_encoding, "INTEGER out of range", e.offset);
    }
    if (c.size() > 1 && ((c[0] == 0x00 && !(c[1] & 0x80)) || (c[0] == 0xff && (c[1] & 0x80)))) {
        throw Error(Errc::malformed_encoding, "non-minimal INTEGER", e.offset);
    }
    std::int64_t v = (c[0] & 0x80) ? -1 : 0;
    for (const auto b : c) {
        v = static_cast<std::int64_t>((static_cast<std::uint64_t>(v) << 8) | b);
    }
    return v;
}

Bytes Reader::read_octet_string(std::string_view what)
{
    const auto e = expect(tag::octet_string, what);
    return Bytes(e.content.begin(), e.content.end());
}

Bytes Reader::read_bit_string(std::string_view what)
{
    const auto e = expect(tag::bit_string, what);
    if (e.content.empty() || e.content[0] != 0) {
        throw Error(Errc::malformed_encoding, "BIT STRING with unused bits", e.offset);
    }
    return Bytes(e.content.begin() + 1, e.content.end());
}

bool Reader::at_time() const noexcept
{
    const auto t = peek_tag();
    return t == tag::utc_time || t == tag::generalized_time;
}

Timestamp Reader::read_time(std::string_view what)
{
    using namespace std::chrono;
    if (!at_time()) {
        fail("expected " + std::string(what) + " (UTCTime or GeneralizedTime)");
    }
    const auto e = read();
    const std::string_view s(reinterpret_cast<const char*>(e.content.data()), e.content.size());
    auto digits = [&](std::size_t pos, std::size_t len) {
        int v = 0;
        for (std::size_t i = pos; i < pos + len; ++i) {
            if (s[i] < '0' || s[i] > '9') {
                throw Error(Errc::malformed_encoding, "bad digit in time value", e.offset);
            }
            v = v * 10 + (s[i] - '0');
        }
        return v;
    };
    int y = 0;
    std::size_t p = 0;
    if (e.tag == tag::utc_time) {
        if (s.size() != 13 || s.back() != 'Z') {
            throw Error(Errc::malformed_encoding, "UTCTime must be YYMMDDHHMMSSZ", e.offset);
        }
        y = digits(0, 2);
        y += y < 50 ? 2000 : 1900;
        p = 2;
    } else {
        if (s.size() != 15 || s.back() != 'Z') {
            throw Error(Errc::malformed_encoding, "GeneralizedTime must be YYYYMMDDHHMMSSZ", e.offset);
        }
        y = digits(0, 4);
        p = 4;
    }
    const int mo = digits(p, 2);
    const int d = digits(p + 2, 2);
    const int hh = digits(p + 4, 2);
    const int mi = digits(p + 6, 2);
    const int ss = digits(p + 8, 2);
    const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok() || hh > 23 || mi > 59 || ss > 59) {
        throw Error(Errc::malformed_encoding, "time value out of range", e.offset);
    }
    return sys_days{ymd} + hours{hh} + minutes{mi} + seconds{ss};
}

void Reader::expect_end(std::string_view what) const
{
    if (!empty()) {
        fail("trailing data after " + std::string(what));
    }
}

Element parse_single(ByteView data, std::string_view what)
{
    Reader r(data);
    auto e = r.read();
    r.expect_end(what);
    return e;
}

} // namespace otc::der
