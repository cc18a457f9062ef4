/**
 * @file archive.cpp
 * @brief ustar encoding and decoding
 *
 * Copyright 2026 otc contributors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "otc/archive.hpp"

#include "otc/error.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <set>

namespace otc::archive {

namespace {

constexpr std::size_t kBlock = 512;

// Header field offsets.
constexpr std::size_t kName = 0, kMode = 100, kUid = 108, kGid = 116, kSize = 124, kMtime = 136, kChksum = 148,
                      kType = 156, kMagic = 257, kVersion = 263;

void put_octal(std::uint8_t* field, std::size_t width, std::uint64_t value)
{
    // width - 1 digits, NUL terminated.
    char buf[32];
    std::snprintf(buf, sizeof buf, "%0*llo", static_cast<int>(width - 1), static_cast<unsigned long long>(value));
    std::memcpy(field, buf, width);
}

std::uint64_t get_octal(const std::uint8_t* field, std::size_t width, std::size_t offset)
{
    std::uint64_t v = 0;
    std::size_t i = 0;
    while (i < width && field[i] == ' ') {
        ++i;
    }
    bool any = false;
    for (; i < width && field[i] >= '0' && field[i] <= '7'; ++i) {
        v = (v << 3) | static_cast<std::uint64_t>(field[i] - '0');
        any = true;
    }
    for (; i < width; ++i) {
        if (field[i] != 0 && field[i] != ' ') {
            throw Error(Errc::malformed_encoding, "bad octal field in archive header", offset);
        }
    }
    if (!any) {
        throw Error(Errc::malformed_encoding, "empty octal field in archive header", offset);
    }
    return v;
}

std::uint32_t checksum(const std::uint8_t* header)
{
    std::uint32_t sum = 0;
    for (std::size_t i = 0; i < kBlock; ++i) {
        sum += (i >= kChksum && i < kChksum + 8) ? ' ' : header[i];
    }
    return sum;
}

bool all_zero(const std::uint8_t* p, std::size_t n)
{
    return std::all_of(p, p + n, [](std::uint8_t b) { return b == 0; });
}

} // namespace

Bytes write_tar(const std::vector<Entry>& entries, Timestamp mtime)
{
    std::set<std::string> seen;
    Bytes out;
    const auto seconds = static_cast<std::uint64_t>(std::max<std::int64_t>(0, mtime.time_since_epoch().count()));
    for (const auto& e : entries) {
        if (e.name.empty() || e.name.size() > 100 || !seen.insert(e.name).second) {
            throw Error(Errc::invalid_argument, "bad archive member name '" + e.name + "'");
        }
        std::uint8_t header[kBlock] = {};
        std::memcpy(header + kName, e.name.data(), e.name.size());
        put_octal(header + kMode, 8, 0644);
        put_octal(header + kUid, 8, 0);
        put_octal(header + kGid, 8, 0);
        put_octal(header + kSize, 12, e.data.size());
        put_octal(header + kMtime, 12, seconds);
        header[kType] = '0';
        std::memcpy(header + kMagic, "ustar", 6);
        std::memcpy(header + kVersion, "00", 2);
        char sum[8];
        std::snprintf(sum, sizeof sum, "%06o", checksum(header));
        std::memcpy(header + kChksum, sum, 7);
        header[kChksum + 7] = ' ';

        out.insert(out.end(), header, header + kBlock);
        out.insert(out.end(), e.data.begin(), e.data.end());
        out.resize(out.size() + (kBlock - e.data.size() % kBlock) % kBlock, 0);
    }
    out.resize(out.size() + 2 * kBlock, 0);
    return out;
}

std::vector<Entry> read_tar(ByteView archive)
{
    std::vector<Entry> entries;
    std::set<std::string> seen;
    std::size_t pos = 0;
    while (true) {
        if (pos + kBlock > archive.size()) {
            throw Error(Errc::malformed_encoding, "archive truncated", pos);
        }
        const std::uint8_t* header = archive.data() + pos;
        if (all_zero(header, kBlock)) {
            break;
        }
        if (std::memcmp(header + kMagic, "ustar", 5) != 0) {
            throw Error(Errc::malformed_encoding, "not a ustar archive", pos);
        }
        if (get_octal(header + kChksum, 8, pos) != checksum(header)) {
            throw Error(Errc::malformed_encoding, "archive header checksum mismatch", pos);
        }
        if (header[kType] != '0' && header[kType] != 0) {
            throw Error(Errc::malformed_encoding, "archive member is not a regular file", pos);
        }
        const auto* name_end = static_cast<const std::uint8_t*>(std::memchr(header, 0, 100));
        std::string name(reinterpret_cast<const char*>(header), name_end ? name_end - header : 100);
        const auto size = get_octal(header + kSize, 12, pos);
        pos += kBlock;
        if (size > archive.size() - pos) {
            throw Error(Errc::malformed_encoding, "archive member '" + name + "' truncated", pos);
        }
        if (name.empty() || !seen.insert(name).second) {
            throw Error(Errc::malformed_encoding, "duplicate or empty archive member name", pos);
        }
        entries.push_back({name, Bytes(archive.begin() + pos, archive.begin() + pos + size)});
        pos += size + (kBlock - size % kBlock) % kBlock;
    }
    return entries;
}

} // namespace otc::archive
