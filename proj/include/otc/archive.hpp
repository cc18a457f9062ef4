/**
 * @file archive.hpp
 * @brief Minimal POSIX ustar reader/writer for flat archives of regular files
 *
 * Copyright 2026 otc contributors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include "otc/crypto.hpp"
#include "otc/time.hpp"

#include <string>
#include <vector>

namespace otc::archive {

struct Entry {
    std::string name;
    Bytes data;
};

/// Names must be unique, non-empty and at most 100 bytes.
Bytes write_tar(const std::vector<Entry>& entries, Timestamp mtime);

/// Throws Errc::malformed_encoding on bad checksums, truncation, non-regular
/// members or duplicate names.
std::vector<Entry> read_tar(ByteView archive);

} // namespace otc::archive
