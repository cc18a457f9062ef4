/**
 * @file analysis.hpp
 * @brief Issuance overhead arithmetic, the reference overhead tables,
 *        deployment cost model and a local keygen/sign benchmark
 *
 * Copyright 2026 otc contributors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include "otc/crypto.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace otc {

struct BenchRecord {
    std::string suite;
    double keygen_s = 0;
    double sign_s = 0;
    double total_s = 0;
    long overhead_pct = 0;
};

/// round-half-up(100 * keygen / sign).
/// Throws Errc::zero_signature_time when sign_s <= 0 and
/// Errc::invalid_argument for a negative or non-finite keygen_s.
long overhead_percent(double keygen_s, double sign_s);

/// total_s = keygen_s + sign_s, overhead from overhead_percent().
BenchRecord make_record(std::string suite, double keygen_s, double sign_s);

struct OverheadTables {
    std::vector<BenchRecord> rsa;
    std::vector<BenchRecord> ecdsa;
};

/// The published RSA and ECDSA keygen/sign timings with Total and Overhead
/// recomputed from them.
OverheadTables reproduce_paper_tables();

/// Median-of-`iterations` timings of KeyPair::generate and KeyPair::sign.
/// Throws Errc::precondition_failed when iterations < 3.
std::vector<BenchRecord> run_local_bench(const std::vector<AlgorithmSuite>& suites, int iterations);

/// Aligned text table. `decimals` applies to the time columns.
std::string format_table(const std::string& title, const std::vector<BenchRecord>& records, int decimals = 2);

/// suite,keygen_s,sign_s,total_s,overhead_pct
std::string format_csv(const std::vector<BenchRecord>& records, int decimals = 2);

struct CostModel {
    /// Cost both designs share (S).
    double shared = 0;
    /// Key-management cost per user in a traditional PKI (C).
    double per_user = 0;
    std::uint64_t users = 0;
    /// Extra issuance cost of OTC issuer CAs (delta).
    double issuance_overhead = 0;
};

struct DeploymentCost {
    double otc_total = 0;
    double traditional_total = 0;
};

/// otc = S + delta, traditional = S + n*C. Throws Errc::invalid_argument for
/// negative inputs.
DeploymentCost deployment_cost(const CostModel& model);

} // namespace otc
