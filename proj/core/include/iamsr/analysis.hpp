#pragma once

// Storage/bandwidth tradeoff points and secrecy-capacity comparisons, all in
// exact rational arithmetic.

#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "iamsr/error.hpp"

namespace iamsr::analysis {

using Rational = boost::multiprecision::cpp_rational;

/// "p/q" in lowest terms, or the bare integer when q = 1.
std::string format_rational(const Rational& r);
/// Decimal rendering rounded half-up to `places` digits.
std::string format_decimal(const Rational& r, unsigned places = 6);

struct TradeoffPoint {
  Rational alpha;  // per-node storage
  Rational gamma;  // repair bandwidth d * beta
};

/// (B/k, (B/k) d / (d - k + 1)). Requires 1 <= k <= d.
TradeoffPoint msr_point(std::size_t B, std::size_t k, std::size_t d);
/// Both coordinates (B/k) 2d / (2d - k + 1). Requires 1 <= k <= d.
TradeoffPoint mbr_point(std::size_t B, std::size_t k, std::size_t d);

/// d beta = 2k - 1 for the [2k, k, 2k - 1] code.
std::size_t ia_repair_bandwidth(std::size_t k);

/// (k - l1 - l2) (1 - 1/(d - k + 1))^l2 alpha.
Rational goparaju_bound(std::size_t k, std::size_t d, std::size_t alpha, std::size_t l1,
                        std::size_t l2);

/// Achieved secrecy capacity (k - l1 - l2)(alpha - l2) of the IA code.
std::size_t ia_secrecy_capacity(std::size_t k, std::size_t l1, std::size_t l2);

struct BandwidthRow {
  std::size_t k;
  std::size_t ia_gamma;
  Rational msr_gamma_min_d;  // generic MSR with d = k
  Rational msr_gamma_max_d;  // generic MSR with d = 2k - 1
};

std::vector<BandwidthRow> bandwidth_table(std::size_t k_max);

struct SecrecyRow {
  std::size_t l2;
  std::size_t ia_capacity;   // (k - l1 - l2)(k - l2)
  Rational goparaju;         // upper bound at d = 2k - 1, alpha = k
  std::size_t msr_bound;     // (k - l1 - l2) alpha
};

/// Rows for l2 = 1 .. k - l1 - 1. Throws Error if a row violates
/// ia_capacity <= goparaju <= msr_bound.
std::vector<SecrecyRow> secrecy_table(std::size_t k, std::size_t l1);

void write_bandwidth_csv(std::ostream& os, const std::vector<BandwidthRow>& rows);
void write_secrecy_csv(std::ostream& os, const std::vector<SecrecyRow>& rows);

}  // namespace iamsr::analysis
