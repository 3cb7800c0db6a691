#include "iamsr/analysis.hpp"

#include "iamsr/error.hpp"

namespace iamsr::analysis {

namespace {

using boost::multiprecision::cpp_int;

void require_k_le_d(std::size_t k, std::size_t d) {
  if (k == 0 || k > d) {
    throw InvalidParameterError("need 1 <= k <= d, got k = " + std::to_string(k) +
                                ", d = " + std::to_string(d));
  }
}

Rational ratio(std::size_t num, std::size_t den) { return Rational(cpp_int(num), cpp_int(den)); }

}  // namespace

std::string format_rational(const Rational& r) {
  auto num = boost::multiprecision::numerator(r);
  auto den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

std::string format_decimal(const Rational& r, unsigned places) {
  cpp_int scale = 1;
  for (unsigned i = 0; i < places; ++i) scale *= 10;
  const bool negative = r < 0;
  Rational mag = negative ? Rational(-r) : r;
  cpp_int num = boost::multiprecision::numerator(mag) * scale * 2 +
                boost::multiprecision::denominator(mag);
  cpp_int scaled = num / (boost::multiprecision::denominator(mag) * 2);
  std::string digits = scaled.str();
  if (places > 0) {
    if (digits.size() <= places) digits.insert(0, places - digits.size() + 1, '0');
    digits.insert(digits.size() - places, ".");
  }
  return (negative && scaled != 0 ? "-" : "") + digits;
}

TradeoffPoint msr_point(std::size_t B, std::size_t k, std::size_t d) {
  require_k_le_d(k, d);
  Rational alpha = ratio(B, k);
  return TradeoffPoint{alpha, alpha * ratio(d, d - k + 1)};
}

TradeoffPoint mbr_point(std::size_t B, std::size_t k, std::size_t d) {
  require_k_le_d(k, d);
  Rational v = ratio(B, k) * ratio(2 * d, 2 * d - k + 1);
  return TradeoffPoint{v, v};
}

std::size_t ia_repair_bandwidth(std::size_t k) {
  if (k < 2) throw InvalidParameterError("k must be at least 2");
  return 2 * k - 1;
}

Rational goparaju_bound(std::size_t k, std::size_t d, std::size_t alpha, std::size_t l1,
                        std::size_t l2) {
  if (l1 + l2 >= k) throw InvalidParameterError("need l1 + l2 < k");
  require_k_le_d(k, d);
  Rational factor = 1 - ratio(1, d - k + 1);
  Rational power = 1;
  for (std::size_t i = 0; i < l2; ++i) power *= factor;
  return Rational(cpp_int(k - l1 - l2)) * power * Rational(cpp_int(alpha));
}

std::size_t ia_secrecy_capacity(std::size_t k, std::size_t l1, std::size_t l2) {
  if (l1 + l2 >= k) throw InvalidParameterError("need l1 + l2 < k");
  return (k - l1 - l2) * (k - l2);
}

std::vector<BandwidthRow> bandwidth_table(std::size_t k_max) {
  if (k_max < 2) throw InvalidParameterError("k_max must be at least 2");
  std::vector<BandwidthRow> rows;
  for (std::size_t k = 2; k <= k_max; ++k) {
    rows.push_back(BandwidthRow{k, ia_repair_bandwidth(k), msr_point(k * k, k, k).gamma,
                                msr_point(k * k, k, 2 * k - 1).gamma});
  }
  return rows;
}

std::vector<SecrecyRow> secrecy_table(std::size_t k, std::size_t l1) {
  if (l1 >= k) throw InvalidParameterError("l1 must be below k");
  std::vector<SecrecyRow> rows;
  for (std::size_t l2 = 1; l1 + l2 < k; ++l2) {
    SecrecyRow row{l2, ia_secrecy_capacity(k, l1, l2), goparaju_bound(k, 2 * k - 1, k, l1, l2),
                   (k - l1 - l2) * k};
    if (!(Rational(cpp_int(row.ia_capacity)) <= row.goparaju &&
          row.goparaju <= Rational(cpp_int(row.msr_bound)))) {
      throw Error("bound ordering violated at l2 = " + std::to_string(l2));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_bandwidth_csv(std::ostream& os, const std::vector<BandwidthRow>& rows) {
  os << "k,ia_gamma,msr_gamma_d_k,msr_gamma_d_k_decimal,msr_gamma_d_2k_minus_1,"
        "msr_gamma_d_2k_minus_1_decimal\n";
  for (const auto& r : rows) {
    os << r.k << ',' << r.ia_gamma << ',' << format_rational(r.msr_gamma_min_d) << ','
       << format_decimal(r.msr_gamma_min_d) << ',' << format_rational(r.msr_gamma_max_d) << ','
       << format_decimal(r.msr_gamma_max_d) << '\n';
  }
}

void write_secrecy_csv(std::ostream& os, const std::vector<SecrecyRow>& rows) {
  os << "l2,ia_secrecy_capacity,goparaju_bound,goparaju_bound_decimal,msr_upper_bound\n";
  for (const auto& r : rows) {
    os << r.l2 << ',' << r.ia_capacity << ',' << format_rational(r.goparaju) << ','
       << format_decimal(r.goparaju) << ',' << r.msr_bound << '\n';
  }
}

}  // namespace iamsr::analysis
