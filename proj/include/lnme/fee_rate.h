// Copyright (c) 2026 The lnme developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef LNME_FEE_RATE_H
#define LNME_FEE_RATE_H

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace lnme {

/// Fee rate in sat/vByte, fixed point with two decimals (hundredths).
class FeeRate {
public:
    constexpr FeeRate() = default;

    static constexpr FeeRate from_centi(std::int64_t centi) { return FeeRate(centi); }
    static constexpr FeeRate from_sat_per_vb(std::int64_t sats) { return FeeRate(sats * 100); }
    /// Rounds half up to the nearest 0.01 sat/vByte.
    static FeeRate from_double(double sat_per_vb);
    /// Decimal text with at most two fractional digits, e.g. "70", "2.5", "0.01".
    static FeeRate parse(std::string_view text);

    constexpr std::int64_t centi() const { return centi_; }
    double sat_per_vb() const { return static_cast<double>(centi_) / 100.0; }

    /// fee * beta, rounded half up to 0.01 sat/vByte.
    FeeRate scaled(double beta) const;

    /// Always two decimals, e.g. "70.00".
    std::string to_string() const;

    constexpr auto operator<=>(const FeeRate&) const = default;

private:
    constexpr explicit FeeRate(std::int64_t centi) : centi_(centi) {}

    std::int64_t centi_{0};
};

} // namespace lnme

#endif // LNME_FEE_RATE_H
