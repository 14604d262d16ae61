// Copyright (c) 2026 The lnme developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <lnme/fee_rate.h>

#include <lnme/error.h>

#include "text.h"

#include <fmt/format.h>

#include <cmath>

namespace lnme {

FeeRate FeeRate::from_double(double sat_per_vb)
{
    if (!std::isfinite(sat_per_vb) || sat_per_vb < 0) throw UsageError("fee rate must be a finite non-negative number");
    return FeeRate(static_cast<std::int64_t>(std::floor(sat_per_vb * 100.0 + 0.5)));
}

FeeRate FeeRate::parse(std::string_view input)
{
    const auto s = text::trim(input);
    const auto bad = [&] { return DataError("invalid fee rate '" + std::string(input) + "'"); };
    if (s.empty()) throw bad();

    const auto dot = s.find('.');
    const auto whole_text = s.substr(0, dot);
    std::int64_t whole = 0;
    if (!whole_text.empty()) {
        if (whole_text.front() == '-' || whole_text.front() == '+') throw bad();
        const auto parsed = text::parse_int(whole_text);
        if (!parsed) throw bad();
        whole = *parsed;
    }
    std::int64_t fraction = 0;
    if (dot != std::string_view::npos) {
        const auto frac_text = s.substr(dot + 1);
        if (frac_text.size() > 2 || (whole_text.empty() && frac_text.empty())) throw bad();
        for (char c : frac_text) {
            if (c < '0' || c > '9') throw bad();
        }
        if (!frac_text.empty()) fraction = (frac_text[0] - '0') * 10 + (frac_text.size() == 2 ? frac_text[1] - '0' : 0);
    }
    return FeeRate(whole * 100 + fraction);
}

FeeRate FeeRate::scaled(double beta) const
{
    return FeeRate(static_cast<std::int64_t>(std::floor(static_cast<double>(centi_) * beta + 0.5)));
}

std::string FeeRate::to_string() const
{
    return fmt::format("{}.{:02}", centi_ / 100, centi_ % 100);
}

} // namespace lnme
