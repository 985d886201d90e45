#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace ainfty {

using Rational = mpq_class;

/// Parses `p` or `p/q` (optional sign on p). Throws ParseError on malformed input.
Rational parse_rational(std::string_view text, int line = 0);

/// `p` when the denominator is 1, else `p/q`; always in lowest terms.
std::string format_rational(const Rational& r);

/// Exact ceiling of a rational as a 64-bit integer.
std::int64_t ceil_to_int(const Rational& r);

/// Checked 64-bit integer arithmetic; throws ainfty::Error on overflow.
std::int64_t checked_add(std::int64_t a, std::int64_t b);
std::int64_t checked_mul(std::int64_t a, std::int64_t b);

}  // namespace ainfty
