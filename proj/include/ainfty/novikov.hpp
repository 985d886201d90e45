#pragma once

// Truncated Novikov ring over the integers.
//
// An element is a finite sum  sum_i a_i T^{lambda_i} e^{n_i}  with integer a_i,
// non-negative rational energies lambda_i and integer e-exponents n_i. The T-adic
// completion is replaced by an optional energy cutoff: once set, every term with
// energy above the cutoff is dropped, and arithmetic between elements keeps the
// smaller of the two cutoffs.

#include "ainfty/rational.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ainfty {

struct NovikovTerm {
    std::int64_t coeff = 0;
    Rational energy;
    std::int64_t maslov_half = 0;

    bool operator==(const NovikovTerm&) const = default;
};

class EnergyCutoff {
public:
    explicit EnergyCutoff(Rational bound);

    const Rational& bound() const noexcept { return bound_; }

private:
    Rational bound_;
};

/// Grading of an element: T has degree 0 and e has degree 2.
struct NovikovDegree {
    enum class Kind { Unconstrained, Homogeneous, Mixed };
    Kind kind = Kind::Unconstrained;
    std::int64_t value = 0;  // meaningful only for Homogeneous
};

class NovikovElement {
public:
    NovikovElement() = default;

    /// Canonicalizes: sorts by (energy, maslov_half), merges duplicates, drops zeros
    /// and any term above the cutoff. Throws Error on a negative energy.
    explicit NovikovElement(std::vector<NovikovTerm> terms,
                            std::optional<Rational> cutoff = std::nullopt);

    static NovikovElement one() { return monomial(1, 0, 0); }
    static NovikovElement monomial(std::int64_t coeff, const Rational& energy,
                                   std::int64_t maslov_half);

    const std::vector<NovikovTerm>& terms() const noexcept { return terms_; }
    const std::optional<Rational>& cutoff() const noexcept { return cutoff_; }
    bool is_zero() const noexcept { return terms_.empty(); }

    /// Smallest energy present; nullopt stands for +infinity (the zero element).
    std::optional<Rational> valuation() const;
    NovikovDegree degree() const;
    NovikovElement truncate(const EnergyCutoff& cutoff) const;

    NovikovElement operator-() const;
    NovikovElement scaled(std::int64_t factor) const;

    friend NovikovElement operator+(const NovikovElement& a, const NovikovElement& b);
    friend NovikovElement operator-(const NovikovElement& a, const NovikovElement& b);
    friend NovikovElement operator*(const NovikovElement& a, const NovikovElement& b);
    NovikovElement& operator+=(const NovikovElement& other);

    /// Bit-exact equality: same terms and same cutoff.
    bool operator==(const NovikovElement& other) const;

    /// Canonical text, e.g. `2*T^1/2*e^1 + -3*T^0`; `0` for the zero element. A set cutoff
    /// is appended as ` | cutoff=<p/q>`.
    std::string to_string() const;
    static NovikovElement parse(std::string_view text);

private:
    std::vector<NovikovTerm> terms_;
    std::optional<Rational> cutoff_;
};

}  // namespace ainfty
