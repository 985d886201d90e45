#pragma once

// Discrete energy monoid of disk classes and the (beta, k) order used to schedule
// the A_{n,K} relations.

#include "ainfty/novikov.hpp"
#include "ainfty/rational.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ainfty {

/// A disk class, identified by its invariants (omega, maslov). The id is a label
/// only: two ids with equal invariants denote the same class.
struct BetaClass {
    std::string id;
    Rational omega;
    std::int64_t maslov = 0;

    static BetaClass zero() { return {"0", 0, 0}; }

    bool is_zero() const { return omega == 0 && maslov == 0; }
    std::int64_t maslov_half() const { return maslov / 2; }

    /// Ordering and equality on (omega, maslov); ids are ignored.
    bool same_class(const BetaClass& other) const
    {
        return omega == other.omega && maslov == other.maslov;
    }
    bool value_less(const BetaClass& other) const
    {
        if (omega != other.omega)
            return omega < other.omega;
        return maslov < other.maslov;
    }
};

struct OrderKey {
    BetaClass beta;
    int k = 0;
};

enum class Order { Precedes, Succeeds, Equivalent };

class MonoidTable {
public:
    /// Builds the closure of `generators` under addition up to `window`.
    /// Throws Error for odd Maslov indices, negative energies, or a generator of
    /// zero energy (the zero class or a null-energy class with nonzero Maslov).
    MonoidTable(std::vector<BetaClass> generators, EnergyCutoff window);

    const std::vector<BetaClass>& generators() const noexcept { return generators_; }
    const std::vector<BetaClass>& closure() const noexcept { return closure_; }
    const EnergyCutoff& window() const noexcept { return window_; }

    /// Index into closure(), or nullopt when the class is outside it.
    std::optional<std::size_t> find(const BetaClass& beta) const;
    bool contains(const BetaClass& beta) const { return find(beta).has_value(); }
    /// Closure member matching (omega, maslov) with its canonical id; throws UnknownClassError.
    const BetaClass& canonical(const BetaClass& beta) const;

    /// All multisets of generator indices (non-decreasing) that sum to beta.
    std::vector<std::vector<std::size_t>> decompositions(const BetaClass& beta) const;

    /// max decomposition length + ceil(omega) - 1; -1 for the zero class.
    std::int64_t norm(const BetaClass& beta) const;

    Order compare(const OrderKey& a, const OrderKey& b) const;

private:
    std::vector<BetaClass> generators_;
    EnergyCutoff window_;
    std::vector<BetaClass> closure_;  // sorted by (omega, maslov)
    std::vector<std::int64_t> norms_;
};

}  // namespace ainfty
