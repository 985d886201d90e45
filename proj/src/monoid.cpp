#include "ainfty/monoid.hpp"

#include "ainfty/errors.hpp"

#include <algorithm>

namespace ainfty {

namespace {

void check_class(const BetaClass& b)
{
    if (b.maslov % 2 != 0)
        throw Error("class '" + b.id + "' has odd Maslov index " + std::to_string(b.maslov));
    if (b.omega < 0)
        throw Error("class '" + b.id + "' has negative energy");
    if (b.omega == 0 && b.maslov != 0)
        throw Error("class '" + b.id + "' has zero energy but nonzero Maslov index");
}

void collect(const std::vector<BetaClass>& gens, std::size_t first, const Rational& omega,
             std::int64_t maslov, std::vector<std::size_t>& current,
             std::vector<std::vector<std::size_t>>& out)
{
    if (omega == 0) {
        if (maslov == 0)
            out.push_back(current);
        return;
    }
    for (std::size_t i = first; i < gens.size(); ++i) {
        if (gens[i].omega > omega)
            continue;
        current.push_back(i);
        collect(gens, i, omega - gens[i].omega, maslov - gens[i].maslov, current, out);
        current.pop_back();
    }
}

}  // namespace

MonoidTable::MonoidTable(std::vector<BetaClass> generators, EnergyCutoff window)
    : window_(std::move(window))
{
    window_ = EnergyCutoff(window_.bound());
    for (auto& g : generators) {
        g.omega.canonicalize();
        check_class(g);
        if (g.omega == 0)
            throw Error("generator '" + g.id + "' must have positive energy");
        bool dup = std::any_of(generators_.begin(), generators_.end(),
                               [&](const BetaClass& h) { return h.same_class(g); });
        if (!dup)
            generators_.push_back(g);
    }
    std::sort(generators_.begin(), generators_.end(),
              [](const BetaClass& a, const BetaClass& b) { return a.value_less(b); });

    // breadth-first closure; finite because every generator energy is positive
    closure_.push_back(BetaClass::zero());
    for (std::size_t head = 0; head < closure_.size(); ++head) {
        for (const auto& g : generators_) {
            BetaClass next{"", closure_[head].omega + g.omega, closure_[head].maslov + g.maslov};
            if (next.omega > window_.bound())
                continue;
            bool seen = std::any_of(closure_.begin(), closure_.end(),
                                    [&](const BetaClass& c) { return c.same_class(next); });
            if (seen)
                continue;
            next.id = closure_[head].is_zero() ? g.id : closure_[head].id + "+" + g.id;
            closure_.push_back(std::move(next));
        }
    }
    std::sort(closure_.begin(), closure_.end(),
              [](const BetaClass& a, const BetaClass& b) { return a.value_less(b); });
    // generator ids win over derived sum names
    for (auto& c : closure_)
        for (const auto& g : generators_)
            if (c.same_class(g))
                c.id = g.id;

    norms_.reserve(closure_.size());
    for (const auto& c : closure_) {
        if (c.is_zero()) {
            norms_.push_back(-1);
            continue;
        }
        std::size_t longest = 0;
        for (const auto& d : decompositions(c))
            longest = std::max(longest, d.size());
        norms_.push_back(static_cast<std::int64_t>(longest) + ceil_to_int(c.omega) - 1);
    }
}

std::optional<std::size_t> MonoidTable::find(const BetaClass& beta) const
{
    auto it = std::lower_bound(closure_.begin(), closure_.end(), beta,
                               [](const BetaClass& a, const BetaClass& b) { return a.value_less(b); });
    if (it == closure_.end() || !it->same_class(beta))
        return std::nullopt;
    return static_cast<std::size_t>(it - closure_.begin());
}

const BetaClass& MonoidTable::canonical(const BetaClass& beta) const
{
    auto idx = find(beta);
    if (!idx)
        throw UnknownClassError("class (omega=" + format_rational(beta.omega) +
                                ", maslov=" + std::to_string(beta.maslov) + ") is outside the monoid closure");
    return closure_[*idx];
}

std::vector<std::vector<std::size_t>> MonoidTable::decompositions(const BetaClass& beta) const
{
    canonical(beta);
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> current;
    collect(generators_, 0, beta.omega, beta.maslov, current, out);
    return out;
}

std::int64_t MonoidTable::norm(const BetaClass& beta) const
{
    auto idx = find(beta);
    if (!idx)
        canonical(beta);  // throws
    return norms_[*idx];
}

Order MonoidTable::compare(const OrderKey& a, const OrderKey& b) const
{
    const auto na = norm(a.beta);
    const auto nb = norm(b.beta);
    const auto sa = na + a.k;
    const auto sb = nb + b.k;
    if (sa < sb || (sa == sb && na < nb))
        return Order::Precedes;
    if (sa == sb && na == nb)
        return Order::Equivalent;
    return Order::Succeeds;
}

}  // namespace ainfty
