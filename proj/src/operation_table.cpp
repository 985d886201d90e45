#include "ainfty/operation_table.hpp"

#include "ainfty/errors.hpp"

#include <algorithm>

namespace ainfty {

Combination::Combination(std::initializer_list<std::pair<const GeneratorIndex, std::int64_t>> init)
{
    for (const auto& [g, c] : init)
        add(g, c);
}

void Combination::add(GeneratorIndex g, std::int64_t coeff)
{
    if (coeff == 0)
        return;
    auto [it, inserted] = terms_.try_emplace(g, coeff);
    if (inserted)
        return;
    it->second = checked_add(it->second, coeff);
    if (it->second == 0)
        terms_.erase(it);
}

void Combination::add_scaled(const Combination& other, std::int64_t factor)
{
    for (const auto& [g, c] : other.terms_)
        add(g, checked_mul(c, factor));
}

std::int64_t Combination::coeff(GeneratorIndex g) const
{
    auto it = terms_.find(g);
    return it == terms_.end() ? 0 : it->second;
}

bool OpKeyLess::operator()(const OpKey& a, const OpKey& b) const
{
    if (a.k != b.k)
        return a.k < b.k;
    if (!a.beta.same_class(b.beta))
        return a.beta.value_less(b.beta);
    return a.inputs < b.inputs;
}

OperationTable::OperationTable(std::vector<Generator> generators, MonoidTable monoid)
    : generators_(std::move(generators)), monoid_(std::move(monoid))
{
    for (std::size_t i = 0; i < generators_.size(); ++i) {
        if (generators_[i].degree < 0)
            throw InvalidTableError("generator '" + generators_[i].name + "' has negative degree");
        for (std::size_t j = 0; j < i; ++j)
            if (generators_[j].name == generators_[i].name)
                throw InvalidTableError("duplicate generator '" + generators_[i].name + "'");
    }
}

std::optional<GeneratorIndex> OperationTable::find_generator(const std::string& name) const
{
    for (std::size_t i = 0; i < generators_.size(); ++i)
        if (generators_[i].name == name)
            return i;
    return std::nullopt;
}

void OperationTable::add(int k, const BetaClass& beta, const Inputs& inputs, GeneratorIndex out,
                         std::int64_t coeff)
{
    Combination c;
    c.add(out, coeff);
    OpKey key{k, beta, inputs};
    auto it = entries_.find(key);
    if (it != entries_.end())
        c.add_scaled(it->second, 1);
    set(k, beta, inputs, std::move(c));
}

void OperationTable::set(int k, const BetaClass& beta, const Inputs& inputs, Combination value)
{
    if (k < 0 || static_cast<std::size_t>(k) != inputs.size())
        throw InvalidTableError("entry with k=" + std::to_string(k) + " has " +
                                std::to_string(inputs.size()) + " inputs");
    for (auto g : inputs)
        if (g >= generators_.size())
            throw InvalidTableError("input generator index out of range");
    OpKey key{k, beta, inputs};
    key.beta.omega.canonicalize();
    for (const auto& [g, c] : value.terms())
        if (g >= generators_.size())
            throw InvalidTableError("output generator index out of range");
    if (k == 0 && beta.is_zero() && !value.empty())
        throw InvalidTableError("m_{0,0} must vanish");
    if (value.empty()) {
        entries_.erase(key);
        return;
    }
    entries_.insert_or_assign(std::move(key), std::move(value));
}

const Combination& OperationTable::lookup(int k, const BetaClass& beta, const Inputs& inputs) const
{
    static const Combination empty;
    auto it = entries_.find(OpKey{k, beta, inputs});
    return it == entries_.end() ? empty : it->second;
}

std::vector<std::pair<OpKey, GeneratorIndex>> OperationTable::degree_violations() const
{
    std::vector<std::pair<OpKey, GeneratorIndex>> out;
    for (const auto& [key, value] : entries_) {
        std::int64_t expected = 2 - key.k - key.beta.maslov;
        for (auto g : key.inputs)
            expected += generators_[g].degree;
        for (const auto& [g, c] : value.terms())
            if (generators_[g].degree != expected)
                out.emplace_back(key, g);
    }
    return out;
}

std::map<Inputs, NovikovCombination> assemble_mk(const OperationTable& table, int k,
                                                 const EnergyCutoff& cutoff)
{
    if (k < 0)
        throw Error("assemble_mk: k must be non-negative");
    std::map<Inputs, NovikovCombination> out;
    for (const auto& [key, value] : table.entries()) {
        if (key.k != k || key.beta.omega > cutoff.bound())
            continue;
        auto& slot = out[key.inputs];
        for (const auto& [g, c] : value.terms()) {
            auto term = NovikovElement::monomial(c, key.beta.omega, key.beta.maslov_half()).truncate(cutoff);
            auto [it, inserted] = slot.try_emplace(g, term);
            if (!inserted)
                it->second += term;
        }
    }
    // drop cancelled coefficients and empty tuples
    for (auto it = out.begin(); it != out.end();) {
        std::erase_if(it->second, [](const auto& kv) { return kv.second.is_zero(); });
        it = it->second.empty() ? out.erase(it) : std::next(it);
    }
    return out;
}

Combination ank_defect(const OperationTable& table, int k, const BetaClass& beta, const Inputs& inputs)
{
    if (static_cast<std::size_t>(k) != inputs.size())
        throw Error("ank_defect: expected " + std::to_string(k) + " inputs");
    const auto& gens = table.generators();
    const auto& monoid = table.monoid();

    // prefix[i] = sum_{j<=i} |x_j|'  (1-based), parity only
    std::vector<int> prefix(inputs.size() + 1, 0);
    for (std::size_t j = 0; j < inputs.size(); ++j)
        prefix[j + 1] = (prefix[j] + gens[inputs[j]].degree - 1) & 1;

    Combination result;
    for (const auto& beta1 : monoid.closure()) {
        BetaClass beta2{"", beta.omega - beta1.omega, beta.maslov - beta1.maslov};
        if (beta2.omega < 0 || !monoid.contains(beta2))
            continue;
        for (int k1 = 0; k1 <= k; ++k1) {
            for (int i = 0; i + k1 <= k; ++i) {
                Inputs inner_in(inputs.begin() + i, inputs.begin() + i + k1);
                const auto& inner = table.lookup(k1, beta1, inner_in);
                if (inner.empty())
                    continue;
                const std::int64_t sign = prefix[i] ? -1 : 1;
                Inputs outer_in;
                outer_in.reserve(k + 1 - k1);
                outer_in.insert(outer_in.end(), inputs.begin(), inputs.begin() + i);
                outer_in.push_back(0);
                outer_in.insert(outer_in.end(), inputs.begin() + i + k1, inputs.end());
                for (const auto& [y, c] : inner.terms()) {
                    outer_in[i] = y;
                    const auto& outer = table.lookup(k + 1 - k1, beta2, outer_in);
                    if (!outer.empty())
                        result.add_scaled(outer, checked_mul(sign, c));
                }
            }
        }
    }
    return result;
}

bool gapped_check(const OperationTable& table)
{
    const auto& monoid = table.monoid();
    return std::all_of(table.entries().begin(), table.entries().end(), [&](const auto& kv) {
        return kv.second.empty() || monoid.contains(kv.first.beta);
    });
}

}  // namespace ainfty
