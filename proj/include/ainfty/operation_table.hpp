#pragma once

// Operations m_{k,beta} on the free module spanned by critical points, their
// assembly into Novikov-valued m_k, and evaluation of the A_{n,K} relations.

#include "ainfty/monoid.hpp"
#include "ainfty/novikov.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ainfty {

struct Generator {
    std::string name;
    int degree = 0;

    bool operator==(const Generator&) const = default;
};

using GeneratorIndex = std::size_t;
using Inputs = std::vector<GeneratorIndex>;

/// Sparse integer combination of generators; never stores zero coefficients.
class Combination {
public:
    Combination() = default;
    Combination(std::initializer_list<std::pair<const GeneratorIndex, std::int64_t>> init);

    void add(GeneratorIndex g, std::int64_t coeff);
    void add_scaled(const Combination& other, std::int64_t factor);

    std::int64_t coeff(GeneratorIndex g) const;
    bool empty() const noexcept { return terms_.empty(); }
    const std::map<GeneratorIndex, std::int64_t>& terms() const noexcept { return terms_; }

    bool operator==(const Combination&) const = default;

private:
    std::map<GeneratorIndex, std::int64_t> terms_;
};

/// Key of a single operation entry: (k, beta, inputs). Betas compare by value.
struct OpKey {
    int k = 0;
    BetaClass beta;
    Inputs inputs;
};

struct OpKeyLess {
    bool operator()(const OpKey& a, const OpKey& b) const;
};

class OperationTable {
public:
    OperationTable(std::vector<Generator> generators, MonoidTable monoid);

    const std::vector<Generator>& generators() const noexcept { return generators_; }
    const MonoidTable& monoid() const noexcept { return monoid_; }
    const std::map<OpKey, Combination, OpKeyLess>& entries() const noexcept { return entries_; }

    std::optional<GeneratorIndex> find_generator(const std::string& name) const;

    /// Adds `coeff * out` to m_{k,beta}(inputs). Throws InvalidTableError when the
    /// arity does not match k, a generator index is out of range, or the entry would
    /// make m_{0,0} nonzero. Betas outside the closure are accepted here and
    /// reported by gapped_check().
    void add(int k, const BetaClass& beta, const Inputs& inputs, GeneratorIndex out, std::int64_t coeff);
    void set(int k, const BetaClass& beta, const Inputs& inputs, Combination value);

    /// Zero combination when absent.
    const Combination& lookup(int k, const BetaClass& beta, const Inputs& inputs) const;

    /// deg(out) - (sum deg(in) + 2 - k - mu(beta)) for every nonzero (entry, output) pair
    /// that violates the degree rule.
    std::vector<std::pair<OpKey, GeneratorIndex>> degree_violations() const;

private:
    std::vector<Generator> generators_;
    MonoidTable monoid_;
    std::map<OpKey, Combination, OpKeyLess> entries_;
};

/// Novikov-valued combination of generators.
using NovikovCombination = std::map<GeneratorIndex, NovikovElement>;

/// m_k = sum_beta m_{k,beta} T^{omega(beta)} e^{mu(beta)/2}, over all beta with
/// omega(beta) <= cutoff, for every input tuple that has a nonzero entry.
std::map<Inputs, NovikovCombination> assemble_mk(const OperationTable& table, int k,
                                                 const EnergyCutoff& cutoff);

/// Left-hand side of the A_{n,K} relation at (k, beta) evaluated on `inputs`:
///   sum_{beta1+beta2=beta, k1+k2=k+1} sum_i (-1)^{|x_1|'+...+|x_i|'}
///       m_{k2,beta2}(x_1..x_i, m_{k1,beta1}(x_{i+1}..x_{i+k1}), x_{i+k1+1}..x_k)
/// with |x|' = |x| - 1.
Combination ank_defect(const OperationTable& table, int k, const BetaClass& beta, const Inputs& inputs);

/// True iff every beta carrying a nonzero entry lies in the monoid closure.
bool gapped_check(const OperationTable& table);

struct Defect {
    int k = 0;
    BetaClass beta;
    std::map<Inputs, Combination> values;
};

struct VerifyOptions {
    bool strict_degree = false;
    /// Only relations at beta = 0.
    bool zero_class_only = false;
};

struct VerifyReport {
    std::vector<OrderKey> checked;  // in verification order
    std::vector<Defect> defects;    // ordered like `checked`
    std::vector<std::pair<OpKey, GeneratorIndex>> degree_violations;
    std::size_t tuples_checked = 0;

    bool ok() const { return defects.empty() && degree_violations.empty(); }
};

/// Keys (k, beta) with norm(beta) + k <= bound, sorted by the monoid order; ties
/// inside an equivalence class broken by (omega, maslov, k).
std::vector<OrderKey> verification_order(const MonoidTable& monoid, std::int64_t bound, bool zero_class_only);

/// Evaluates every relation with norm(beta) + k <= bound over all generator tuples.
/// OpenMP-parallel over input tuples; results are independent of the thread count.
VerifyReport verify(const OperationTable& table, std::int64_t bound, const VerifyOptions& options = {});

/// Single-threaded reference implementation of verify().
VerifyReport verify_serial(const OperationTable& table, std::int64_t bound, const VerifyOptions& options = {});

}  // namespace ainfty
