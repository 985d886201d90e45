#include "ainfty/operation_table.hpp"

#include <algorithm>

namespace ainfty {

std::vector<OrderKey> verification_order(const MonoidTable& monoid, std::int64_t bound, bool zero_class_only)
{
    std::vector<OrderKey> keys;
    for (const auto& beta : monoid.closure()) {
        if (zero_class_only && !beta.is_zero())
            continue;
        const auto n = monoid.norm(beta);
        for (std::int64_t k = 0; n + k <= bound; ++k)
            keys.push_back({beta, static_cast<int>(k)});
    }
    std::stable_sort(keys.begin(), keys.end(), [&](const OrderKey& a, const OrderKey& b) {
        switch (monoid.compare(a, b)) {
        case Order::Precedes:
            return true;
        case Order::Succeeds:
            return false;
        case Order::Equivalent:
            break;
        }
        if (!a.beta.same_class(b.beta))
            return a.beta.value_less(b.beta);
        return a.k < b.k;
    });
    return keys;
}

namespace {

struct WorkItem {
    std::size_t key;
    Inputs inputs;
};

std::vector<WorkItem> expand(const std::vector<OrderKey>& keys, std::size_t num_generators)
{
    std::vector<WorkItem> work;
    for (std::size_t key = 0; key < keys.size(); ++key) {
        const auto k = static_cast<std::size_t>(keys[key].k);
        std::size_t total = 1;
        for (std::size_t i = 0; i < k; ++i)
            total *= num_generators;
        for (std::size_t idx = 0; idx < total; ++idx) {
            Inputs tuple(k);
            std::size_t rest = idx;
            for (std::size_t pos = k; pos-- > 0;) {
                tuple[pos] = rest % num_generators;
                rest /= num_generators;
            }
            work.push_back({key, std::move(tuple)});
        }
    }
    return work;
}

VerifyReport collect(const OperationTable& table, const std::vector<OrderKey>& keys,
                     const std::vector<WorkItem>& work, const std::vector<Combination>& values,
                     const VerifyOptions& options)
{
    VerifyReport report;
    report.checked = keys;
    report.tuples_checked = work.size();
    std::vector<std::map<Inputs, Combination>> per_key(keys.size());
    for (std::size_t w = 0; w < work.size(); ++w)
        if (!values[w].empty())
            per_key[work[w].key].emplace(work[w].inputs, values[w]);
    for (std::size_t key = 0; key < keys.size(); ++key)
        if (!per_key[key].empty())
            report.defects.push_back({keys[key].k, keys[key].beta, std::move(per_key[key])});
    if (options.strict_degree)
        report.degree_violations = table.degree_violations();
    return report;
}

}  // namespace

VerifyReport verify(const OperationTable& table, std::int64_t bound, const VerifyOptions& options)
{
    const auto keys = verification_order(table.monoid(), bound, options.zero_class_only);
    const auto work = expand(keys, table.generators().size());
    std::vector<Combination> values(work.size());
    const auto n = static_cast<std::int64_t>(work.size());
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t w = 0; w < n; ++w) {
        const auto& item = work[w];
        values[w] = ank_defect(table, keys[item.key].k, keys[item.key].beta, item.inputs);
    }
    return collect(table, keys, work, values, options);
}

VerifyReport verify_serial(const OperationTable& table, std::int64_t bound, const VerifyOptions& options)
{
    const auto keys = verification_order(table.monoid(), bound, options.zero_class_only);
    const auto work = expand(keys, table.generators().size());
    std::vector<Combination> values;
    values.reserve(work.size());
    for (const auto& item : work)
        values.push_back(ank_defect(table, keys[item.key].k, keys[item.key].beta, item.inputs));
    return collect(table, keys, work, values, options);
}

}  // namespace ainfty
