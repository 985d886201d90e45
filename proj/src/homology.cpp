#include "ainfty/homology.hpp"

#include "ainfty/errors.hpp"

#include <algorithm>

namespace ainfty {

int rank_over_q(std::vector<std::vector<Rational>> rows)
{
    int rank = 0;
    const std::size_t cols = rows.empty() ? 0 : rows.front().size();
    for (std::size_t c = 0; c < cols && static_cast<std::size_t>(rank) < rows.size(); ++c) {
        auto pivot = std::find_if(rows.begin() + rank, rows.end(), [&](const auto& r) { return r[c] != 0; });
        if (pivot == rows.end())
            continue;
        std::iter_swap(rows.begin() + rank, pivot);
        const auto& p = rows[static_cast<std::size_t>(rank)];
        for (std::size_t r = static_cast<std::size_t>(rank) + 1; r < rows.size(); ++r) {
            if (rows[r][c] == 0)
                continue;
            const Rational factor = rows[r][c] / p[c];
            for (std::size_t j = c; j < cols; ++j)
                rows[r][j] -= factor * p[j];
        }
        ++rank;
    }
    return rank;
}

std::vector<int> betti_numbers(const OperationTable& table)
{
    const auto& gens = table.generators();
    int top = 0;
    for (const auto& g : gens)
        top = std::max(top, g.degree);
    std::vector<std::vector<std::size_t>> by_degree(static_cast<std::size_t>(top) + 2);
    for (std::size_t i = 0; i < gens.size(); ++i)
        by_degree[static_cast<std::size_t>(gens[i].degree)].push_back(i);

    // rank of d: C^d -> C^{d+1}
    std::vector<int> rank(static_cast<std::size_t>(top) + 2, 0);
    for (int d = 0; d <= top; ++d) {
        const auto& src = by_degree[static_cast<std::size_t>(d)];
        const auto& dst = by_degree[static_cast<std::size_t>(d) + 1];
        std::vector<std::vector<Rational>> rows;
        for (auto x : src) {
            const auto& img = table.lookup(1, BetaClass::zero(), {x});
            for (const auto& [y, c] : img.terms())
                if (gens[y].degree != d + 1)
                    throw Error("m_{1,0}(" + gens[x].name + ") has a component of the wrong degree");
            std::vector<Rational> row;
            for (auto y : dst)
                row.emplace_back(img.coeff(y));
            rows.push_back(std::move(row));
        }
        rank[static_cast<std::size_t>(d)] = rows.empty() || dst.empty() ? 0 : rank_over_q(std::move(rows));
    }
    std::vector<int> betti;
    for (int d = 0; d <= top; ++d) {
        const int dim = static_cast<int>(by_degree[static_cast<std::size_t>(d)].size());
        const int in = d > 0 ? rank[static_cast<std::size_t>(d) - 1] : 0;
        betti.push_back(dim - rank[static_cast<std::size_t>(d)] - in);
    }
    return betti;
}

}  // namespace ainfty
