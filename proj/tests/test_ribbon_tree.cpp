#include "ainfty/errors.hpp"
#include "ainfty/ribbon_tree.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace ainfty;

TEST(RibbonTree, ParseAndStructure)
{
    auto t = RibbonTree::parse("((xx)x)");
    EXPECT_EQ(t.num_leaves(), 3);
    EXPECT_EQ(t.num_external(), 4);
    EXPECT_EQ(t.internal_vertices(), (std::vector<int>{1, 2}));
    EXPECT_EQ(t.internal_edges(), (std::vector<int>{2}));
    EXPECT_EQ(t.leaves(), (std::vector<int>{3, 4, 5}));
    EXPECT_EQ(t.cyclic_order(1), (std::vector<int>{0, 2, 5}));
    EXPECT_TRUE(t.is_trivalent());
    EXPECT_EQ(t.root_edge(), 1);
    EXPECT_FALSE(t.is_internal_edge(1));
    EXPECT_EQ(t.valency(1), 3);
    EXPECT_EQ(RibbonTree::corolla(3).canonical(), "(xxx)");
    EXPECT_FALSE(RibbonTree::corolla(3).is_trivalent());
}

TEST(RibbonTree, ParseErrors)
{
    for (const char* bad : {"", "x", "(x)", "((x)x)", "(xx", "(xx))", "(xy)"})
        EXPECT_THROW(RibbonTree::parse(bad), ParseError) << bad;
}

TEST(RibbonTree, EnumerationMatchesBruteForce)
{
    for (int k = 2; k <= 6; ++k) {
        std::set<std::string> got;
        for (const auto& t : enumerate_trees(k + 1))
            got.insert(t.canonical());
        EXPECT_EQ(got, oracle::planar_trees(k)) << k;
    }
    EXPECT_TRUE(enumerate_trees(2).empty());
}

TEST(RibbonTree, CatalanAndSchroederCounts)
{
    const int catalan[] = {1, 2, 5, 14, 42};
    const int schroeder[] = {1, 3, 11, 45, 197};
    for (int k = 2; k <= 6; ++k) {
        auto trees = enumerate_trees(k + 1);
        EXPECT_EQ(static_cast<int>(trees.size()), schroeder[k - 2]);
        int tri = 0;
        for (const auto& t : trees)
            tri += t.is_trivalent();
        EXPECT_EQ(tri, catalan[k - 2]);
    }
}

TEST(RibbonTree, StratumParamsEqualInternalVerticesMinusOne)
{
    for (int k = 2; k <= 6; ++k)
        for (const auto& t : enumerate_trees(k + 1)) {
            EXPECT_EQ(stratum_params(t), static_cast<int>(t.internal_vertices().size()) - 1);
            if (t.is_trivalent())
                EXPECT_EQ(stratum_params(t), k - 2);
        }
}

TEST(RibbonTree, Contraction)
{
    auto t = RibbonTree::parse("((xx)(xx))");
    auto c = contract_edges(t, {2});
    EXPECT_EQ(c.tree.canonical(), "(xx(xx))");
    EXPECT_EQ(contract_edges(t, t.internal_edges()).tree.canonical(), "(xxxx)");
    EXPECT_THROW(contract_edge(t, 3), InvalidContractionError);
    EXPECT_THROW(contract_edge(t, 1), InvalidContractionError);
    for (int e : t.internal_edges())
        EXPECT_TRUE(c.edge_map.count(e) || e == 2);
}

TEST(RibbonTree, PosetIsClosedAndGraded)
{
    for (int n = 3; n <= 7; ++n) {
        auto poset = contraction_poset(n);
        std::map<std::string, int> rank;
        for (const auto& node : poset)
            rank[node.tree] = node.rank;
        EXPECT_EQ(rank.size(), enumerate_trees(n).size());
        for (const auto& node : poset) {
            EXPECT_EQ(node.covers.size(), static_cast<std::size_t>(node.rank));
            for (const auto& c : node.covers) {
                ASSERT_TRUE(rank.count(c)) << c;
                EXPECT_EQ(rank[c], node.rank - 1);
            }
        }
        EXPECT_EQ(poset.back().tree, RibbonTree::corolla(n - 1).canonical());
    }
}

TEST(RibbonTree, MetricValidation)
{
    auto t = RibbonTree::parse("((xx)x)");
    EXPECT_NO_THROW(make_metric_tree(t, {{2, 1}}));
    EXPECT_THROW(make_metric_tree(t, {{2, 0}}), InvalidMetricError);
    EXPECT_THROW(make_metric_tree(t, {{2, -1}}), InvalidMetricError);
    EXPECT_THROW(make_metric_tree(t, {}), InvalidMetricError);
    EXPECT_THROW(make_metric_tree(t, {{2, 1}, {3, 1}}), InvalidMetricError);
}

TEST(RibbonTree, LimitMetricContractsZeroEdges)
{
    auto t = RibbonTree::parse("((xx)(xx))");
    std::vector<MetricRibbonTree> seq;
    for (int n = 1; n <= 4; ++n)
        seq.push_back(make_metric_tree(t, {{2, Rational(1, n)}, {5, 2}}));
    auto lim = limit_metric(seq, {{2, 0}, {5, 2}});
    EXPECT_EQ(lim.tree.canonical(), "(xx(xx))");
    ASSERT_EQ(lim.lengths.size(), 1u);
    EXPECT_EQ(lim.lengths.begin()->second, 2);
    EXPECT_EQ(limit_metric(ExtendedMetric{t, {{2, 0}, {5, 0}}}).tree.canonical(), "(xxxx)");
    EXPECT_THROW(limit_metric(seq, {{2, -1}, {5, 2}}), InvalidMetricError);
    seq.push_back(make_metric_tree(RibbonTree::parse("((xx)x)"), {{2, 1}}));
    EXPECT_THROW(limit_metric(seq, {{2, 0}, {5, 2}}), InvalidMetricError);
}

TEST(RibbonTree, HeadIsFartherFromRoot)
{
    auto t = RibbonTree::parse("((xx)x)");
    auto ht = head_tail(t, 2);
    EXPECT_EQ(ht.head, 2);
    EXPECT_EQ(ht.tail, 1);
}

TEST(RibbonTree, DomainDescriptor)
{
    auto t = RibbonTree::parse("((xx)x)");
    auto d = assemble_domain(make_metric_tree(t, {{2, Rational(3, 2)}}));
    ASSERT_EQ(d.disks.size(), 2u);
    EXPECT_EQ(d.disks[0].marks, (std::vector<int>{1, 2, 5}));
    EXPECT_EQ(d.intervals.size(), 5u);
    int rays_in = 0, rays_out = 0;
    for (const auto& s : d.intervals) {
        rays_in += s.kind == IntervalSymbol::Kind::NegativeRay;
        rays_out += s.kind == IntervalSymbol::Kind::PositiveRay;
        if (s.kind == IntervalSymbol::Kind::Finite)
            EXPECT_EQ(s.length, Rational(3, 2));
    }
    EXPECT_EQ(rays_in, 3);
    EXPECT_EQ(rays_out, 1);
    // each internal edge is glued at both ends, each external edge once
    EXPECT_EQ(d.identifications.size(), 6u);
    EXPECT_NE(d.to_string().find("e2.l"), std::string::npos);
}
