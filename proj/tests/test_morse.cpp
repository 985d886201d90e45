#include "ainfty/count_file.hpp"
#include "ainfty/errors.hpp"
#include "ainfty/homology.hpp"
#include "ainfty/morse_trees.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace ainfty;
using std::numbers::pi;

namespace {

std::vector<CriticalPoint> ends(const MorseModel& m, std::initializer_list<const char*> names)
{
    std::vector<CriticalPoint> out;
    for (const char* n : names)
        out.push_back(m.critical(n));
    return out;
}

std::int64_t count(const MorseModel& m, std::initializer_list<const char*> names)
{
    return count_trees(m, ends(m, names), EdgePerturbation());
}

}  // namespace

TEST(MorseModel, CriticalData)
{
    auto t = MorseModel::torus();
    EXPECT_EQ(t.criticals().size(), 4u);
    EXPECT_EQ(t.degree(t.critical("max")), 0);
    EXPECT_EQ(t.degree(t.critical("min")), 2);
    EXPECT_EQ(t.coorientation(t.critical("a")), 1);
    EXPECT_EQ(t.coorientation(t.critical("b")), -1);
    EXPECT_THROW(t.critical("c"), Error);
    EXPECT_THROW(MorseModel::by_name("sphere"), Error);
    for (const auto& c : t.criticals())
        for (double g : t.grad(c.coords))
            EXPECT_NEAR(g, 0, 1e-15);
}

TEST(MorseModel, ManifoldResiduals)
{
    auto t = MorseModel::torus();
    const auto& a = t.critical("a");
    // W+(a) = {x = 0}, W-(a) = {y = pi}
    EXPECT_NEAR(t.stable_residual(a, {0.0, 1.0})[0], 0, 1e-15);
    EXPECT_NEAR(t.unstable_residual(a, {2.0, pi})[0], 0, 1e-15);
    EXPECT_GT(t.stable_margin(a, {0.0, 1.0}), 0.5);
    EXPECT_NEAR(t.stable_margin(a, {0.0, 0.0}), 0, 1e-15);
    EXPECT_TRUE(t.stable_residual(t.critical("min"), {1.0, 2.0}).empty());
}

TEST(Flow, WrapAngle)
{
    EXPECT_DOUBLE_EQ(wrap_angle(3 * pi), pi);
    EXPECT_DOUBLE_EQ(wrap_angle(-pi), pi);
    EXPECT_NEAR(wrap_angle(2 * pi + 0.5), 0.5, 1e-15);
}

TEST(Flow, MatchesClosedForm)
{
    auto t = MorseModel::torus();
    for (double s : {0.3, 1.0, 2.5}) {
        Point p{0.4, -2.0};
        auto q = flow(t, p, s);
        EXPECT_NEAR(q[0], oracle::flow(0.4, s), 1e-10);
        EXPECT_NEAR(q[1], oracle::flow(-2.0, s), 1e-10);
        auto e = exact_flow(t, p, s);
        EXPECT_NEAR(e[0], oracle::flow(0.4, s), 1e-14);
        auto back = exact_flow(t, e, -s);
        EXPECT_NEAR(back[1], -2.0, 1e-12);
    }
    EXPECT_THROW(flow(t, {0.1, 0.1}, -1.0), Error);
    EXPECT_THROW(flow(t, {0.1}, 1.0), Error);
}

TEST(Flow, StepHalvingAndUnderflow)
{
    auto c = MorseModel::circle();
    FlowOptions coarse, fine;
    fine.step = coarse.step / 2;
    auto a = flow(c, {1.0}, 3.0, coarse), b = flow(c, {1.0}, 3.0, fine);
    EXPECT_NEAR(a[0], b[0], 1e-10);
    FlowOptions impossible;
    impossible.tolerance = 1e-30;
    impossible.min_step = 1e-3;
    EXPECT_THROW(flow(c, {1.0}, 3.0, impossible), StepUnderflowError);
}

TEST(Flow, TransportAgreesWithFullIntegration)
{
    auto t = MorseModel::torus();
    Drift d = [](double s, Point& out) {
        const double w = EdgePerturbation::bump(s, 0.5, 1.5);
        out[0] += 0.01 * w;
        out[1] -= 0.02 * w;
    };
    auto a = transport(t, {0.3, 2.0}, 0.0, 2.0, d, {{0.5, 1.5}});
    auto b = flow(t, {0.3, 2.0}, 0.0, 2.0, d);
    EXPECT_NEAR(a[0], b[0], 1e-9);
    EXPECT_NEAR(a[1], b[1], 1e-9);
    auto back = transport(t, a, 2.0, 0.0, d, {{0.5, 1.5}});
    EXPECT_NEAR(back[0], 0.3, 1e-9);
    auto samples = flow_samples(t, {0.3, 2.0}, 0.0, 1.0, Drift{}, 4);
    EXPECT_EQ(samples.size(), 5u);
}

TEST(Perturbation, BumpsAndWeights)
{
    EXPECT_EQ(EdgePerturbation::bump(-2.0, -1.5, -0.5), 0.0);
    EXPECT_NEAR(EdgePerturbation::bump(-1.0, -1.5, -0.5), 1.0, 1e-15);
    EXPECT_EQ(EdgePerturbation::breaking_weight(1.0), 0.0);
    EXPECT_EQ(EdgePerturbation::breaking_weight(5.0), 1.0);
    EXPECT_NEAR(EdgePerturbation::breaking_weight(3.0), 0.5, 1e-15);
    auto d = EdgePerturbation::direction(2, 1);
    EXPECT_NEAR(std::hypot(d[0], d[1]), 1.0, 1e-15);
}

TEST(Perturbation, LeafVectorsFollowRankInPiece)
{
    EdgePerturbation p(1e-3);
    auto t = RibbonTree::parse("((xx)x)");
    // short edge: unbroken, leaves ranked 1..3 in the whole tree
    auto v = p.leaf_vector(2, t, 5, {{2, 0.5}});
    auto want = EdgePerturbation::direction(2, 3);
    EXPECT_NEAR(v[0], 1e-3 * want[0], 1e-15);
    // long edge: broken, the leaf is second in the lower piece (edge 2, leaf 5)
    v = p.leaf_vector(2, t, 5, {{2, 10.0}});
    want = EdgePerturbation::direction(2, 2);
    EXPECT_NEAR(v[1], 1e-3 * want[1], 1e-15);
    EXPECT_NEAR(p.middle_vector(2, 2, 10.0)[0], 0.0, 1e-15);
}

TEST(MorseTrees, ExpectedDimension)
{
    auto t = MorseModel::torus();
    auto m2 = RibbonTree::parse("(xx)");
    EXPECT_EQ(expected_dim(t, ends(t, {"min", "a", "b"}), &m2), 0);
    EXPECT_EQ(expected_dim(t, ends(t, {"max", "max", "max"}), &m2), 0);
    EXPECT_EQ(expected_dim(t, ends(t, {"min", "max"}), nullptr), 1);
    auto corolla = RibbonTree::corolla(3);
    EXPECT_EQ(expected_dim(t, ends(t, {"a", "max", "a", "a"}), &corolla), -1);
    EXPECT_THROW(expected_dim(t, ends(t, {"a", "max", "a"}), &corolla), Error);
}

TEST(MorseTrees, CellOrientation)
{
    EXPECT_EQ(cell_orientation(RibbonTree::parse("(xx)")), 1);
    EXPECT_EQ(cell_orientation(RibbonTree::parse("((xx)x)")), 1);
    EXPECT_EQ(cell_orientation(RibbonTree::parse("(x(xx))")), -1);
    // consistent across every wall of the pentagon and beyond
    for (int n = 5; n <= 7; ++n)
        for (const auto& t : enumerate_trees(n))
            if (t.is_trivalent())
                EXPECT_NO_THROW(cell_orientation(t));
    EXPECT_THROW(cell_orientation(RibbonTree::corolla(3)), Error);
}

TEST(MorseTrees, CircleDifferentialCancels)
{
    auto c = MorseModel::circle();
    auto lines = solve_line(c, c.critical("max"), c.critical("min"));
    ASSERT_EQ(lines.size(), 2u);
    EXPECT_EQ(lines[0].sign + lines[1].sign, 0);
    EXPECT_EQ(count(c, {"min", "max"}), 0);
    EXPECT_EQ(count(c, {"max", "max", "max"}), 1);
    EXPECT_EQ(count(c, {"min", "max", "min"}), 1);
    EXPECT_EQ(count(c, {"min", "min", "max"}), -1);
}

TEST(MorseTrees, TorusProducts)
{
    auto t = MorseModel::torus();
    EXPECT_EQ(count(t, {"a", "max", "a"}), 1);
    EXPECT_EQ(count(t, {"a", "a", "max"}), -1);
    EXPECT_EQ(count(t, {"min", "a", "b"}), -1);
    EXPECT_EQ(count(t, {"min", "b", "a"}), 1);
    EXPECT_EQ(count(t, {"min", "a", "a"}), 0);
    EXPECT_EQ(count(t, {"max", "a"}), 0);
}

TEST(MorseTrees, RigidSolutionsAreTransverse)
{
    auto t = MorseModel::torus();
    TreeProblem prob{&t, RibbonTree::parse("(x(xx))"), ends(t, {"a", "a", "a", "max"}), EdgePerturbation()};
    auto sols = solve_all(prob);
    ASSERT_EQ(sols.size(), 2u);
    for (const auto& s : sols) {
        EXPECT_TRUE(s.rigid);
        EXPECT_LT(s.residual, 1e-9);
        EXPECT_LT(s.condition, 1e8);
        EXPECT_EQ(s.lengths.size(), 1u);
    }
    EXPECT_EQ(sols[0].sign + sols[1].sign, 0);
}

TEST(MorseTrees, SerialMatchesParallel)
{
    auto t = MorseModel::torus();
    TreeProblem prob{&t, RibbonTree::parse("((xx)x)"), ends(t, {"min", "b", "max", "min"}), EdgePerturbation()};
    auto a = solve_all(prob, {}, Execution::Serial), b = solve_all(prob, {}, Execution::Parallel);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].sign, b[i].sign);
        EXPECT_EQ(a[i].root_point, b[i].root_point);
    }
}

TEST(MorseTrees, CountsStableUnderStepHalving)
{
    auto t = MorseModel::torus();
    ShootOptions half;
    half.search_step /= 2;
    half.polish_step /= 2;
    half.check_flow.step /= 2;
    for (auto e : {ends(t, {"a", "max", "a", "a"}), ends(t, {"min", "b", "max", "min"})})
        EXPECT_EQ(count_trees(t, e, EdgePerturbation()), count_trees(t, e, EdgePerturbation(), half));
}

TEST(MorseTable, CircleTable)
{
    auto c = MorseModel::circle();
    MorseTableOptions opt;
    opt.max_k = 3;
    auto table = build_morse_table(c, opt);
    EXPECT_EQ(betti_numbers(table), (std::vector<int>{1, 1}));
    EXPECT_EQ(betti_numbers(table), oracle::cycle_betti(6));
    EXPECT_TRUE(verify(table, 3, {true, true}).ok());
    for (const auto& [key, value] : table.entries())
        EXPECT_NE(key.k, 1);
}

TEST(MorseTable, TorusHomologyAgainstCubicalOracle)
{
    auto t = MorseModel::torus();
    MorseTableOptions opt;
    opt.max_k = 2;
    auto table = build_morse_table(t, opt);
    EXPECT_EQ(betti_numbers(table), oracle::cubical_torus_betti(3));
    EXPECT_EQ(betti_numbers(table), (std::vector<int>{1, 2, 1}));
    EXPECT_TRUE(verify(table, 2, {true, true}).ok());
    EXPECT_EQ(emit(parse_table(emit(table))), emit(table));
}

TEST(Homology, RankOverQ)
{
    EXPECT_EQ(rank_over_q({{1, 2}, {2, 4}}), 1);
    EXPECT_EQ(rank_over_q({{1, 0}, {0, 3}}), 2);
    EXPECT_EQ(rank_over_q({}), 0);
}
