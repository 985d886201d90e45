#include "ainfty/errors.hpp"
#include "ainfty/novikov.hpp"

#include <gtest/gtest.h>

#include <map>
#include <random>

using namespace ainfty;

namespace ainfty {
void PrintTo(const NovikovElement& a, std::ostream* os) { *os << a.to_string(); }
}

namespace {

NovikovElement random_element(std::mt19937_64& rng, const Rational& cutoff)
{
    std::uniform_int_distribution<int> count(0, 4), coeff(-5, 5), num(0, 24), den(1, 4), mh(-2, 2);
    std::vector<NovikovTerm> terms;
    const int n = count(rng);
    for (int i = 0; i < n; ++i)
        terms.push_back({coeff(rng), Rational(num(rng), den(rng)), mh(rng)});
    return NovikovElement(std::move(terms), cutoff);
}

// independent oracle: dense map product with truncation
using Dense = std::map<std::pair<Rational, std::int64_t>, std::int64_t>;

Dense dense(const NovikovElement& a)
{
    Dense d;
    for (const auto& t : a.terms())
        d[{t.energy, t.maslov_half}] += t.coeff;
    return d;
}

Dense dense_product(const Dense& a, const Dense& b, const Rational& cutoff)
{
    Dense out;
    for (const auto& [ka, ca] : a)
        for (const auto& [kb, cb] : b) {
            Rational e = ka.first + kb.first;
            if (e <= cutoff)
                out[{e, ka.second + kb.second}] += ca * cb;
        }
    std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
    return out;
}

}  // namespace

TEST(Novikov, CanonicalFormMergesAndDropsZeros)
{
    NovikovElement a({{2, 1, 0}, {3, 1, 0}, {-5, Rational(1, 2), 1}, {5, Rational(1, 2), 1}});
    ASSERT_EQ(a.terms().size(), 1u);
    EXPECT_EQ(a.terms()[0].coeff, 5);
    EXPECT_TRUE(NovikovElement({{1, 0, 0}, {-1, 0, 0}}).is_zero());
}

TEST(Novikov, CutoffDropsHighEnergy)
{
    NovikovElement a({{1, 0, 0}, {1, 3, 0}}, Rational(2));
    ASSERT_EQ(a.terms().size(), 1u);
    auto b = NovikovElement::monomial(1, 1, 0).truncate(EnergyCutoff(Rational(3, 2)));
    auto sq = b * b;
    EXPECT_TRUE(sq.is_zero());
    EXPECT_EQ(sq.cutoff(), Rational(3, 2));
}

TEST(Novikov, ValuationOfZeroIsEmpty)
{
    EXPECT_FALSE(NovikovElement().valuation().has_value());
    EXPECT_EQ(NovikovElement({{1, Rational(5, 3), 0}, {2, Rational(1, 3), 1}}).valuation(), Rational(1, 3));
}

TEST(Novikov, Degree)
{
    EXPECT_EQ(NovikovElement().degree().kind, NovikovDegree::Kind::Unconstrained);
    auto h = NovikovElement({{1, 0, 2}, {3, 4, 2}}).degree();
    EXPECT_EQ(h.kind, NovikovDegree::Kind::Homogeneous);
    EXPECT_EQ(h.value, 4);
    EXPECT_EQ(NovikovElement({{1, 0, 0}, {1, 0, 1}}).degree().kind, NovikovDegree::Kind::Mixed);
}

TEST(Novikov, ParsePrintRoundTrip)
{
    for (const char* s : {"0", "T^0", "-1*T^1/2*e^-1", "3*T^2 + -2*T^5/3*e^1 | cutoff=7"}) {
        auto a = NovikovElement::parse(s);
        EXPECT_EQ(NovikovElement::parse(a.to_string()), a) << s;
    }
    EXPECT_THROW(NovikovElement::parse("T^-1"), Error);
    EXPECT_THROW(NovikovElement::parse("2*Q^1"), Error);
}

TEST(Novikov, RejectsNegativeEnergyAndCutoff)
{
    EXPECT_THROW(NovikovElement({{1, -1, 0}}), Error);
    EXPECT_THROW(EnergyCutoff(Rational(-1)), Error);
}

TEST(Novikov, OverflowIsDetected)
{
    auto big = NovikovElement::monomial(INT64_MAX / 2 + 1, 0, 0);
    EXPECT_THROW(big * NovikovElement::monomial(4, 0, 0), Error);
}

TEST(Novikov, ProductMatchesDenseOracle)
{
    std::mt19937_64 rng(7);
    const Rational cutoff(6);
    for (int i = 0; i < 500; ++i) {
        auto a = random_element(rng, cutoff), b = random_element(rng, cutoff);
        EXPECT_EQ(dense(a * b), dense_product(dense(a), dense(b), cutoff));
    }
}

TEST(Novikov, RingAxiomsRandomized)
{
    std::mt19937_64 rng(11);
    const Rational cutoff(10);
    for (int i = 0; i < 2000; ++i) {
        auto a = random_element(rng, cutoff), b = random_element(rng, cutoff), c = random_element(rng, cutoff);
        ASSERT_EQ((a * b) * c, a * (b * c));
        ASSERT_EQ(a * (b + c), a * b + a * c);
        ASSERT_EQ((a + b) * c, a * c + b * c);
        ASSERT_EQ(a * b, b * a);
        ASSERT_EQ(a - a, NovikovElement({}, cutoff));
        auto p = a * b;
        if (!p.is_zero())
            ASSERT_EQ(*p.valuation(), *a.valuation() + *b.valuation());
    }
}
