#include "ainfty/count_file.hpp"
#include "ainfty/errors.hpp"

#include <gtest/gtest.h>

using namespace ainfty;

namespace {

const char* circle = R"(format ainfty-counts 1
# unit and point class
generator max degree=0
generator min degree=1
op k=2 beta=0 in=max,max out=max coeff=1
op k=2 beta=0 in=max,min out=min coeff=1
op k=2 beta=0 in=min,max out=min coeff=-1
)";

const char* curved = R"(format ainfty-counts 1
generator max degree=0
generator min degree=1
beta g omega=1/2 maslov=2 generator
beta h omega=1 maslov=4
op k=0 beta=g in=- out=max coeff=3
op k=1 beta=h in=min out=max coeff=-2
)";

int error_line(const std::string& text)
{
    try {
        parse_count_file(text);
    } catch (const ParseError& e) {
        return e.line();
    }
    return -1;
}

std::string header() { return "format ainfty-counts 1\ngenerator u degree=0\n"; }

}  // namespace

TEST(CountFile, ParsesDeclarations)
{
    auto f = parse_count_file(curved);
    ASSERT_EQ(f.generators.size(), 2u);
    ASSERT_EQ(f.betas.size(), 2u);
    EXPECT_TRUE(f.betas[0].generator);
    EXPECT_EQ(f.betas[0].beta.omega, Rational(1, 2));
    ASSERT_EQ(f.ops.size(), 2u);
    EXPECT_TRUE(f.ops[0].inputs.empty());
    EXPECT_EQ(f.ops[1].line, 7);
}

TEST(CountFile, ErrorsCarryLineNumbers)
{
    EXPECT_EQ(error_line("generator u degree=0\n"), 1);
    EXPECT_EQ(error_line(header() + "generator u degree=1\n"), 3);
    EXPECT_EQ(error_line(header() + "beta g omega=1 maslov=3\n"), 3);
    EXPECT_EQ(error_line(header() + "beta g omega=0 maslov=2\n"), 3);
    EXPECT_EQ(error_line(header() + "beta g omega=-1 maslov=2\n"), 3);
    EXPECT_EQ(error_line(header() + "beta 0 omega=1 maslov=2\n"), 3);
    EXPECT_EQ(error_line(header() + "op k=1 beta=g in=u out=u coeff=1\n"), 3);
    EXPECT_EQ(error_line(header() + "op k=1 beta=0 in=v out=u coeff=1\n"), 3);
    EXPECT_EQ(error_line(header() + "op k=2 beta=0 in=u out=u coeff=1\n"), 3);
    EXPECT_EQ(error_line(header() + "op k=0 beta=0 in=- out=u coeff=1\n"), 3);
    EXPECT_EQ(error_line(header() + "op k=1 beta=0 in=u out=u coeff=x\n"), 3);
    EXPECT_EQ(error_line(header() + "frobnicate\n"), 3);
    EXPECT_EQ(error_line(header() + "\nop k=1 beta=0 in=u out=u coeff=1\nop k=1 beta=0 in=u out=u coeff=2\n"), 5);
    EXPECT_EQ(error_line(header() + "op k=1 beta=0 in=u out=u coeff=1 # fine\n"), -1);
}

TEST(CountFile, DuplicateOpCitesFirstLine)
{
    try {
        parse_count_file(header() + "op k=1 beta=0 in=u out=u coeff=1\nop k=1 beta=0 in=u out=u coeff=2\n");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
    }
}

TEST(CountFile, TableAndCanonicalEmit)
{
    auto t = parse_table(curved);
    EXPECT_EQ(t.monoid().generators().size(), 1u);
    EXPECT_TRUE(t.monoid().contains({"", 1, 4}));
    EXPECT_EQ(t.lookup(0, {"", Rational(1, 2), 2}, {}).coeff(0), 3);
    const auto once = emit(t);
    EXPECT_EQ(emit(parse_table(once)), once);
    EXPECT_TRUE(same_table(parse_table(once), t));
    EXPECT_EQ(emit(parse_table(circle)), "format ainfty-counts 1\n"
                                         "generator max degree=0\n"
                                         "generator min degree=1\n"
                                         "op k=2 beta=0 in=max,max out=max coeff=1\n"
                                         "op k=2 beta=0 in=max,min out=min coeff=1\n"
                                         "op k=2 beta=0 in=min,max out=min coeff=-1\n");
}

TEST(CountFile, MergeRemapsByName)
{
    auto morse = parse_table(circle);
    auto ext = parse_table(R"(format ainfty-counts 1
generator min degree=1
generator max degree=0
beta g omega=1 maslov=2 generator
op k=0 beta=g in=- out=max coeff=1
)");
    auto m = merge(morse, ext);
    EXPECT_EQ(m.generators()[0].name, "min");
    EXPECT_EQ(m.lookup(2, BetaClass::zero(), {1, 0}).coeff(0), 1);
    EXPECT_EQ(m.lookup(0, {"", 1, 2}, {}).coeff(1), 1);

    auto other = parse_table("format ainfty-counts 1\ngenerator max degree=0\ngenerator min degree=2\n");
    EXPECT_THROW(merge(morse, other), MergeError);
    EXPECT_THROW(merge(morse, morse), MergeError);
}

TEST(CountFile, Reports)
{
    auto t = parse_table(circle);
    t.add(2, BetaClass::zero(), {1, 1}, 0, 1);  // degree 2 -> 0, violates
    auto r = verify(t, 3, {true, false});
    auto text = format_report(t, r, 3, ReportFormat::Text);
    EXPECT_NE(text.find("result: FAILED"), std::string::npos);
    auto machine = format_report(t, r, 3, ReportFormat::Machine);
    EXPECT_EQ(machine.rfind("format ainfty-counts 1\n", 0), 0u);
    EXPECT_NE(machine.find("degree-violation"), std::string::npos);
    EXPECT_EQ(format_inputs(t, {}), "-");
    EXPECT_EQ(format_inputs(t, {0, 1}), "max,min");
}
