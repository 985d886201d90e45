#pragma once

// Line-oriented count files:
//
//   format ainfty-counts 1
//   generator <name> degree=<int>
//   beta <id> omega=<p/q> maslov=<int> [generator]
//   op k=<int> beta=<id> in=<name,...|-> out=<name> coeff=<int>
//
// `#` starts a comment. The id `0` is reserved for the zero class and is never
// declared. Several op lines may share (k, beta, inputs) as long as their outputs
// differ; together they give the combination m_{k,beta}(inputs).

#include "ainfty/operation_table.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace ainfty {

struct BetaDecl {
    BetaClass beta;
    bool generator = false;
    int line = 0;
};

struct OpLine {
    int k = 0;
    std::string beta;
    std::vector<std::string> inputs;
    std::string out;
    std::int64_t coeff = 0;
    int line = 0;
};

struct CountFile {
    std::vector<Generator> generators;
    std::vector<BetaDecl> betas;
    std::vector<OpLine> ops;
};

/// Throws ParseError carrying the offending line number.
CountFile parse_count_file(std::string_view text);

/// Builds the table; the monoid is generated by the betas flagged `generator`, closed up to
/// max(window, largest declared omega).
OperationTable to_table(const CountFile& file, const Rational& window = 0);

/// Parse and build in one step.
OperationTable parse_table(std::string_view text, const Rational& window = 0);

/// Canonical text: generators in table order, betas sorted by (omega, maslov), ops sorted by
/// (k, beta, inputs, output). Zero coefficients are never written.
std::string emit(const OperationTable& table);

/// Same generators, same monoid generators and same entries (the closure window is ignored).
bool same_table(const OperationTable& a, const OperationTable& b);

/// Union of a computed beta = 0 table and externally supplied counts. Throws MergeError when the
/// generator sets differ (names and degrees, order-insensitive) or `external` has a beta = 0 entry.
/// The result uses the generator order and monoid of `external`.
OperationTable merge(const OperationTable& morse, const OperationTable& external);

enum class ReportFormat { Text, Machine };

/// Human-readable or machine-readable verification report. The machine form is a count file
/// header followed by `defect` lines in the op grammar and `degree-violation` lines.
std::string format_report(const OperationTable& table, const VerifyReport& report, std::int64_t bound,
                          ReportFormat format);

/// `in=` field for a tuple of generator indices.
std::string format_inputs(const OperationTable& table, const Inputs& inputs);

}  // namespace ainfty
