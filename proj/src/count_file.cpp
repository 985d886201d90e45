#include "ainfty/count_file.hpp"

#include "ainfty/errors.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <set>
#include <sstream>

namespace ainfty {

namespace {

std::vector<std::string> split_ws(std::string_view line)
{
    std::vector<std::string> out;
    std::istringstream is{std::string(line)};
    std::string tok;
    while (is >> tok)
        out.push_back(tok);
    return out;
}

std::vector<std::string> split(std::string_view s, char sep)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        auto pos = s.find(sep, start);
        out.emplace_back(s.substr(start, pos - start));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return out;
}

std::int64_t parse_int(std::string_view text, int line, std::string_view what)
{
    std::int64_t v = 0;
    const char* first = text.data();
    const char* last = first + text.size();
    if (!text.empty() && text[0] == '+')
        ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || first == last)
        throw ParseError("bad integer for " + std::string(what) + ": '" + std::string(text) + "'", line);
    return v;
}

// Splits `key=value` fields; each expected key must appear exactly once.
std::map<std::string, std::string> fields(const std::vector<std::string>& toks, std::size_t first, int line,
                                          const std::vector<std::string>& keys)
{
    std::map<std::string, std::string> out;
    for (std::size_t i = first; i < toks.size(); ++i) {
        auto eq = toks[i].find('=');
        if (eq == std::string::npos)
            throw ParseError("expected key=value, got '" + toks[i] + "'", line);
        auto key = toks[i].substr(0, eq);
        if (std::find(keys.begin(), keys.end(), key) == keys.end())
            throw ParseError("unknown field '" + key + "'", line);
        if (!out.emplace(key, toks[i].substr(eq + 1)).second)
            throw ParseError("repeated field '" + key + "'", line);
    }
    for (const auto& k : keys)
        if (!out.count(k))
            throw ParseError("missing field '" + k + "'", line);
    return out;
}

bool valid_name(const std::string& s)
{
    if (s.empty() || s == "-")
        return false;
    return std::none_of(s.begin(), s.end(), [](char c) { return c == ',' || c == '=' || c == '#'; });
}

}  // namespace

CountFile parse_count_file(std::string_view text)
{
    CountFile file;
    bool header = false;
    std::map<std::string, int> gen_line;
    std::map<std::string, BetaClass> betas;
    std::map<std::string, int> beta_line;
    betas["0"] = BetaClass::zero();
    // (k, beta value, inputs, out) -> line
    std::map<std::tuple<int, Rational, std::int64_t, std::vector<std::string>, std::string>, int> seen;

    int line_no = 0;
    for (const auto& raw : split(text, '\n')) {
        ++line_no;
        std::string_view line = raw;
        if (auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        const auto toks = split_ws(line);
        if (toks.empty())
            continue;
        if (!header) {
            if (toks.size() != 3 || toks[0] != "format" || toks[1] != "ainfty-counts")
                throw ParseError("expected 'format ainfty-counts 1'", line_no);
            if (toks[2] != "1")
                throw ParseError("unsupported format version " + toks[2], line_no);
            header = true;
            continue;
        }
        const auto& kind = toks[0];
        if (kind == "generator") {
            if (toks.size() < 2)
                throw ParseError("generator needs a name", line_no);
            const auto& name = toks[1];
            if (!valid_name(name))
                throw ParseError("invalid generator name '" + name + "'", line_no);
            auto f = fields(toks, 2, line_no, {"degree"});
            const auto deg = parse_int(f["degree"], line_no, "degree");
            if (deg < 0)
                throw ParseError("generator '" + name + "' has negative degree", line_no);
            if (auto [it, ok] = gen_line.emplace(name, line_no); !ok)
                throw ParseError("duplicate generator '" + name + "' (first declared at line " +
                                     std::to_string(it->second) + ")",
                                 line_no);
            file.generators.push_back({name, static_cast<int>(deg)});
        } else if (kind == "beta") {
            if (toks.size() < 2)
                throw ParseError("beta needs an id", line_no);
            const auto& id = toks[1];
            if (!valid_name(id) || id == "0")
                throw ParseError("invalid beta id '" + id + "'", line_no);
            auto rest = std::vector<std::string>(toks.begin(), toks.end());
            bool is_gen = false;
            if (rest.back() == "generator") {
                is_gen = true;
                rest.pop_back();
            }
            auto f = fields(rest, 2, line_no, {"omega", "maslov"});
            const auto omega = parse_rational(f["omega"], line_no);
            const auto maslov = parse_int(f["maslov"], line_no, "maslov");
            if (omega < 0)
                throw ParseError("beta '" + id + "' has negative omega", line_no);
            if (maslov % 2 != 0)
                throw ParseError("beta '" + id + "' has odd maslov index", line_no);
            if (omega == 0)
                throw ParseError("beta '" + id + "' has zero energy (only the reserved class 0 may)", line_no);
            if (auto [it, ok] = beta_line.emplace(id, line_no); !ok)
                throw ParseError("duplicate beta '" + id + "' (first declared at line " +
                                     std::to_string(it->second) + ")",
                                 line_no);
            BetaClass b{id, omega, maslov};
            betas[id] = b;
            file.betas.push_back({b, is_gen, line_no});
        } else if (kind == "op") {
            auto f = fields(toks, 1, line_no, {"k", "beta", "in", "out", "coeff"});
            OpLine op;
            op.line = line_no;
            op.k = static_cast<int>(parse_int(f["k"], line_no, "k"));
            op.beta = f["beta"];
            op.out = f["out"];
            op.coeff = parse_int(f["coeff"], line_no, "coeff");
            if (f["in"] != "-")
                op.inputs = split(f["in"], ',');
            if (op.k < 0 || static_cast<std::size_t>(op.k) != op.inputs.size())
                throw ParseError("k=" + std::to_string(op.k) + " does not match " +
                                     std::to_string(op.inputs.size()) + " inputs",
                                 line_no);
            auto bit = betas.find(op.beta);
            if (bit == betas.end())
                throw ParseError("undeclared beta '" + op.beta + "'", line_no);
            for (const auto& name : op.inputs)
                if (!gen_line.count(name))
                    throw ParseError("undeclared generator '" + name + "'", line_no);
            if (!gen_line.count(op.out))
                throw ParseError("undeclared generator '" + op.out + "'", line_no);
            if (op.k == 0 && bit->second.is_zero() && op.coeff != 0)
                throw ParseError("m_{0,0} must vanish", line_no);
            auto key = std::make_tuple(op.k, bit->second.omega, bit->second.maslov, op.inputs, op.out);
            if (auto [it, ok] = seen.emplace(key, line_no); !ok)
                throw ParseError("duplicate op key (also at line " + std::to_string(it->second) + ")", line_no);
            file.ops.push_back(std::move(op));
        } else if (kind == "format") {
            throw ParseError("repeated format header", line_no);
        } else {
            throw ParseError("unknown directive '" + kind + "'", line_no);
        }
    }
    if (!header)
        throw ParseError("missing 'format ainfty-counts 1' header", 0);
    return file;
}

OperationTable to_table(const CountFile& file, const Rational& window)
{
    Rational top = window;
    std::vector<BetaClass> gens;
    std::map<std::string, BetaClass> by_id{{"0", BetaClass::zero()}};
    for (const auto& d : file.betas) {
        top = std::max(top, d.beta.omega);
        if (d.generator)
            gens.push_back(d.beta);
        by_id[d.beta.id] = d.beta;
    }
    OperationTable table(file.generators, MonoidTable(gens, EnergyCutoff(top)));
    for (const auto& op : file.ops) {
        BetaClass beta = by_id.at(op.beta);
        if (auto idx = table.monoid().find(beta))
            beta = table.monoid().closure()[*idx];
        Inputs in;
        for (const auto& name : op.inputs)
            in.push_back(*table.find_generator(name));
        table.add(op.k, beta, in, *table.find_generator(op.out), op.coeff);
    }
    return table;
}

OperationTable parse_table(std::string_view text, const Rational& window)
{
    return to_table(parse_count_file(text), window);
}

std::string format_inputs(const OperationTable& table, const Inputs& inputs)
{
    if (inputs.empty())
        return "-";
    std::string s;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        if (i)
            s += ',';
        s += table.generators()[inputs[i]].name;
    }
    return s;
}

namespace {

// One id per class value: the closure id when available, else the first id seen.
std::map<std::pair<Rational, std::int64_t>, std::string> beta_names(const OperationTable& table)
{
    std::map<std::pair<Rational, std::int64_t>, std::string> names;
    for (const auto& g : table.monoid().generators())
        names.emplace(std::make_pair(g.omega, g.maslov), g.id);
    for (const auto& [key, value] : table.entries()) {
        if (key.beta.is_zero())
            continue;
        auto idx = table.monoid().find(key.beta);
        names.emplace(std::make_pair(key.beta.omega, key.beta.maslov),
                      idx ? table.monoid().closure()[*idx].id : key.beta.id);
    }
    return names;
}

std::string beta_name(const std::map<std::pair<Rational, std::int64_t>, std::string>& names, const BetaClass& b)
{
    if (b.is_zero())
        return "0";
    return names.at({b.omega, b.maslov});
}

}  // namespace

std::string emit(const OperationTable& table)
{
    std::ostringstream os;
    os << "format ainfty-counts 1\n";
    for (const auto& g : table.generators())
        os << "generator " << g.name << " degree=" << g.degree << '\n';
    const auto names = beta_names(table);
    for (const auto& [value, id] : names) {
        const bool gen = std::any_of(table.monoid().generators().begin(), table.monoid().generators().end(),
                                     [&](const BetaClass& g) { return g.omega == value.first && g.maslov == value.second; });
        os << "beta " << id << " omega=" << format_rational(value.first) << " maslov=" << value.second
           << (gen ? " generator" : "") << '\n';
    }
    for (const auto& [key, value] : table.entries())
        for (const auto& [out, c] : value.terms())
            os << "op k=" << key.k << " beta=" << beta_name(names, key.beta)
               << " in=" << format_inputs(table, key.inputs) << " out=" << table.generators()[out].name
               << " coeff=" << c << '\n';
    return os.str();
}

bool same_table(const OperationTable& a, const OperationTable& b)
{
    if (a.generators() != b.generators())
        return false;
    const auto& ga = a.monoid().generators();
    const auto& gb = b.monoid().generators();
    if (ga.size() != gb.size())
        return false;
    for (std::size_t i = 0; i < ga.size(); ++i)
        if (!ga[i].same_class(gb[i]))
            return false;
    if (a.entries().size() != b.entries().size())
        return false;
    auto it = b.entries().begin();
    for (const auto& [key, value] : a.entries()) {
        const auto& [kb, vb] = *it++;
        if (key.k != kb.k || !key.beta.same_class(kb.beta) || key.inputs != kb.inputs || !(value == vb))
            return false;
    }
    return true;
}

OperationTable merge(const OperationTable& morse, const OperationTable& external)
{
    const auto& gm = morse.generators();
    const auto& ge = external.generators();
    auto sorted = [](std::vector<Generator> g) {
        std::sort(g.begin(), g.end(), [](const Generator& x, const Generator& y) { return x.name < y.name; });
        return g;
    };
    if (sorted(gm) != sorted(ge))
        throw MergeError("generator sets differ");
    for (const auto& g : morse.monoid().generators())
        if (!external.monoid().contains(g))
            throw MergeError("monoid generator '" + g.id + "' of the Morse table is unknown to the external table");

    OperationTable out(ge, external.monoid());
    std::vector<GeneratorIndex> remap(gm.size());
    for (std::size_t i = 0; i < gm.size(); ++i)
        remap[i] = *out.find_generator(gm[i].name);
    for (const auto& [key, value] : external.entries()) {
        if (key.beta.is_zero())
            throw MergeError("external entry k=" + std::to_string(key.k) + " in=" + format_inputs(external, key.inputs) +
                             " has beta = 0, which is owned by the Morse computation");
        out.set(key.k, key.beta, key.inputs, value);
    }
    for (const auto& [key, value] : morse.entries()) {
        Inputs in;
        for (auto g : key.inputs)
            in.push_back(remap[g]);
        Combination c;
        for (const auto& [g, coeff] : value.terms())
            c.add(remap[g], coeff);
        if (!out.lookup(key.k, key.beta, in).empty())
            throw MergeError("collision at k=" + std::to_string(key.k) + " in=" + format_inputs(out, in));
        out.set(key.k, key.beta, in, std::move(c));
    }
    return out;
}

std::string format_report(const OperationTable& table, const VerifyReport& report, std::int64_t bound,
                          ReportFormat format)
{
    const auto names = beta_names(table);
    auto name_of = [&](const BetaClass& b) {
        if (b.is_zero())
            return std::string("0");
        auto it = names.find({b.omega, b.maslov});
        if (it != names.end())
            return it->second;
        auto idx = table.monoid().find(b);
        return idx ? table.monoid().closure()[*idx].id : b.id;
    };
    std::ostringstream os;
    if (format == ReportFormat::Machine) {
        os << "format ainfty-counts 1\n";
        os << "# bound=" << bound << " keys=" << report.checked.size() << " tuples=" << report.tuples_checked
           << " defects=" << report.defects.size() << " degree-violations=" << report.degree_violations.size()
           << '\n';
        for (const auto& d : report.defects)
            for (const auto& [in, value] : d.values)
                for (const auto& [out, c] : value.terms())
                    os << "defect k=" << d.k << " beta=" << name_of(d.beta) << " in=" << format_inputs(table, in)
                       << " out=" << table.generators()[out].name << " coeff=" << c << '\n';
        for (const auto& [key, out] : report.degree_violations)
            os << "degree-violation k=" << key.k << " beta=" << name_of(key.beta)
               << " in=" << format_inputs(table, key.inputs) << " out=" << table.generators()[out].name << '\n';
        return os.str();
    }
    os << "verify: bound " << bound << ", " << report.checked.size() << " relation keys, " << report.tuples_checked
       << " input tuples\n";
    std::size_t next = 0;
    for (const auto& key : report.checked) {
        const Defect* d = nullptr;
        if (next < report.defects.size() && report.defects[next].k == key.k &&
            report.defects[next].beta.same_class(key.beta))
            d = &report.defects[next++];
        os << "  (k=" << key.k << ", beta=" << name_of(key.beta) << ", norm+k=" << table.monoid().norm(key.beta) + key.k
           << ") " << (d ? "FAIL" : "ok") << '\n';
        if (!d)
            continue;
        for (const auto& [in, value] : d->values) {
            os << "      " << format_inputs(table, in) << " -> ";
            bool first = true;
            for (const auto& [out, c] : value.terms()) {
                os << (first ? "" : " + ") << c << '*' << table.generators()[out].name;
                first = false;
            }
            os << '\n';
        }
    }
    for (const auto& [key, out] : report.degree_violations)
        os << "  degree violation: m_{" << key.k << "," << name_of(key.beta) << "}(" << format_inputs(table, key.inputs)
           << ") has component " << table.generators()[out].name << '\n';
    os << (report.ok() ? "result: ok" : "result: FAILED") << " (" << report.defects.size() << " defective keys, "
       << report.degree_violations.size() << " degree violations)\n";
    return os.str();
}

}  // namespace ainfty
