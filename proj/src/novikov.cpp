#include "ainfty/novikov.hpp"

#include "ainfty/errors.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace ainfty {

Rational parse_rational(std::string_view text, int line)
{
    std::string s(text);
    auto bad = [&] { return ParseError("malformed rational '" + s + "'", line); };
    if (s.empty())
        throw bad();
    auto slash = s.find('/');
    auto is_int = [](std::string_view t, bool allow_sign) {
        if (t.empty())
            return false;
        std::size_t i = 0;
        if (allow_sign && (t[0] == '-' || t[0] == '+'))
            i = 1;
        if (i == t.size())
            return false;
        for (; i < t.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(t[i])))
                return false;
        return true;
    };
    std::string num = s.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    if (!is_int(num, true) || !is_int(den, false))
        throw bad();
    if (num[0] == '+')
        num.erase(0, 1);
    mpz_class d(den);
    if (d == 0)
        throw ParseError("zero denominator in '" + s + "'", line);
    Rational r(mpz_class(num), d);
    r.canonicalize();
    return r;
}

std::string format_rational(const Rational& r)
{
    if (r.get_den() == 1)
        return r.get_num().get_str();
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

std::int64_t ceil_to_int(const Rational& r)
{
    mpz_class q;
    mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    if (!q.fits_slong_p())
        throw Error("ceiling does not fit in 64 bits");
    return q.get_si();
}

std::int64_t checked_add(std::int64_t a, std::int64_t b)
{
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r))
        throw Error("integer coefficient overflow");
    return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b)
{
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r))
        throw Error("integer coefficient overflow");
    return r;
}

EnergyCutoff::EnergyCutoff(Rational bound) : bound_(std::move(bound))
{
    bound_.canonicalize();
    if (bound_ < 0)
        throw Error("energy cutoff must be non-negative");
}

namespace {

bool term_less(const NovikovTerm& a, const NovikovTerm& b)
{
    if (a.energy != b.energy)
        return a.energy < b.energy;
    return a.maslov_half < b.maslov_half;
}

std::optional<Rational> min_cutoff(const std::optional<Rational>& a, const std::optional<Rational>& b)
{
    if (!a)
        return b;
    if (!b)
        return a;
    return std::min(*a, *b);
}

}  // namespace

NovikovElement::NovikovElement(std::vector<NovikovTerm> terms, std::optional<Rational> cutoff)
    : cutoff_(std::move(cutoff))
{
    if (cutoff_)
        cutoff_->canonicalize();
    for (auto& t : terms)
        t.energy.canonicalize();
    if (cutoff_ && *cutoff_ < 0)
        throw Error("energy cutoff must be non-negative");
    for (const auto& t : terms)
        if (t.energy < 0)
            throw Error("Novikov energies must be non-negative");
    std::sort(terms.begin(), terms.end(), term_less);
    for (auto& t : terms) {
        if (cutoff_ && t.energy > *cutoff_)
            continue;
        if (!terms_.empty() && terms_.back().energy == t.energy &&
            terms_.back().maslov_half == t.maslov_half) {
            terms_.back().coeff = checked_add(terms_.back().coeff, t.coeff);
            if (terms_.back().coeff == 0)
                terms_.pop_back();
            continue;
        }
        if (t.coeff != 0)
            terms_.push_back(std::move(t));
    }
}

NovikovElement NovikovElement::monomial(std::int64_t coeff, const Rational& energy,
                                        std::int64_t maslov_half)
{
    return NovikovElement({NovikovTerm{coeff, energy, maslov_half}});
}

std::optional<Rational> NovikovElement::valuation() const
{
    if (terms_.empty())
        return std::nullopt;
    return terms_.front().energy;
}

NovikovDegree NovikovElement::degree() const
{
    if (terms_.empty())
        return {};
    const auto n = terms_.front().maslov_half;
    for (const auto& t : terms_)
        if (t.maslov_half != n)
            return {NovikovDegree::Kind::Mixed, 0};
    return {NovikovDegree::Kind::Homogeneous, 2 * n};
}

NovikovElement NovikovElement::truncate(const EnergyCutoff& cutoff) const
{
    return NovikovElement(terms_, min_cutoff(cutoff_, cutoff.bound()));
}

NovikovElement NovikovElement::operator-() const
{
    return scaled(-1);
}

NovikovElement NovikovElement::scaled(std::int64_t factor) const
{
    auto terms = terms_;
    for (auto& t : terms)
        t.coeff = checked_mul(t.coeff, factor);
    return NovikovElement(std::move(terms), cutoff_);
}

NovikovElement operator+(const NovikovElement& a, const NovikovElement& b)
{
    std::vector<NovikovTerm> terms;
    terms.reserve(a.terms_.size() + b.terms_.size());
    terms.insert(terms.end(), a.terms_.begin(), a.terms_.end());
    terms.insert(terms.end(), b.terms_.begin(), b.terms_.end());
    return NovikovElement(std::move(terms), min_cutoff(a.cutoff_, b.cutoff_));
}

NovikovElement operator-(const NovikovElement& a, const NovikovElement& b)
{
    return a + (-b);
}

NovikovElement operator*(const NovikovElement& a, const NovikovElement& b)
{
    const auto cutoff = min_cutoff(a.cutoff_, b.cutoff_);
    std::vector<NovikovTerm> terms;
    terms.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& x : a.terms_) {
        for (const auto& y : b.terms_) {
            Rational energy = x.energy + y.energy;
            // b is sorted by energy, so later y's only grow
            if (cutoff && energy > *cutoff)
                break;
            terms.push_back({checked_mul(x.coeff, y.coeff), std::move(energy),
                             checked_add(x.maslov_half, y.maslov_half)});
        }
    }
    return NovikovElement(std::move(terms), cutoff);
}

NovikovElement& NovikovElement::operator+=(const NovikovElement& other)
{
    *this = *this + other;
    return *this;
}

bool NovikovElement::operator==(const NovikovElement& other) const
{
    return terms_ == other.terms_ && cutoff_ == other.cutoff_;
}

std::string NovikovElement::to_string() const
{
    std::ostringstream out;
    if (terms_.empty()) {
        out << "0";
    }
    else {
        bool first = true;
        for (const auto& t : terms_) {
            if (!first)
                out << " + ";
            first = false;
            if (t.coeff != 1)
                out << t.coeff << "*";
            out << "T^" << format_rational(t.energy);
            if (t.maslov_half != 0)
                out << "*e^" << t.maslov_half;
        }
    }
    if (cutoff_)
        out << " | cutoff=" << format_rational(*cutoff_);
    return out.str();
}

namespace {

std::string strip_spaces(std::string_view s)
{
    std::string out;
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c)))
            out.push_back(c);
    return out;
}

std::int64_t parse_int64(const std::string& s)
{
    if (s.empty() || s == "-" || s == "+")
        throw ParseError("malformed integer '" + s + "'", 0);
    std::size_t pos = 0;
    std::int64_t v = 0;
    try {
        v = std::stoll(s, &pos);
    }
    catch (const std::exception&) {
        throw ParseError("malformed integer '" + s + "'", 0);
    }
    if (pos != s.size())
        throw ParseError("malformed integer '" + s + "'", 0);
    return v;
}

NovikovTerm parse_term(const std::string& term)
{
    // <int>*T^<p/q>*e^<int> with the coefficient and e-factor optional
    NovikovTerm t{1, 0, 0};
    std::string rest = term;
    auto tpos = rest.find("T^");
    if (tpos == std::string::npos) {
        t.coeff = parse_int64(rest);
        return t;
    }
    if (tpos > 0) {
        if (rest[tpos - 1] != '*')
            throw ParseError("expected '*' before T in '" + term + "'", 0);
        std::string c = rest.substr(0, tpos - 1);
        t.coeff = c == "-" ? -1 : parse_int64(c);
    }
    rest = rest.substr(tpos + 2);
    auto epos = rest.find("*e^");
    std::string energy = rest.substr(0, epos);
    t.energy = parse_rational(energy);
    if (t.energy < 0)
        throw ParseError("negative energy in '" + term + "'", 0);
    if (epos != std::string::npos)
        t.maslov_half = parse_int64(rest.substr(epos + 3));
    return t;
}

}  // namespace

NovikovElement NovikovElement::parse(std::string_view text)
{
    std::string body(text);
    std::optional<Rational> cutoff;
    if (auto bar = body.find('|'); bar != std::string::npos) {
        std::string tail = strip_spaces(body.substr(bar + 1));
        if (tail.rfind("cutoff=", 0) != 0)
            throw ParseError("expected 'cutoff=' after '|'", 0);
        cutoff = parse_rational(tail.substr(7));
        body = body.substr(0, bar);
    }
    std::string s = strip_spaces(body);
    if (s.empty())
        throw ParseError("empty Novikov element", 0);
    std::vector<NovikovTerm> terms;
    if (s != "0") {
        std::size_t start = 0;
        while (start <= s.size()) {
            auto plus = s.find('+', start);
            std::string part = s.substr(start, plus == std::string::npos ? std::string::npos : plus - start);
            if (part.empty())
                throw ParseError("empty term in '" + std::string(text) + "'", 0);
            terms.push_back(parse_term(part));
            if (plus == std::string::npos)
                break;
            start = plus + 1;
        }
    }
    return NovikovElement(std::move(terms), std::move(cutoff));
}

}  // namespace ainfty
