#include "ainfty/ribbon_tree.hpp"

#include "ainfty/errors.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

namespace ainfty {

struct RibbonTreeBuilder {
    RibbonTree t;

    RibbonTreeBuilder()
    {
        t.parent_.push_back(-1);
        t.children_.emplace_back();
    }

    int add(int parent)
    {
        const int v = static_cast<int>(t.parent_.size());
        t.parent_.push_back(parent);
        t.children_.emplace_back();
        t.children_[parent].push_back(v);
        return v;
    }

    // Copies the subtree of `src` rooted at v below `parent`, skipping vertices in `merged`
    // (their children are spliced into the parent's cyclic order in place).
    void copy(const RibbonTree& src, int v, int parent, const std::set<int>& merged, std::map<int, int>& vmap)
    {
        int here = parent;
        if (!merged.count(v)) {
            here = add(parent);
            vmap[v] = here;
        }
        for (int c : src.children_[v])
            copy(src, c, here, merged, vmap);
    }
};

namespace {

void write(const RibbonTree& t, int v, std::string& out)
{
    if (t.children(v).empty()) {
        out += 'x';
        return;
    }
    out += '(';
    for (int c : t.children(v))
        write(t, c, out);
    out += ')';
}

void parse_node(std::string_view s, std::size_t& pos, RibbonTreeBuilder& b, int parent)
{
    if (pos >= s.size())
        throw ParseError("tree: unexpected end of input", 0);
    if (s[pos] == 'x') {
        ++pos;
        b.add(parent);
        return;
    }
    if (s[pos] != '(')
        throw ParseError(std::string("tree: unexpected character '") + s[pos] + "'", 0);
    ++pos;
    const int v = b.add(parent);
    int count = 0;
    while (pos < s.size() && s[pos] != ')') {
        parse_node(s, pos, b, v);
        ++count;
    }
    if (pos >= s.size())
        throw ParseError("tree: missing ')'", 0);
    ++pos;
    if (count < 2)
        throw ParseError("tree: internal vertex with fewer than two children", 0);
}

// All canonical strings of planar trees with `leaves` leaves hanging below one edge.
const std::vector<std::string>& shapes(int leaves)
{
    static std::vector<std::vector<std::string>> memo;
    if (memo.size() > static_cast<std::size_t>(leaves))
        return memo[leaves];
    while (memo.size() <= static_cast<std::size_t>(leaves)) {
        const int n = static_cast<int>(memo.size());
        std::vector<std::string> out;
        if (n == 1)
            out.push_back("x");
        // ordered sequences of >= 2 subtrees whose leaf counts sum to n
        std::function<void(int, int, std::string)> rec = [&](int remaining, int parts, std::string acc) {
            if (remaining == 0) {
                if (parts >= 2)
                    out.push_back("(" + acc + ")");
                return;
            }
            for (int m = 1; m <= remaining; ++m) {
                if (m == n)
                    continue;
                for (const auto& sub : memo[m])
                    rec(remaining - m, parts + 1, acc + sub);
            }
        };
        if (n >= 2)
            rec(n, 0, "");
        std::sort(out.begin(), out.end());
        memo.push_back(std::move(out));
    }
    return memo[leaves];
}

}  // namespace

RibbonTree RibbonTree::parse(std::string_view text)
{
    RibbonTreeBuilder b;
    std::size_t pos = 0;
    if (text.empty() || text[0] != '(')
        throw ParseError("tree: must start with '('", 0);
    parse_node(text, pos, b, 0);
    if (pos != text.size())
        throw ParseError("tree: trailing characters", 0);
    return b.t;
}

RibbonTree RibbonTree::corolla(int leaves)
{
    if (leaves < 2)
        throw Error("corolla needs at least two leaves");
    return parse("(" + std::string(static_cast<std::size_t>(leaves), 'x') + ")");
}

std::string RibbonTree::canonical() const
{
    std::string out;
    if (parent_.size() > 1)
        write(*this, 1, out);
    return out;
}

std::string RibbonTree::adjacency_listing() const
{
    std::ostringstream os;
    int leaf_no = 0;
    std::function<void(int, int)> rec = [&](int v, int depth) {
        os << std::string(static_cast<std::size_t>(2 * depth), ' ') << 'v' << v;
        if (v == 0)
            os << " root";
        else if (is_leaf(v))
            os << " leaf " << ++leaf_no;
        else
            os << " internal";
        os << " :";
        for (int u : cyclic_order(v))
            os << ' ' << 'v' << u;
        os << '\n';
        for (int c : children_[v])
            rec(c, depth + 1);
    };
    rec(0, 0);
    return os.str();
}

int RibbonTree::num_leaves() const
{
    int n = 0;
    for (int v = 1; v < num_vertices(); ++v)
        n += children_[v].empty();
    return n;
}

int RibbonTree::valency(int v) const
{
    return static_cast<int>(children_[v].size()) + (v == 0 ? 0 : 1);
}

std::vector<int> RibbonTree::cyclic_order(int v) const
{
    std::vector<int> out;
    if (v != 0)
        out.push_back(parent_[v]);
    out.insert(out.end(), children_[v].begin(), children_[v].end());
    return out;
}

std::vector<int> RibbonTree::leaves() const
{
    std::vector<int> out;
    for (int v = 1; v < num_vertices(); ++v)
        if (children_[v].empty())
            out.push_back(v);
    return out;
}

std::vector<int> RibbonTree::internal_vertices() const
{
    std::vector<int> out;
    for (int v = 1; v < num_vertices(); ++v)
        if (!children_[v].empty())
            out.push_back(v);
    return out;
}

bool RibbonTree::is_internal_edge(int e) const
{
    return e > 0 && e < num_vertices() && !is_external(e) && !is_external(parent_[e]);
}

std::vector<int> RibbonTree::internal_edges() const
{
    std::vector<int> out;
    for (int e = 1; e < num_vertices(); ++e)
        if (is_internal_edge(e))
            out.push_back(e);
    return out;
}

std::vector<int> RibbonTree::external_edges() const
{
    std::vector<int> out;
    for (int e = 1; e < num_vertices(); ++e)
        if (!is_internal_edge(e))
            out.push_back(e);
    return out;
}

bool RibbonTree::is_trivalent() const
{
    for (int v : internal_vertices())
        if (valency(v) != 3)
            return false;
    return true;
}

std::vector<RibbonTree> enumerate_trees(int num_external)
{
    std::vector<RibbonTree> out;
    if (num_external < 3)
        return out;
    for (const auto& s : shapes(num_external - 1))
        if (s != "x")
            out.push_back(RibbonTree::parse(s));
    return out;
}

int stratum_params(const RibbonTree& t)
{
    return static_cast<int>(t.internal_edges().size());
}

Contraction contract_edges(const RibbonTree& t, const std::vector<int>& edges)
{
    std::set<int> merged;
    for (int e : edges) {
        if (!t.is_internal_edge(e))
            throw InvalidContractionError("edge " + std::to_string(e) + " is not an internal edge");
        merged.insert(e);
    }
    RibbonTreeBuilder b;
    std::map<int, int> vmap;
    vmap[0] = 0;
    for (int c : t.children(0))
        b.copy(t, c, 0, merged, vmap);
    Contraction out{b.t, {}};
    for (const auto& [old_v, new_v] : vmap)
        if (old_v != 0)
            out.edge_map[old_v] = new_v;
    return out;
}

RibbonTree contract_edge(const RibbonTree& t, int edge)
{
    return contract_edges(t, {edge}).tree;
}

namespace {

void check_lengths(const RibbonTree& t, const std::map<int, Rational>& lengths, bool allow_zero)
{
    const auto internal = t.internal_edges();
    if (lengths.size() != internal.size())
        throw InvalidMetricError("lengths must be given exactly on the internal edges");
    for (int e : internal) {
        auto it = lengths.find(e);
        if (it == lengths.end())
            throw InvalidMetricError("missing length for internal edge " + std::to_string(e));
        if (it->second < 0 || (!allow_zero && it->second == 0))
            throw InvalidMetricError("edge " + std::to_string(e) + " has length " + format_rational(it->second));
    }
}

}  // namespace

MetricRibbonTree make_metric_tree(RibbonTree tree, std::map<int, Rational> lengths)
{
    check_lengths(tree, lengths, false);
    return {std::move(tree), std::move(lengths)};
}

MetricRibbonTree limit_metric(const ExtendedMetric& limit)
{
    check_lengths(limit.tree, limit.lengths, true);
    std::vector<int> zero;
    for (const auto& [e, l] : limit.lengths)
        if (l == 0)
            zero.push_back(e);
    auto c = contract_edges(limit.tree, zero);
    std::map<int, Rational> lengths;
    for (const auto& [e, l] : limit.lengths)
        if (l != 0)
            lengths[c.edge_map.at(e)] = l;
    return make_metric_tree(std::move(c.tree), std::move(lengths));
}

MetricRibbonTree limit_metric(const std::vector<MetricRibbonTree>& seq, const std::map<int, Rational>& limits)
{
    if (seq.empty())
        throw InvalidMetricError("empty sequence");
    for (const auto& m : seq) {
        if (!(m.tree == seq.front().tree))
            throw InvalidMetricError("sequence does not live on a single tree");
        check_lengths(m.tree, m.lengths, false);
    }
    return limit_metric(ExtendedMetric{seq.front().tree, limits});
}

EdgeEnds head_tail(const RibbonTree& t, int edge)
{
    if (edge <= 0 || edge >= t.num_vertices())
        throw Error("no edge " + std::to_string(edge));
    return {edge, t.parent(edge)};
}

DomainDescriptor assemble_domain(const MetricRibbonTree& mt)
{
    const auto& t = mt.tree;
    DomainDescriptor d;
    for (int v : t.internal_vertices()) {
        DomainDescriptor::Disk disk{v, {}};
        const auto order = t.cyclic_order(v);
        for (std::size_t i = 0; i < order.size(); ++i) {
            const int u = order[i];
            const int e = (u == t.parent(v)) ? v : u;  // edge id is the child end
            disk.marks.push_back(e);
            const bool internal = t.is_internal_edge(e);
            // z_i ~ l(e) when v is the head of an internal edge, otherwise z_i ~ 0
            const bool at_length = internal && head_tail(t, e).head == v;
            d.identifications.push_back({v, static_cast<int>(i), e, at_length});
        }
        d.disks.push_back(std::move(disk));
    }
    for (int e = 1; e < t.num_vertices(); ++e) {
        IntervalSymbol s;
        s.edge = e;
        if (t.is_internal_edge(e)) {
            s.kind = IntervalSymbol::Kind::Finite;
            s.length = mt.lengths.at(e);
        } else if (e == t.root_edge()) {
            s.kind = IntervalSymbol::Kind::PositiveRay;
        } else {
            s.kind = IntervalSymbol::Kind::NegativeRay;
        }
        d.intervals.push_back(s);
    }
    return d;
}

std::string DomainDescriptor::to_string() const
{
    std::ostringstream os;
    for (const auto& disk : disks) {
        os << "disk v" << disk.vertex << " marks";
        for (int e : disk.marks)
            os << " e" << e;
        os << '\n';
    }
    for (const auto& s : intervals) {
        os << "interval e" << s.edge << ' ';
        switch (s.kind) {
        case IntervalSymbol::Kind::Finite:
            os << "[0," << format_rational(s.length) << ']';
            break;
        case IntervalSymbol::Kind::NegativeRay:
            os << "(-inf,0]";
            break;
        case IntervalSymbol::Kind::PositiveRay:
            os << "[0,inf)";
            break;
        }
        os << '\n';
    }
    for (const auto& id : identifications)
        os << "glue v" << id.vertex << ".z" << id.mark + 1 << " ~ e" << id.edge << (id.at_length ? ".l" : ".0")
           << '\n';
    return os.str();
}

std::vector<PosetNode> contraction_poset(int num_external)
{
    const auto trees = enumerate_trees(num_external);
    std::vector<PosetNode> out(trees.size());
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(trees.size()); ++i) {
        const auto& t = trees[i];
        PosetNode node{t.canonical(), stratum_params(t), {}};
        std::set<std::string> covers;
        for (int e : t.internal_edges())
            covers.insert(contract_edge(t, e).canonical());
        node.covers.assign(covers.begin(), covers.end());
        out[i] = std::move(node);
    }
    std::sort(out.begin(), out.end(), [](const PosetNode& a, const PosetNode& b) {
        return a.rank != b.rank ? a.rank > b.rank : a.tree < b.tree;
    });
    return out;
}

}  // namespace ainfty
