#pragma once

// Rooted planar (ribbon) trees with k leaves and one root, their metric strata,
// the edge-contraction poset and the combinatorial domain D_t.
//
// Canonical text form: an internal vertex is written `(` children `)`, a leaf is
// `x`, children listed counter-clockwise starting after the edge toward the root.
// The root vertex itself is implicit. Grammar:
//
//     tree := '(' node node+ ')'
//     node := 'x' | tree
//
// So the unique tree with three external vertices is `(xx)`.

#include "ainfty/rational.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ainfty {

/// Vertex 0 is the root (external). Every other vertex v has parent(v) and the edge
/// from v to its parent carries id v. Vertices are numbered in pre-order.
class RibbonTree {
public:
    /// Parses the canonical text form; throws ParseError.
    static RibbonTree parse(std::string_view text);
    /// The corolla with `leaves` leaves attached to one internal vertex.
    static RibbonTree corolla(int leaves);

    std::string canonical() const;
    /// Indented listing of vertices with their cyclic neighbour order.
    std::string adjacency_listing() const;

    int num_vertices() const { return static_cast<int>(parent_.size()); }
    int num_leaves() const;
    int num_external() const { return num_leaves() + 1; }
    int parent(int v) const { return parent_[v]; }
    const std::vector<int>& children(int v) const { return children_[v]; }
    bool is_external(int v) const { return v == 0 || children_[v].empty(); }
    bool is_leaf(int v) const { return v != 0 && children_[v].empty(); }
    int valency(int v) const;
    /// Counter-clockwise neighbour order: parent first (if any), then children.
    std::vector<int> cyclic_order(int v) const;

    /// Leaves in boundary order.
    std::vector<int> leaves() const;
    std::vector<int> internal_vertices() const;
    /// Edge ids (= child vertex) whose both ends are internal, in pre-order.
    std::vector<int> internal_edges() const;
    std::vector<int> external_edges() const;
    int root_edge() const { return 1; }
    bool is_internal_edge(int e) const;
    bool is_trivalent() const;

    bool operator==(const RibbonTree& other) const { return canonical() == other.canonical(); }

private:
    friend struct RibbonTreeBuilder;
    std::vector<int> parent_;
    std::vector<std::vector<int>> children_;
};

/// All ribbon trees with `num_external` = k+1 external vertices, sorted by canonical string.
/// Returns an empty list when num_external < 3 (no stable tree).
std::vector<RibbonTree> enumerate_trees(int num_external);

/// Number of metric parameters |C^1_int(T)| of the stratum Gr_{k+1}(t).
int stratum_params(const RibbonTree& t);

struct Contraction {
    RibbonTree tree;
    /// Edge id in the source tree -> edge id in the result, for every surviving edge.
    std::map<int, int> edge_map;
};

/// Shrinks the internal edges in `edges` at once. Throws InvalidContractionError if any is external.
Contraction contract_edges(const RibbonTree& t, const std::vector<int>& edges);
RibbonTree contract_edge(const RibbonTree& t, int edge);

struct MetricRibbonTree {
    RibbonTree tree;
    std::map<int, Rational> lengths;  // internal edge id -> positive length
};

struct ExtendedMetric {
    RibbonTree tree;
    std::map<int, Rational> lengths;  // internal edge id -> non-negative length
};

/// Validates that `lengths` are defined exactly on the internal edges and positive.
MetricRibbonTree make_metric_tree(RibbonTree tree, std::map<int, Rational> lengths);

/// Limit of a sequence of metrics on a fixed tree whose lengths converge to `limits`:
/// zero-limit edges are contracted, the rest keep their limit. Throws InvalidMetricError
/// on negative limits or when the sequence mixes trees.
MetricRibbonTree limit_metric(const std::vector<MetricRibbonTree>& seq, const std::map<int, Rational>& limits);
MetricRibbonTree limit_metric(const ExtendedMetric& limit);

struct EdgeEnds {
    int head = 0;  // the end the edge points away from
    int tail = 0;
};

/// Edges are oriented toward the root: head(e) is the end farther from the root.
EdgeEnds head_tail(const RibbonTree& t, int edge);

struct IntervalSymbol {
    enum class Kind { Finite, NegativeRay, PositiveRay };  // [0,l], (-inf,0], [0,inf)
    int edge = 0;
    Kind kind = Kind::Finite;
    Rational length;  // Finite only
};

struct Identification {
    int vertex = 0;
    int mark = 0;  // index into the cyclic order at vertex (z_{mark+1})
    int edge = 0;
    bool at_length = false;  // true: z ~ l(e), false: z ~ 0
};

struct DomainDescriptor {
    struct Disk {
        int vertex = 0;
        std::vector<int> marks;  // incident edge of each boundary mark, cyclically ordered
    };
    std::vector<Disk> disks;
    std::vector<IntervalSymbol> intervals;
    std::vector<Identification> identifications;

    std::string to_string() const;
};

DomainDescriptor assemble_domain(const MetricRibbonTree& t);

struct PosetNode {
    std::string tree;
    int rank = 0;  // |C^1_int|
    std::vector<std::string> covers;  // trees reached by a single contraction
};

/// Contraction poset of G_{k+1}, sorted by (rank descending, canonical string).
std::vector<PosetNode> contraction_poset(int num_external);

}  // namespace ainfty
