#pragma once

// Rigid perturbed gradient flow trees on the model manifolds and the beta = 0
// operation table they define.
//
// A tree with k >= 2 leaves is solved by shooting from the internal vertex next to the
// root. Unknowns z = (p, log l(e) for internal e in pre-order); internal edges run from
// the child (s = 0) to the parent (s = l), so child positions are obtained by flowing p
// backward. Each leaf edge is perturbed on s in [-1.5, -0.5]; the point reached at
// s = -1.5 must lie in W-(x_i). The root edge is unperturbed and requires p in W+(x_0).
// Residual F(z) = [root residual; leaf residuals in leaf order].

#include "ainfty/morse_model.hpp"
#include "ainfty/operation_table.hpp"
#include "ainfty/ribbon_tree.hpp"

#include <map>
#include <optional>
#include <vector>

namespace ainfty {

/// Domain-dependent perturbation: constant vectors times bumps in the edge parameter.
///
/// A leaf edge carries a vector on s in [-1.5, -0.5]. An internal edge of length l (child at
/// s = 0, parent at s = l) carries one on its middle third with weight 1 - chi(l) and, as a
/// long edge about to break, the leaf-type window [l - 1.5, l - 0.5] with weight chi(l),
/// where chi rises smoothly from 0 at l = 2 to 1 at l = 4.
///
/// Leaf-type vectors are consistent under breaking: for every set B of broken internal edges
/// (weight prod chi * prod (1 - chi)) the tree falls into pieces, and the vector of a leaf
/// (or of a broken edge acting as a leaf of the piece below it) is the golden-angle direction
/// of its rank inside its piece. Contracting an edge (l -> 0) leaves all ranks unchanged.
class EdgePerturbation {
public:
    explicit EdgePerturbation(double amplitude = 1e-3) : amplitude_(amplitude) {}

    double amplitude() const noexcept { return amplitude_; }

    /// sin^2 bump supported on [a, b], zero outside.
    static double bump(double s, double a, double b);
    /// chi(l): 0 for l <= 2, 1 for l >= 4, C^1 in between.
    static double breaking_weight(double length);
    /// Unit direction for rank `slot` (1-based): angle 0.7 + 2.39996 slot.
    static Point direction(int dim, int slot);

    static constexpr double leaf_window_begin = -1.5;
    static constexpr double leaf_window_end = -0.5;

    /// Leaf-type vector (amplitude included) on `vertex`: a leaf, or an internal edge near its
    /// parent end. `lengths` maps every internal edge to its length.
    Point leaf_vector(int dim, const RibbonTree& tree, int vertex, const std::map<int, double>& lengths) const;
    /// Middle-third vector on internal edge `edge` (amplitude and 1 - chi included).
    Point middle_vector(int dim, int edge, double length) const;

private:
    double amplitude_;
};

struct TreeProblem {
    const MorseModel* model = nullptr;
    RibbonTree tree;
    std::vector<CriticalPoint> endpoints;  // x_0 (output), x_1..x_k (inputs)
    EdgePerturbation perturbation;
};

struct ShootOptions {
    double search_step = 0.05;   // fixed RK4 step during Newton
    double polish_step = 0.0125; // fixed RK4 step for the final Newton passes
    FlowOptions check_flow{};    // adaptive flow used for the final matching check
    double newton_tolerance = 1e-12;
    double matching_tolerance = 1e-9;
    int max_iterations = 40;
    double fd_step = 1e-7;
    double rigidity_bound = 1e8;  // max condition number of dF at a solution
    double margin = 1e-6;         // min distance from the boundary of the open manifold conditions
    double dedupe = 1e-6;
    int grid = 4;                 // seeds per manifold coordinate, plus every critical point
    std::vector<double> seed_lengths{0.05, 0.15, 0.4, 1.0, 1.7, 2.4, 3.0, 3.6, 5.0, 9.0};
    double min_length = 1e-4;
    double max_length = 50.0;
};

struct GradientTreeSolution {
    Point root_point;                       // p (k >= 2) or the point q on the line (k = 1)
    std::map<int, double> lengths;          // internal edge -> length
    std::map<int, std::vector<Point>> trajectories;  // edge -> samples along its finite part
    int sign = 0;
    double condition = 0;
    double residual = 0;
    bool rigid = false;
};

/// Expected dimension of the tree moduli space at beta = 0 (Morse indices ind, n = dim):
///   k = 1:   ind(x1) - ind(x0) - 1
///   k >= 2:  sum ind(xi) - ind(x0) - (k-1) n + k - 2 + (|C1_int(t)| - (k - 2))
int expected_dim(const MorseModel& model, const std::vector<CriticalPoint>& endpoints, const RibbonTree* tree);
int expected_dim(const TreeProblem& problem);

/// (-1)^{sum_i (k-i)|x_i|}, |x| = degree.
int sign_twist(const MorseModel& model, const std::vector<CriticalPoint>& endpoints);

/// Newton from a single seed z = (p, log l). Returns the converged solution, or nothing
/// on divergence, on leaving the admissible domain, or when the matching check fails.
/// Non-rigid converged solutions are returned with rigid = false.
std::optional<GradientTreeSolution> shoot_tree(const TreeProblem& problem, const std::vector<double>& seed,
                                               const ShootOptions& options = {});

/// The k = 1 problem: gradient lines from x1 down to x0, cut by the level (f(x0)+f(x1))/2.
std::optional<GradientTreeSolution> shoot_line(const MorseModel& model, const CriticalPoint& x1,
                                               const CriticalPoint& x0, const Point& seed,
                                               const ShootOptions& options = {});

/// Orientation (+1/-1) of the top cell of a trivalent tree, relative to its chart by internal
/// edge lengths in pre-order. Signs are propagated across walls, where the length shrinking to
/// zero continues as minus the length growing on the other side; the first trivalent tree in
/// canonical order is positive.
int cell_orientation(const RibbonTree& tree);

enum class Execution { Serial, Parallel };

/// All distinct rigid solutions over the seed grid for one tree (k >= 2) or the line (k = 1).
/// Throws PerturbationInsufficientError when a converged solution is not rigid.
std::vector<GradientTreeSolution> solve_all(const TreeProblem& problem, const ShootOptions& options = {},
                                            Execution exec = Execution::Parallel);
std::vector<GradientTreeSolution> solve_line(const MorseModel& model, const CriticalPoint& x1,
                                             const CriticalPoint& x0, const ShootOptions& options = {},
                                             Execution exec = Execution::Parallel);

/// Signed count of rigid trees with endpoints (x0; x1..xk), summed over all tree types
/// of expected dimension 0. Zero when no tree type is rigid.
std::int64_t count_trees(const MorseModel& model, const std::vector<CriticalPoint>& endpoints,
                         const EdgePerturbation& perturbation, const ShootOptions& options = {},
                         Execution exec = Execution::Parallel);

struct MorseTableOptions {
    int max_k = 2;
    double amplitude = 1e-3;
    double max_amplitude = 1.6e-2;
    ShootOptions shoot{};
    Execution exec = Execution::Parallel;
};

/// Generators (critical points with degree n - index) and beta = 0 entries m_{k,0}, k <= max_k.
/// The monoid is empty with window 0. Retries with doubled amplitude on rigidity failure.
OperationTable build_morse_table(const MorseModel& model, const MorseTableOptions& options = {});

/// Generator list of a model, in the order of its critical points.
std::vector<Generator> morse_generators(const MorseModel& model);

}  // namespace ainfty
