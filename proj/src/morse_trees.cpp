#include "ainfty/morse_trees.hpp"

#include "ainfty/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <numbers>

namespace ainfty {

using std::numbers::pi;

double EdgePerturbation::bump(double s, double a, double b)
{
    if (s <= a || s >= b)
        return 0.0;
    const double x = std::sin(pi * (s - a) / (b - a));
    return x * x;
}

double EdgePerturbation::breaking_weight(double length)
{
    const double t = std::clamp((length - 2.0) / 2.0, 0.0, 1.0);
    return t * t * (3 - 2 * t);
}

Point EdgePerturbation::direction(int dim, int slot)
{
    const double phi = 0.7 + 2.39996 * slot;
    if (dim == 1)
        return {std::cos(phi)};
    Point d(static_cast<std::size_t>(dim), 0.0);
    d[0] = std::cos(phi);
    d[1] = std::sin(phi);
    return d;
}

namespace {

// Nearest ancestor edge of v (excluding v itself) that lies in `broken`; 0 for the root piece.
int piece_top(const RibbonTree& t, int v, const std::vector<char>& broken)
{
    for (int u = t.parent(v); u > 0; u = t.parent(u))
        if (broken[static_cast<std::size_t>(u)])
            return u;
    return 0;
}

// Rank of `v` among the units (leaves and broken edges) of its piece, in boundary order.
// Pre-order ids list the units of a piece in boundary order; units hidden below another
// broken edge belong to a different piece.
int piece_rank(const RibbonTree& t, int v, const std::vector<char>& broken)
{
    const int top = piece_top(t, v, broken);
    int rank = 1;
    for (int u = top + 1; u < v; ++u) {
        const bool unit = t.is_leaf(u) || broken[static_cast<std::size_t>(u)];
        if (unit && piece_top(t, u, broken) == top)
            ++rank;
    }
    return rank;
}

}  // namespace

Point EdgePerturbation::leaf_vector(int dim, const RibbonTree& tree, int vertex,
                                    const std::map<int, double>& lengths) const
{
    Point out(static_cast<std::size_t>(dim), 0.0);
    if (amplitude_ == 0.0)
        return out;
    const auto internal = tree.internal_edges();
    const bool is_edge = !tree.is_leaf(vertex);
    std::vector<char> broken(static_cast<std::size_t>(tree.num_vertices()), 0);
    for (std::size_t mask = 0; mask < (std::size_t{1} << internal.size()); ++mask) {
        double w = 1.0;
        for (std::size_t i = 0; i < internal.size(); ++i) {
            const bool b = (mask >> i) & 1;
            const double chi = breaking_weight(lengths.at(internal[i]));
            w *= b ? chi : 1.0 - chi;
            broken[static_cast<std::size_t>(internal[i])] = b;
        }
        if (w == 0.0 || (is_edge && !broken[static_cast<std::size_t>(vertex)]))
            continue;
        const Point d = direction(dim, piece_rank(tree, vertex, broken));
        for (int j = 0; j < dim; ++j)
            out[static_cast<std::size_t>(j)] += amplitude_ * w * d[static_cast<std::size_t>(j)];
    }
    return out;
}

Point EdgePerturbation::middle_vector(int dim, int edge, double length) const
{
    Point d = direction(dim, 100 + edge);
    const double w = amplitude_ * (1.0 - breaking_weight(length));
    for (double& x : d)
        x *= w;
    return d;
}

int expected_dim(const MorseModel& model, const std::vector<CriticalPoint>& endpoints, const RibbonTree* tree)
{
    const int k = static_cast<int>(endpoints.size()) - 1;
    if (k < 1)
        throw Error("expected_dim: need an output and at least one input");
    if (k == 1)
        return endpoints[1].index - endpoints[0].index - 1;
    if (!tree || tree->num_leaves() != k)
        throw Error("expected_dim: tree with " + std::to_string(k) + " leaves required");
    int sum = 0;
    for (int i = 1; i <= k; ++i)
        sum += endpoints[i].index;
    return sum - endpoints[0].index - (k - 1) * model.dim() + k - 2 + (stratum_params(*tree) - (k - 2));
}

int expected_dim(const TreeProblem& problem)
{
    return expected_dim(*problem.model, problem.endpoints, &problem.tree);
}

int sign_twist(const MorseModel& model, const std::vector<CriticalPoint>& endpoints)
{
    const int k = static_cast<int>(endpoints.size()) - 1;
    int parity = 0;
    for (int i = 1; i <= k; ++i)
        parity += (k - i) * model.degree(endpoints[i]);
    return parity % 2 ? -1 : 1;
}

int cell_orientation(const RibbonTree& tree)
{
    if (!tree.is_trivalent())
        throw Error("cell_orientation: trivalent tree required");
    const int leaves = tree.num_leaves();
    static std::mutex lock;
    static std::map<int, std::map<std::string, int>> cache;
    std::lock_guard guard(lock);
    auto& signs = cache[leaves];
    if (signs.empty()) {
        // walls: codimension one faces, each reached from exactly two (tree, edge) pairs
        struct Side {
            std::string tree;
            int position;
            std::vector<int> rest;  // surviving edges in pre-order, as edges of the wall tree
        };
        std::map<std::string, std::vector<Side>> walls;
        std::vector<std::string> top;
        for (const auto& t : enumerate_trees(leaves + 1)) {
            if (!t.is_trivalent())
                continue;
            top.push_back(t.canonical());
            const auto edges = t.internal_edges();
            for (std::size_t i = 0; i < edges.size(); ++i) {
                const auto c = contract_edges(t, {edges[i]});
                Side side{t.canonical(), static_cast<int>(i), {}};
                for (int f : edges)
                    if (f != edges[i])
                        side.rest.push_back(c.edge_map.at(f));
                walls[c.tree.canonical()].push_back(std::move(side));
            }
        }
        // crossing a wall the shrinking length turns into minus the growing one
        std::map<std::string, std::vector<std::pair<std::string, int>>> flips;
        for (const auto& [wall, sides] : walls) {
            if (sides.size() != 2)
                throw Error("cell_orientation: wall " + wall + " is not shared by two cells");
            std::vector<int> perm;
            for (int e : sides[1].rest)
                perm.push_back(static_cast<int>(std::find(sides[0].rest.begin(), sides[0].rest.end(), e) -
                                                sides[0].rest.begin()));
            int parity = sides[0].position + sides[1].position + 1;
            for (std::size_t i = 0; i < perm.size(); ++i)
                for (std::size_t j = i + 1; j < perm.size(); ++j)
                    parity += perm[i] > perm[j];
            const int rel = parity % 2 ? -1 : 1;
            flips[sides[0].tree].emplace_back(sides[1].tree, rel);
            flips[sides[1].tree].emplace_back(sides[0].tree, rel);
        }
        // the first cell in canonical order is positive
        signs[top.front()] = 1;
        std::vector<std::string> queue{top.front()};
        while (!queue.empty()) {
            const auto t = queue.back();
            queue.pop_back();
            for (const auto& [u, rel] : flips[t]) {
                const int want = signs[t] * rel;
                auto [it, fresh] = signs.try_emplace(u, want);
                if (fresh)
                    queue.push_back(u);
                else if (it->second != want)
                    throw Error("cell_orientation: inconsistent orientation at " + u);
            }
        }
    }
    return signs.at(tree.canonical());
}

namespace {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Residual evaluator: returns false when z leaves the admissible domain.
using Residual = std::function<bool(const std::vector<double>& z, const FlowOptions& fo, Vec& F, double& margin)>;

double max_abs(const Vec& v)
{
    return v.size() ? v.cwiseAbs().maxCoeff() : 0.0;
}

FlowOptions fixed(double step)
{
    FlowOptions fo;
    fo.step = step;
    fo.adaptive = false;
    return fo;
}

bool jacobian(const Residual& res, const std::vector<double>& z, const FlowOptions& fo, double h, Mat& J)
{
    Vec Fp, Fm;
    double margin;
    std::vector<double> zz = z;
    for (std::size_t c = 0; c < z.size(); ++c) {
        zz[c] = z[c] + h;
        if (!res(zz, fo, Fp, margin))
            return false;
        zz[c] = z[c] - h;
        if (!res(zz, fo, Fm, margin))
            return false;
        zz[c] = z[c];
        if (c == 0)
            J.resize(Fp.size(), static_cast<Eigen::Index>(z.size()));
        J.col(static_cast<Eigen::Index>(c)) = (Fp - Fm) / (2 * h);
    }
    return true;
}

struct NewtonResult {
    std::vector<double> z;
    Mat J;
    double residual = 0;
    double margin = 0;
};

std::optional<NewtonResult> newton(const Residual& res, std::vector<double> z, const ShootOptions& opt)
{
    const FlowOptions search = fixed(opt.search_step);
    Vec F;
    double margin;
    if (!res(z, search, F, margin) || F.size() != static_cast<Eigen::Index>(z.size()))
        return std::nullopt;
    double norm = max_abs(F);
    Mat J;
    bool converged = false;
    for (int it = 0; it < opt.max_iterations; ++it) {
        if (norm < 1e-10) {
            converged = true;
            break;
        }
        if (!jacobian(res, z, search, opt.fd_step, J))
            return std::nullopt;
        Eigen::FullPivLU<Mat> lu(J);
        if (!lu.isInvertible())
            return std::nullopt;
        const Vec dz = lu.solve(-F);
        double t = 1.0;
        bool accepted = false;
        for (int ls = 0; ls < 12; ++ls, t *= 0.5) {
            std::vector<double> trial = z;
            for (std::size_t c = 0; c < z.size(); ++c)
                trial[c] += t * dz[static_cast<Eigen::Index>(c)];
            Vec Ft;
            if (!res(trial, search, Ft, margin))
                continue;
            const double nt = max_abs(Ft);
            if (nt < (1 - 1e-4 * t) * norm) {
                z = std::move(trial);
                F = std::move(Ft);
                norm = nt;
                accepted = true;
                break;
            }
        }
        if (!accepted)
            return std::nullopt;
    }
    if (!converged)
        return std::nullopt;

    // polish against the error-controlled flow with a fine-step Jacobian
    const FlowOptions fine = fixed(opt.polish_step);
    if (!jacobian(res, z, fine, opt.fd_step, J))
        return std::nullopt;
    Eigen::FullPivLU<Mat> lu(J);
    if (!lu.isInvertible())
        return std::nullopt;
    for (int it = 0; it < 6; ++it) {
        if (!res(z, opt.check_flow, F, margin))
            return std::nullopt;
        if (max_abs(F) < opt.newton_tolerance)
            break;
        const Vec dz = lu.solve(-F);
        for (std::size_t c = 0; c < z.size(); ++c)
            z[c] += dz[static_cast<Eigen::Index>(c)];
    }
    if (!res(z, opt.check_flow, F, margin))
        return std::nullopt;
    return NewtonResult{std::move(z), std::move(J), max_abs(F), margin};
}

using Supports = std::vector<std::pair<double, double>>;

struct TreeShooter {
    const TreeProblem& pb;
    const MorseModel& model;
    int n;
    std::vector<int> internal;       // internal edges, pre-order
    std::map<int, int> leaf_index;   // leaf vertex -> 1-based leaf number
    std::map<int, int> length_slot;  // internal edge -> position in z

    explicit TreeShooter(const TreeProblem& p)
        : pb(p), model(*p.model), n(p.model->dim()), internal(p.tree.internal_edges())
    {
        int i = 0;
        for (int v : pb.tree.leaves())
            leaf_index[v] = ++i;
        for (std::size_t s = 0; s < internal.size(); ++s)
            length_slot[internal[s]] = n + static_cast<int>(s);
    }

    std::size_t unknowns() const { return static_cast<std::size_t>(n) + internal.size(); }

    // positions of every internal vertex and the back-transported leaf points
    struct State {
        std::map<int, Point> vertex;
        std::map<int, Point> leaf_point;  // leaf vertex -> point at s = -1.5
    };

    std::map<int, double> lengths_of(const std::vector<double>& z) const
    {
        std::map<int, double> out;
        for (const auto& [e, slot] : length_slot)
            out[e] = std::exp(z[static_cast<std::size_t>(slot)]);
        return out;
    }

    // Drift and its supports on the leaf edge `leaf` (s in (-inf, 0]).
    std::pair<Drift, Supports> leaf_field(int leaf, const std::map<int, double>& lengths) const
    {
        const Point V = pb.perturbation.leaf_vector(n, pb.tree, leaf, lengths);
        Drift d = [V](double s, Point& out) {
            const double w = EdgePerturbation::bump(s, EdgePerturbation::leaf_window_begin,
                                                    EdgePerturbation::leaf_window_end);
            for (std::size_t j = 0; j < V.size(); ++j)
                out[j] = w * V[j];
        };
        return {d, {{EdgePerturbation::leaf_window_begin, EdgePerturbation::leaf_window_end}}};
    }

    // Drift and its supports on the internal edge `e` (s in [0, l], child at 0).
    std::pair<Drift, Supports> internal_field(int e, const std::map<int, double>& lengths) const
    {
        const double l = lengths.at(e);
        const Point Vl = pb.perturbation.leaf_vector(n, pb.tree, e, lengths);
        const Point Vm = pb.perturbation.middle_vector(n, e, l);
        Drift d = [Vl, Vm, l](double s, Point& out) {
            const double wl = EdgePerturbation::bump(s, l - 1.5, l - 0.5);
            const double wm = EdgePerturbation::bump(s, l / 3.0, 2.0 * l / 3.0);
            for (std::size_t j = 0; j < Vl.size(); ++j)
                out[j] = wl * Vl[j] + wm * Vm[j];
        };
        Supports sup{{l / 3.0, 2.0 * l / 3.0}};
        if (EdgePerturbation::breaking_weight(l) > 0)
            sup.push_back({l - 1.5, l - 0.5});
        return {d, sup};
    }

    bool walk(const std::vector<double>& z, const FlowOptions& fo, State& st, const ShootOptions& opt) const
    {
        const auto lengths = lengths_of(z);
        for (const auto& [e, l] : lengths)
            if (l < opt.min_length || l > opt.max_length)
                return false;
        st.vertex[1] = Point(z.begin(), z.begin() + n);
        std::function<void(int)> rec = [&](int v) {
            for (int c : pb.tree.children(v)) {
                if (pb.tree.is_leaf(c)) {
                    const auto [drift, sup] = leaf_field(c, lengths);
                    st.leaf_point[c] =
                        transport(model, st.vertex[v], 0.0, EdgePerturbation::leaf_window_begin, drift, sup, fo);
                    continue;
                }
                const auto [drift, sup] = internal_field(c, lengths);
                st.vertex[c] = transport(model, st.vertex[v], lengths.at(c), 0.0, drift, sup, fo);
                rec(c);
            }
        };
        rec(1);
        return true;
    }

    bool residual(const std::vector<double>& z, const FlowOptions& fo, Vec& F, double& margin,
                  const ShootOptions& opt) const
    {
        State st;
        if (!walk(z, fo, st, opt))
            return false;
        std::vector<double> r = model.stable_residual(pb.endpoints[0], st.vertex[1]);
        margin = model.stable_margin(pb.endpoints[0], st.vertex[1]);
        for (const auto& [leaf, idx] : leaf_index) {
            const auto& q = st.leaf_point.at(leaf);
            const auto part = model.unstable_residual(pb.endpoints[static_cast<std::size_t>(idx)], q);
            r.insert(r.end(), part.begin(), part.end());
            margin = std::min(margin, model.unstable_margin(pb.endpoints[static_cast<std::size_t>(idx)], q));
        }
        F = Eigen::Map<Vec>(r.data(), static_cast<Eigen::Index>(r.size()));
        return true;
    }

    void record(const std::vector<double>& z, const ShootOptions& opt, GradientTreeSolution& sol) const
    {
        State st;
        walk(z, opt.check_flow, st, opt);
        const auto lengths = lengths_of(z);
        const FlowOptions fo = fixed(opt.polish_step);
        sol.trajectories[pb.tree.root_edge()] = flow_samples(model, st.vertex[1], 0.0, 6.0, Drift{}, 30, fo);
        for (int e : internal)
            sol.trajectories[e] =
                flow_samples(model, st.vertex.at(e), 0.0, lengths.at(e), internal_field(e, lengths).first, 30, fo);
        for (const auto& [leaf, idx] : leaf_index)
            sol.trajectories[leaf] =
                flow_samples(model, st.leaf_point.at(leaf), EdgePerturbation::leaf_window_begin,
                             -EdgePerturbation::leaf_window_begin, leaf_field(leaf, lengths).first, 30, fo);
    }
};

int det_sign(const Mat& J)
{
    const double d = J.fullPivLu().determinant();
    return d > 0 ? 1 : (d < 0 ? -1 : 0);
}

double condition(const Mat& J)
{
    Eigen::JacobiSVD<Mat> svd(J);
    const auto& s = svd.singularValues();
    if (s.size() == 0)
        return 1.0;
    const double lo = s[s.size() - 1];
    return lo > 0 ? s[0] / lo : std::numeric_limits<double>::infinity();
}

bool same_solution(const std::vector<double>& a, const std::vector<double>& b, int n, double tol)
{
    for (std::size_t c = 0; c < a.size(); ++c) {
        const double d = static_cast<int>(c) < n ? wrap_angle(a[c] - b[c]) : a[c] - b[c];
        if (std::abs(d) > tol)
            return false;
    }
    return true;
}

// Uniform grid on the manifold plus the critical points themselves: rigid vertices sit within
// O(amplitude) of intersections of invariant manifolds, which on the models are critical points.
std::vector<std::vector<double>> seed_grid(const MorseModel& model, int grid, const std::vector<double>& lengths,
                                           std::size_t extra)
{
    const int n = model.dim();
    std::vector<std::vector<double>> seeds{{}};
    for (int j = 0; j < n; ++j) {
        std::vector<std::vector<double>> next;
        for (const auto& s : seeds)
            for (int g = 0; g < grid; ++g) {
                auto t = s;
                t.push_back(-pi + (g + 0.5) * 2 * pi / grid);
                next.push_back(std::move(t));
            }
        seeds = std::move(next);
    }
    for (const auto& c : model.criticals())
        seeds.push_back(c.coords);
    for (std::size_t e = 0; e < extra; ++e) {
        std::vector<std::vector<double>> next;
        for (const auto& s : seeds)
            for (double l : lengths) {
                auto t = s;
                t.push_back(std::log(l));
                next.push_back(std::move(t));
            }
        seeds = std::move(next);
    }
    return seeds;
}

// Runs `shoot` over every seed, then keeps distinct solutions in seed order.
template <class Shoot>
std::vector<GradientTreeSolution> sweep(const std::vector<std::vector<double>>& seeds, int n, const ShootOptions& opt,
                                        Execution exec, Shoot shoot)
{
    std::vector<std::optional<GradientTreeSolution>> found(seeds.size());
    std::vector<std::vector<double>> keys(seeds.size());
    const auto count = static_cast<std::int64_t>(seeds.size());
    auto one = [&](std::int64_t s) {
        try {
            found[s] = shoot(seeds[s], keys[s]);
        } catch (const StepUnderflowError&) {
            found[s].reset();
        }
    };
    if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 4)
        for (std::int64_t s = 0; s < count; ++s)
            one(s);
    } else {
        for (std::int64_t s = 0; s < count; ++s)
            one(s);
    }
    std::vector<GradientTreeSolution> out;
    std::vector<std::vector<double>> kept;
    for (std::size_t s = 0; s < seeds.size(); ++s) {
        if (!found[s])
            continue;
        bool dup = std::any_of(kept.begin(), kept.end(),
                               [&](const auto& k) { return same_solution(k, keys[s], n, opt.dedupe); });
        if (dup)
            continue;
        if (!found[s]->rigid)
            throw PerturbationInsufficientError("non-rigid solution (condition number " +
                                                std::to_string(found[s]->condition) + ")");
        kept.push_back(keys[s]);
        out.push_back(std::move(*found[s]));
    }
    return out;
}

std::optional<GradientTreeSolution> shoot_tree_impl(const TreeProblem& problem, const std::vector<double>& seed,
                                                    const ShootOptions& opt, std::vector<double>* key)
{
    if (!problem.model)
        throw Error("shoot_tree: no model");
    if (problem.tree.num_leaves() + 1 != static_cast<int>(problem.endpoints.size()))
        throw Error("shoot_tree: endpoint count does not match the tree");
    TreeShooter sh(problem);
    if (seed.size() != sh.unknowns())
        throw Error("shoot_tree: seed has the wrong length");
    const Residual res = [&](const std::vector<double>& z, const FlowOptions& fo, Vec& F, double& margin) {
        return sh.residual(z, fo, F, margin, opt);
    };
    auto nr = newton(res, seed, opt);
    if (!nr || nr->residual > opt.matching_tolerance || nr->margin < opt.margin)
        return std::nullopt;
    GradientTreeSolution sol;
    sol.root_point.assign(nr->z.begin(), nr->z.begin() + sh.n);
    for (double& x : sol.root_point)
        x = wrap_angle(x);
    for (const auto& [e, slot] : sh.length_slot)
        sol.lengths[e] = std::exp(nr->z[static_cast<std::size_t>(slot)]);
    sol.residual = nr->residual;
    sol.condition = condition(nr->J);
    sol.rigid = sol.condition < opt.rigidity_bound;
    sol.sign = det_sign(nr->J) * sign_twist(*problem.model, problem.endpoints) *
               (problem.tree.is_trivalent() ? cell_orientation(problem.tree) : 1);
    sh.record(nr->z, opt, sol);
    if (key)
        *key = nr->z;
    return sol;
}

std::optional<GradientTreeSolution> shoot_line_impl(const MorseModel& model, const CriticalPoint& x1,
                                                    const CriticalPoint& x0, const Point& seed,
                                                    const ShootOptions& opt, std::vector<double>* key)
{
    if (static_cast<int>(seed.size()) != model.dim())
        throw Error("shoot_line: seed has the wrong length");
    const double level = 0.5 * (model.f(x0.coords) + model.f(x1.coords));
    const Residual res = [&](const std::vector<double>& z, const FlowOptions&, Vec& F, double& margin) {
        std::vector<double> r = model.stable_residual(x0, z);
        const auto u = model.unstable_residual(x1, z);
        r.insert(r.end(), u.begin(), u.end());
        r.push_back(model.f(z) - level);
        margin = std::min(model.stable_margin(x0, z), model.unstable_margin(x1, z));
        F = Eigen::Map<Vec>(r.data(), static_cast<Eigen::Index>(r.size()));
        return true;
    };
    auto nr = newton(res, seed, opt);
    if (!nr || nr->residual > opt.matching_tolerance || nr->margin < opt.margin)
        return std::nullopt;
    GradientTreeSolution sol;
    sol.root_point = nr->z;
    for (double& x : sol.root_point)
        x = wrap_angle(x);
    sol.residual = nr->residual;
    sol.condition = condition(nr->J);
    sol.rigid = sol.condition < opt.rigidity_bound;
    sol.sign = det_sign(nr->J);
    const FlowOptions fo = fixed(opt.polish_step);
    sol.trajectories[1] = flow_samples(model, sol.root_point, 0.0, 6.0, Drift{}, 30, fo);
    sol.trajectories[2] = flow_samples(model, sol.root_point, 0.0, -6.0, Drift{}, 30, fo);
    if (key)
        *key = nr->z;
    return sol;
}

}  // namespace

std::optional<GradientTreeSolution> shoot_tree(const TreeProblem& problem, const std::vector<double>& seed,
                                               const ShootOptions& options)
{
    return shoot_tree_impl(problem, seed, options, nullptr);
}

std::optional<GradientTreeSolution> shoot_line(const MorseModel& model, const CriticalPoint& x1,
                                               const CriticalPoint& x0, const Point& seed, const ShootOptions& options)
{
    return shoot_line_impl(model, x1, x0, seed, options, nullptr);
}

std::vector<GradientTreeSolution> solve_all(const TreeProblem& problem, const ShootOptions& options, Execution exec)
{
    const int n = problem.model->dim();
    const auto seeds = seed_grid(*problem.model, options.grid, options.seed_lengths, problem.tree.internal_edges().size());
    return sweep(seeds, n, options, exec, [&](const std::vector<double>& seed, std::vector<double>& key) {
        return shoot_tree_impl(problem, seed, options, &key);
    });
}

std::vector<GradientTreeSolution> solve_line(const MorseModel& model, const CriticalPoint& x1, const CriticalPoint& x0,
                                             const ShootOptions& options, Execution exec)
{
    const auto seeds = seed_grid(model, options.grid, {}, 0);
    return sweep(seeds, model.dim(), options, exec, [&](const std::vector<double>& seed, std::vector<double>& key) {
        return shoot_line_impl(model, x1, x0, seed, options, &key);
    });
}

std::int64_t count_trees(const MorseModel& model, const std::vector<CriticalPoint>& endpoints,
                         const EdgePerturbation& perturbation, const ShootOptions& options, Execution exec)
{
    const int k = static_cast<int>(endpoints.size()) - 1;
    std::int64_t total = 0;
    if (k == 1) {
        if (expected_dim(model, endpoints, nullptr) != 0)
            return 0;
        for (const auto& s : solve_line(model, endpoints[1], endpoints[0], options, exec))
            total += s.sign;
        return total;
    }
    // the moduli space over all of Gr_{k+1} must be rigid; then only the top stratum
    // (trivalent trees) contributes, lower strata having negative expected dimension
    for (const auto& tree : enumerate_trees(k + 1)) {
        if (stratum_params(tree) != k - 2 || expected_dim(model, endpoints, &tree) != 0)
            continue;
        TreeProblem pb{&model, tree, endpoints, perturbation};
        for (const auto& s : solve_all(pb, options, exec))
            total += s.sign;
    }
    return total;
}

std::vector<Generator> morse_generators(const MorseModel& model)
{
    std::vector<Generator> gens;
    for (const auto& c : model.criticals())
        gens.push_back({c.name, model.degree(c)});
    return gens;
}

OperationTable build_morse_table(const MorseModel& model, const MorseTableOptions& options)
{
    if (options.max_k < 1)
        throw Error("build_morse_table: max_k must be at least 1");
    const auto& crit = model.criticals();
    const std::size_t nc = crit.size();
    for (double amp = options.amplitude;; amp *= 2) {
        OperationTable table(morse_generators(model), MonoidTable({}, EnergyCutoff(0)));
        try {
            for (int k = 1; k <= options.max_k; ++k) {
                std::size_t total = 1;
                for (int i = 0; i < k; ++i)
                    total *= nc;
                for (std::size_t idx = 0; idx < total; ++idx) {
                    Inputs in(static_cast<std::size_t>(k));
                    std::size_t rest = idx;
                    for (std::size_t pos = in.size(); pos-- > 0;) {
                        in[pos] = rest % nc;
                        rest /= nc;
                    }
                    for (std::size_t out = 0; out < nc; ++out) {
                        std::vector<CriticalPoint> ends{crit[out]};
                        for (auto g : in)
                            ends.push_back(crit[g]);
                        const auto c = count_trees(model, ends, EdgePerturbation(amp), options.shoot, options.exec);
                        if (c != 0)
                            table.add(k, BetaClass::zero(), in, out, c);
                    }
                }
            }
            return table;
        } catch (const PerturbationInsufficientError&) {
            if (amp * 2 > options.max_amplitude * (1 + 1e-12))
                throw;
        }
    }
}

}  // namespace ainfty
