#include "ainfty/morse_model.hpp"

#include "ainfty/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace ainfty {

using std::numbers::pi;

double wrap_angle(double a)
{
    a = std::remainder(a, 2 * pi);
    return a <= -pi ? a + 2 * pi : a;
}

MorseModel MorseModel::circle()
{
    MorseModel m;
    m.name_ = "circle";
    m.dim_ = 1;
    m.criticals_ = {{"max", {0.0}, 1}, {"min", {pi}, 0}};
    return m;
}

MorseModel MorseModel::torus()
{
    MorseModel m;
    m.name_ = "torus";
    m.dim_ = 2;
    m.criticals_ = {
        {"max", {0.0, 0.0}, 2},
        {"a", {0.0, pi}, 1},
        {"b", {pi, 0.0}, 1},
        {"min", {pi, pi}, 0},
    };
    return m;
}

MorseModel MorseModel::by_name(const std::string& name)
{
    if (name == "circle")
        return circle();
    if (name == "torus")
        return torus();
    throw Error("unknown model '" + name + "' (expected circle or torus)");
}

const CriticalPoint& MorseModel::critical(const std::string& name) const
{
    for (const auto& c : criticals_)
        if (c.name == name)
            return c;
    throw Error("model " + name_ + " has no critical point '" + name + "'");
}

double MorseModel::f(const Point& p) const
{
    double s = 0;
    for (double x : p)
        s += std::cos(x);
    return s;
}

Point MorseModel::grad(const Point& p) const
{
    Point g(p.size());
    for (std::size_t j = 0; j < p.size(); ++j)
        g[j] = -std::sin(p[j]);
    return g;
}

std::vector<double> MorseModel::stable_residual(const CriticalPoint& x, const Point& p) const
{
    std::vector<double> r;
    for (int j = 0; j < dim_; ++j)
        if (x.coords[j] == 0.0)
            r.push_back(wrap_angle(p[j]));
    return r;
}

std::vector<double> MorseModel::unstable_residual(const CriticalPoint& x, const Point& p) const
{
    std::vector<double> r;
    for (int j = 0; j < dim_; ++j)
        if (x.coords[j] != 0.0)
            r.push_back(wrap_angle(p[j] - pi));
    if (!r.empty())
        r[0] *= coorientation(x);
    return r;
}

int MorseModel::coorientation(const CriticalPoint& x) const
{
    // parity of the shuffle (unstable coordinates, then stable coordinates)
    int inversions = 0, stable_seen = 0;
    for (int j = 0; j < dim_; ++j) {
        if (x.coords[j] != 0.0)
            ++stable_seen;
        else
            inversions += stable_seen;
    }
    return inversions % 2 ? -1 : 1;
}

double MorseModel::stable_margin(const CriticalPoint& x, const Point& p) const
{
    double m = std::numeric_limits<double>::infinity();
    for (int j = 0; j < dim_; ++j)
        if (x.coords[j] != 0.0)
            m = std::min(m, std::abs(wrap_angle(p[j])));
    return m;
}

double MorseModel::unstable_margin(const CriticalPoint& x, const Point& p) const
{
    double m = std::numeric_limits<double>::infinity();
    for (int j = 0; j < dim_; ++j)
        if (x.coords[j] == 0.0)
            m = std::min(m, std::abs(wrap_angle(p[j] - pi)));
    return m;
}

namespace {

void field(const Point& u, double s, const Drift& drift, Point& scratch, Point& out)
{
    const std::size_t n = u.size();
    if (drift) {
        scratch.assign(n, 0.0);
        drift(s, scratch);
    }
    for (std::size_t j = 0; j < n; ++j)
        out[j] = std::sin(u[j]) + (drift ? scratch[j] : 0.0);
}

// One RK4 pass with `steps` equal steps; optionally records every `stride`-th state.
Point rk4(const Point& p, double start, double duration, const Drift& drift, long steps,
          std::vector<Point>* record = nullptr, long stride = 1)
{
    const std::size_t n = p.size();
    const double h = duration / static_cast<double>(steps);
    Point u = p, k1(n), k2(n), k3(n), k4(n), tmp(n), scratch;
    if (record)
        record->push_back(u);
    for (long i = 0; i < steps; ++i) {
        const double s = start + h * static_cast<double>(i);
        field(u, s, drift, scratch, k1);
        for (std::size_t j = 0; j < n; ++j)
            tmp[j] = u[j] + 0.5 * h * k1[j];
        field(tmp, s + 0.5 * h, drift, scratch, k2);
        for (std::size_t j = 0; j < n; ++j)
            tmp[j] = u[j] + 0.5 * h * k2[j];
        field(tmp, s + 0.5 * h, drift, scratch, k3);
        for (std::size_t j = 0; j < n; ++j)
            tmp[j] = u[j] + h * k3[j];
        field(tmp, s + h, drift, scratch, k4);
        for (std::size_t j = 0; j < n; ++j)
            u[j] += h / 6.0 * (k1[j] + 2 * k2[j] + 2 * k3[j] + k4[j]);
        if (record && (i + 1) % stride == 0)
            record->push_back(u);
    }
    return u;
}

long initial_steps(double duration, double step)
{
    return std::max(4L, static_cast<long>(std::ceil(std::abs(duration) / step)));
}

}  // namespace

Point flow(const MorseModel& model, const Point& p, double start, double duration, const Drift& drift,
           const FlowOptions& options)
{
    if (static_cast<int>(p.size()) != model.dim())
        throw Error("flow: point has the wrong dimension");
    if (duration == 0.0)
        return p;
    long steps = initial_steps(duration, options.step);
    Point coarse = rk4(p, start, duration, drift, steps);
    if (!options.adaptive)
        return coarse;
    while (true) {
        if (std::abs(duration) / static_cast<double>(2 * steps) < options.min_step)
            throw StepUnderflowError("flow: step size underflow");
        Point fine = rk4(p, start, duration, drift, 2 * steps);
        double diff = 0;
        for (std::size_t j = 0; j < p.size(); ++j)
            diff = std::max(diff, std::abs(fine[j] - coarse[j]));
        if (diff < options.tolerance) {
            // RK4 global error ~ h^4: one Richardson step
            for (std::size_t j = 0; j < p.size(); ++j)
                fine[j] += (fine[j] - coarse[j]) / 15.0;
            return fine;
        }
        coarse = std::move(fine);
        steps *= 2;
    }
}

Point flow(const MorseModel& model, const Point& p, double duration, const FlowOptions& options)
{
    if (duration < 0)
        throw Error("flow: duration must be non-negative");
    return flow(model, p, 0.0, duration, Drift{}, options);
}

Point exact_flow(const MorseModel& model, const Point& p, double duration)
{
    if (static_cast<int>(p.size()) != model.dim())
        throw Error("exact_flow: point has the wrong dimension");
    const double growth = std::exp(duration);
    Point out(p.size());
    for (std::size_t j = 0; j < p.size(); ++j) {
        const double base = wrap_angle(p[j]);
        const double turns = p[j] - base;
        if (base == pi) {
            out[j] = p[j];
            continue;
        }
        out[j] = turns + 2 * std::atan(std::tan(0.5 * base) * growth);
    }
    return out;
}

Point transport(const MorseModel& model, const Point& p, double start, double end, const Drift& drift,
                const std::vector<std::pair<double, double>>& supports, const FlowOptions& options)
{
    // breakpoints inside (lo, hi), then walk them in the direction of travel
    const double lo = std::min(start, end), hi = std::max(start, end);
    std::vector<double> cuts{lo, hi};
    for (const auto& [a, b] : supports) {
        if (a > lo && a < hi)
            cuts.push_back(a);
        if (b > lo && b < hi)
            cuts.push_back(b);
    }
    std::sort(cuts.begin(), cuts.end());
    if (end < start)
        std::reverse(cuts.begin(), cuts.end());
    Point u = p;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = cuts[i], b = cuts[i + 1];
        if (a == b)
            continue;
        const double mid = 0.5 * (a + b);
        const bool active = drift && std::any_of(supports.begin(), supports.end(), [&](const auto& w) {
            return mid > w.first && mid < w.second;
        });
        u = active ? flow(model, u, a, b - a, drift, options) : exact_flow(model, u, b - a);
    }
    return u;
}

std::vector<Point> flow_samples(const MorseModel& model, const Point& p, double start, double duration,
                                const Drift& drift, int samples, const FlowOptions& options)
{
    if (samples < 1)
        throw Error("flow_samples: need at least one interval");
    if (static_cast<int>(p.size()) != model.dim())
        throw Error("flow_samples: point has the wrong dimension");
    long stride = std::max(1L, static_cast<long>(std::ceil(std::abs(duration) / options.step / samples)));
    std::vector<Point> out;
    rk4(p, start, duration, drift, stride * samples, &out, stride);
    return out;
}

}  // namespace ainfty
