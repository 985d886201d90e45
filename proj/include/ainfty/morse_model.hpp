#pragma once

// Model manifolds with closed-form Morse data: the circle with f = cos(theta) and
// the flat 2-torus with f = cos(x) + cos(y). Both carry the flat metric and the
// product flow  d/ds u = -grad f(u) = (sin u_1, ..., sin u_n).

#include <functional>
#include <string>
#include <vector>

namespace ainfty {

using Point = std::vector<double>;

struct CriticalPoint {
    std::string name;
    Point coords;   // every coordinate is 0 or pi
    int index = 0;  // Morse index = number of coordinates at 0 (local maxima of cos)
};

/// Additional time-dependent drift added to -grad f: du/ds = -grad f(u) + drift(s).
using Drift = std::function<void(double s, Point& out)>;

class MorseModel {
public:
    static MorseModel circle();
    static MorseModel torus();
    /// "circle" or "torus"; throws Error otherwise.
    static MorseModel by_name(const std::string& name);

    const std::string& name() const noexcept { return name_; }
    int dim() const noexcept { return dim_; }
    const std::vector<CriticalPoint>& criticals() const noexcept { return criticals_; }
    const CriticalPoint& critical(const std::string& name) const;

    double f(const Point& p) const;
    Point grad(const Point& p) const;
    /// Degree of a generator in the Morse complex: n - index.
    int degree(const CriticalPoint& x) const { return dim_ - x.index; }

    /// Residual of p in the stable manifold W+(x) (points flowing forward to x): one
    /// component per coordinate where x_j = 0, namely wrap(p_j).
    std::vector<double> stable_residual(const CriticalPoint& x, const Point& p) const;
    /// Residual of p in the unstable manifold W-(x) (points flowing backward to x): one
    /// component per coordinate where x_j = pi, namely wrap(p_j - pi), the first one
    /// multiplied by coorientation(x).
    std::vector<double> unstable_residual(const CriticalPoint& x, const Point& p) const;
    /// W-(x) is oriented by its coordinate basis in increasing order; its normal is cooriented
    /// so that (orientation of W-, coorientation) is the ambient orientation. This is the sign
    /// of the shuffle putting unstable coordinates before stable ones.
    int coorientation(const CriticalPoint& x) const;
    /// Distance of p from the boundary of the open part of W+(x): min over coordinates with
    /// x_j = pi of |wrap(p_j)|; +inf when there are none.
    double stable_margin(const CriticalPoint& x, const Point& p) const;
    /// Same for W-(x): min over coordinates with x_j = 0 of |wrap(p_j - pi)|.
    double unstable_margin(const CriticalPoint& x, const Point& p) const;

private:
    std::string name_;
    int dim_ = 0;
    std::vector<CriticalPoint> criticals_;
};

/// Angle reduced to (-pi, pi].
double wrap_angle(double a);

struct FlowOptions {
    double step = 0.02;          // initial RK4 step
    double tolerance = 1e-11;    // Richardson acceptance on the max-norm difference
    double min_step = 1e-7;      // StepUnderflowError below this
    bool adaptive = true;        // false: single fixed-step pass, no error control
};

/// Integrates du/ds = -grad f(u) + drift(s) from s = start to s = start + duration
/// (duration may be negative to flow backward). With options.adaptive the step is halved
/// until two successive RK4 passes agree to the tolerance; the finer pass is returned
/// after one Richardson extrapolation step.
Point flow(const MorseModel& model, const Point& p, double start, double duration, const Drift& drift,
           const FlowOptions& options = {});

/// Unperturbed flow for a non-negative duration.
Point flow(const MorseModel& model, const Point& p, double duration, const FlowOptions& options = {});

/// Closed-form unperturbed flow: each coordinate obeys tan(u(s)/2) = tan(u(0)/2) e^s.
/// Any real duration.
Point exact_flow(const MorseModel& model, const Point& p, double duration);

/// Flow from s = start to s = end where the drift is supported in `supports` (closed
/// intervals). Unperturbed stretches use exact_flow, supported stretches use flow().
Point transport(const MorseModel& model, const Point& p, double start, double end, const Drift& drift,
                const std::vector<std::pair<double, double>>& supports, const FlowOptions& options = {});

/// Samples u(s) at `samples`+1 equally spaced parameters of the same integration.
std::vector<Point> flow_samples(const MorseModel& model, const Point& p, double start, double duration,
                                const Drift& drift, int samples, const FlowOptions& options = {});

}  // namespace ainfty
