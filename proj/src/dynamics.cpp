#include "braidflow/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "braidflow/errors.hpp"

namespace braidflow {

const RadialHamiltonian& HamiltonianSystem::radial() const {
    throw DomainError("not a radial system");
}
const std::vector<SystemPtr>& HamiltonianSystem::children() const {
    throw DomainError("not a sum system");
}
const std::vector<std::pair<SystemPtr, double>>& HamiltonianSystem::legs() const {
    throw DomainError("not a concat system");
}

namespace {

class ZeroSystem final : public HamiltonianSystem {
public:
    double value(double, Vec2, TimeSide) const override { return 0.0; }
    Vec2 field(double, Vec2, TimeSide) const override { return {}; }
    SystemKind kind() const override { return SystemKind::Zero; }
};

class RadialSystem final : public HamiltonianSystem {
public:
    explicit RadialSystem(RadialHamiltonian h) : ham_(std::move(h)) {}

    double value(double, Vec2 x, TimeSide) const override { return ham_.value_at(x); }

    Vec2 field(double, Vec2 x, TimeSide) const override {
        Vec2 rel = x - ham_.center();
        double omega = ham_.angular_rate(norm(rel));
        return {-omega * rel.y, omega * rel.x};
    }

    SystemKind kind() const override { return SystemKind::Radial; }
    const RadialHamiltonian& radial() const override { return ham_; }

private:
    RadialHamiltonian ham_;
};

class SumSystem final : public HamiltonianSystem {
public:
    explicit SumSystem(std::vector<SystemPtr> parts) : parts_(std::move(parts)) {
        for (const auto& p : parts_)
            if (!p) throw DomainError("sum: null child");
    }

    double value(double t, Vec2 x, TimeSide side) const override {
        double v = 0.0;
        for (const auto& p : parts_) v += p->value(t, x, side);
        return v;
    }

    Vec2 field(double t, Vec2 x, TimeSide side) const override {
        Vec2 v{};
        for (const auto& p : parts_) v += p->field(t, x, side);
        return v;
    }

    std::vector<double> time_breakpoints() const override {
        std::set<double> bps{0.0, 1.0};
        for (const auto& p : parts_)
            for (double b : p->time_breakpoints()) bps.insert(b);
        return {bps.begin(), bps.end()};
    }

    SystemKind kind() const override { return SystemKind::Sum; }
    const std::vector<SystemPtr>& children() const override { return parts_; }

private:
    std::vector<SystemPtr> parts_;
};

class ConcatSystem final : public HamiltonianSystem {
public:
    explicit ConcatSystem(std::vector<std::pair<SystemPtr, double>> legs) : legs_(std::move(legs)) {
        if (legs_.empty()) throw DomainError("concat: no legs");
        double total = 0.0;
        cum_.push_back(0.0);
        for (const auto& [sys, d] : legs_) {
            if (!sys) throw DomainError("concat: null leg");
            if (!(d > 0.0)) throw DomainError("concat: leg durations must be positive");
            total += d;
            cum_.push_back(total);
        }
        if (std::abs(total - 1.0) > 1e-12) throw DomainError("concat: durations must sum to 1");
        cum_.back() = 1.0;
    }

    double value(double t, Vec2 x, TimeSide side) const override {
        auto [i, tau] = locate(t, side);
        return legs_[i].first->value(tau, x, side) / legs_[i].second;
    }

    Vec2 field(double t, Vec2 x, TimeSide side) const override {
        auto [i, tau] = locate(t, side);
        return legs_[i].first->field(tau, x, side) / legs_[i].second;
    }

    std::vector<double> time_breakpoints() const override {
        std::set<double> bps;
        for (size_t i = 0; i < legs_.size(); ++i) {
            double a = cum_[i], d = legs_[i].second;
            for (double b : legs_[i].first->time_breakpoints()) bps.insert(a + b * d);
        }
        bps.insert(0.0);
        bps.insert(1.0);
        return {bps.begin(), bps.end()};
    }

    SystemKind kind() const override { return SystemKind::Concat; }
    const std::vector<std::pair<SystemPtr, double>>& legs() const override { return legs_; }

private:
    std::pair<size_t, double> locate(double t, TimeSide side) const {
        long idx;
        if (side == TimeSide::Right)
            idx = std::upper_bound(cum_.begin(), cum_.end(), t) - cum_.begin() - 1;
        else
            idx = std::lower_bound(cum_.begin(), cum_.end(), t) - cum_.begin() - 1;
        idx = std::clamp<long>(idx, 0, static_cast<long>(legs_.size()) - 1);
        double tau = (t - cum_[idx]) / legs_[idx].second;
        return {static_cast<size_t>(idx), std::clamp(tau, 0.0, 1.0)};
    }

    std::vector<std::pair<SystemPtr, double>> legs_;
    std::vector<double> cum_;
};

class BumpSystem final : public HamiltonianSystem {
public:
    BumpSystem(Vec2 center, double radius, double amplitude, TimeEnvelope env)
        : center_(center), radius_(radius), amplitude_(amplitude), env_(env) {
        if (!(radius > 0.0)) throw DomainError("bump: radius must be positive");
    }

    double value(double t, Vec2 x, TimeSide) const override {
        double u = dist(x, center_) / radius_;
        if (u >= 1.0) return 0.0;
        double b = (1.0 - u * u);
        return amplitude_ * envelope(t) * b * b * b;
    }

    Vec2 field(double t, Vec2 x, TimeSide) const override {
        Vec2 rel = x - center_;
        double rho = norm(rel);
        double u = rho / radius_;
        if (u >= 1.0 || rho == 0.0) return {};
        // dF/drho = A*env * 3(1-u^2)^2 * (-2u) / R
        double b = 1.0 - u * u;
        double dfdr = amplitude_ * envelope(t) * (-6.0 * u * b * b) / radius_;
        // X = (dF/dy, -dF/dx) = dF/drho * (rel.y, -rel.x) / rho
        return Vec2{rel.y, -rel.x} * (dfdr / rho);
    }

    SystemKind kind() const override { return SystemKind::Bump; }

private:
    double envelope(double t) const {
        if (env_ == TimeEnvelope::Constant) return 1.0;
        double s = std::sin(kPi * t);
        return s * s;
    }

    Vec2 center_;
    double radius_;
    double amplitude_;
    TimeEnvelope env_;
};

}  // namespace

SystemPtr HamiltonianSystem::zero() { return std::make_shared<ZeroSystem>(); }
SystemPtr HamiltonianSystem::radial_system(RadialHamiltonian h) {
    return std::make_shared<RadialSystem>(std::move(h));
}
SystemPtr HamiltonianSystem::sum(std::vector<SystemPtr> parts) {
    return std::make_shared<SumSystem>(std::move(parts));
}
SystemPtr HamiltonianSystem::concat(std::vector<std::pair<SystemPtr, double>> legs) {
    return std::make_shared<ConcatSystem>(std::move(legs));
}
SystemPtr HamiltonianSystem::bump(Vec2 center, double radius, double amplitude,
                                  TimeEnvelope envelope) {
    return std::make_shared<BumpSystem>(center, radius, amplitude, envelope);
}

Vec2 vector_field(const HamiltonianSystem& system, double t, Vec2 x) {
    if (t < 0.0 || t > 1.0) throw DomainError("vector_field: t outside [0,1]");
    if (norm(x) > 1.5) throw DomainError("vector_field: point outside the plane model");
    return system.field(t, x);
}

namespace {

std::string point_str(Vec2 p) {
    std::ostringstream os;
    os << "(" << p.x << ", " << p.y << ")";
    return os.str();
}

// One RK4 step from t0 to t1; `seg_end` marks the segment boundary where
// left-sided evaluation is required.
Vec2 rk4_step(const HamiltonianSystem& sys, Vec2 x, double t0, double t1, double seg_end) {
    double h = t1 - t0;
    auto eval = [&](double t, Vec2 p) {
        TimeSide side = (t >= seg_end) ? TimeSide::Left : TimeSide::Right;
        return sys.field(t, p, side);
    };
    Vec2 k1 = eval(t0, x);
    Vec2 k2 = eval(t0 + 0.5 * h, x + k1 * (0.5 * h));
    Vec2 k3 = eval(t0 + 0.5 * h, x + k2 * (0.5 * h));
    Vec2 k4 = eval(t1, x + k3 * h);
    return x + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
}

// Segment [a, b] of a single sample run; appends every step end to the sink.
void integrate_segment(const HamiltonianSystem& sys, Vec2& x, double a, double b, int n,
                       std::vector<double>* times, std::vector<Vec2>* pts, Vec2 origin) {
    for (int k = 0; k < n; ++k) {
        double t0 = a + (b - a) * k / n;
        double t1 = (k + 1 == n) ? b : a + (b - a) * (k + 1) / n;
        x = rk4_step(sys, x, t0, t1, b);
        if (!std::isfinite(x.x) || !std::isfinite(x.y))
            throw NumericError("integration failure (NaN) for point " + point_str(origin) +
                               " at t=" + std::to_string(t1));
        if (times) {
            times->push_back(t1);
            pts->push_back(x);
        }
    }
}

// Clip the system's time partition to [t0, t1].
std::vector<double> clipped_breakpoints(const HamiltonianSystem& sys, double t0, double t1) {
    std::vector<double> out{t0};
    for (double b : sys.time_breakpoints())
        if (b > t0 && b < t1) out.push_back(b);
    out.push_back(t1);
    return out;
}

Vec2 run_flow(const HamiltonianSystem& sys, Vec2 x, double t0, double t1, int steps,
              std::vector<double>* times, std::vector<Vec2>* pts) {
    Vec2 origin = x;
    if (times) {
        times->push_back(t0);
        pts->push_back(x);
    }
    auto bps = clipped_breakpoints(sys, t0, t1);
    for (size_t i = 0; i + 1 < bps.size(); ++i) {
        double a = bps[i], b = bps[i + 1];
        int n = std::max(1, static_cast<int>(std::llround(steps * (b - a))));
        integrate_segment(sys, x, a, b, n, times, pts, origin);
    }
    return x;
}

}  // namespace

std::vector<Trajectory> integrate_flow(const HamiltonianSystem& system,
                                       const std::vector<Vec2>& points, int steps,
                                       std::vector<std::string> labels) {
    if (steps < 100) throw DomainError("integrate_flow: need steps >= 100");
    if (!labels.empty() && labels.size() != points.size())
        throw DomainError("integrate_flow: label count mismatch");
    std::vector<Trajectory> out;
    out.reserve(points.size());
    for (size_t i = 0; i < points.size(); ++i) {
        Trajectory tr;
        tr.label = labels.empty() ? "P" + std::to_string(i) : labels[i];
        run_flow(system, points[i], 0.0, 1.0, steps, &tr.times, &tr.points);
        out.push_back(std::move(tr));
    }
    return out;
}

Vec2 time_one_map(const HamiltonianSystem& system, Vec2 x, int steps) {
    return run_flow(system, x, 0.0, 1.0, steps, nullptr, nullptr);
}

Vec2 flow_map(const HamiltonianSystem& system, Vec2 x, double t0, double t1, int steps) {
    if (t1 < t0) throw DomainError("flow_map: t1 < t0");
    if (t1 == t0) return x;
    return run_flow(system, x, t0, t1, steps, nullptr, nullptr);
}

namespace {

struct Mat2 {
    double a = 0, b = 0, c = 0, d = 0;  // [[a, b], [c, d]]
};

Mat2 time_one_jacobian(const HamiltonianSystem& sys, Vec2 x, double h, int steps) {
    Vec2 fx1 = time_one_map(sys, {x.x + h, x.y}, steps);
    Vec2 fx0 = time_one_map(sys, {x.x - h, x.y}, steps);
    Vec2 fy1 = time_one_map(sys, {x.x, x.y + h}, steps);
    Vec2 fy0 = time_one_map(sys, {x.x, x.y - h}, steps);
    return {(fx1.x - fx0.x) / (2 * h), (fy1.x - fy0.x) / (2 * h), (fx1.y - fx0.y) / (2 * h),
            (fy1.y - fy0.y) / (2 * h)};
}

}  // namespace

FixedPointSearch find_fixed_points(const HamiltonianSystem& system, Rect region, int nx, int ny,
                                   const FixedPointOptions& opt) {
    if (nx < 32 || ny < 32) throw DomainError("find_fixed_points: resolution must be >= 32x32");
    FixedPointSearch result;
    int fixed_seeds = 0;
    int total_seeds = nx * ny;
    std::vector<Vec2> found;

    auto try_accept = [&](Vec2 p) {
        for (Vec2 q : found)
            if (dist(p, q) < opt.merge_radius) return;
        found.push_back(p);
    };

    for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 0; ix < nx; ++ix) {
            Vec2 seed{region.lo.x + region.width() * ix / (nx - 1),
                      region.lo.y + region.height() * iy / (ny - 1)};
            Vec2 image = time_one_map(system, seed, opt.steps);
            double d0 = dist(image, seed);
            if (d0 < opt.fixed_tolerance) {
                ++fixed_seeds;
                try_accept(seed);
                continue;
            }
            if (d0 > opt.seed_displacement_cutoff) continue;

            Vec2 x = seed;
            bool converged = false;
            for (int it = 0; it < opt.max_newton_iters; ++it) {
                Vec2 phi = time_one_map(system, x, opt.steps) - x;
                if (norm(phi) < opt.fixed_tolerance) {
                    converged = true;
                    break;
                }
                Mat2 J = time_one_jacobian(system, x, opt.jacobian_step, opt.steps);
                double a = J.a - 1.0, b = J.b, c = J.c, d = J.d - 1.0;
                double det = a * d - b * c;
                if (std::abs(det) < 1e-12) break;  // degenerate direction; drop seed
                Vec2 delta{(-phi.x * d + phi.y * b) / det, (phi.x * c - phi.y * a) / det};
                if (norm(delta) > 0.1) break;  // diverging
                x += delta;
                if (x.x < region.lo.x - 0.1 || x.x > region.hi.x + 0.1 || x.y < region.lo.y - 0.1 ||
                    x.y > region.hi.y + 0.1)
                    break;
            }
            if (converged) try_accept(x);
        }
    }

    result.points = std::move(found);
    result.fixed_seed_fraction = static_cast<double>(fixed_seeds) / total_seeds;
    result.planar_region_detected = result.fixed_seed_fraction > opt.planar_fraction_threshold;
    return result;
}

// ---------------------------------------------------------------------------
// Fixed-set classification for radial structures.

namespace {

struct RadialGroup {
    Vec2 center;
    std::vector<const RadialHamiltonian*> parts;

    double support_radius() const {
        double r = 0.0;
        for (auto* p : parts) r = std::max(r, p->profile().support_radius());
        return r;
    }
    double r_max() const {
        double r = 0.0;
        for (auto* p : parts) r = std::max(r, p->profile().r_max());
        return r;
    }
    double prof(double rho) const {
        double v = 0.0;
        for (auto* p : parts) v += p->profile()(rho);
        return v;
    }
    std::vector<double> merged_breaks() const {
        std::set<double> b;
        for (auto* p : parts)
            for (double r : p->profile().breakpoints()) b.insert(r);
        b.insert(r_max());
        return {b.begin(), b.end()};
    }
};

void collect_radials(const HamiltonianSystem& sys, std::vector<const RadialHamiltonian*>& out) {
    switch (sys.kind()) {
        case SystemKind::Zero:
            return;
        case SystemKind::Radial:
            out.push_back(&sys.radial());
            return;
        case SystemKind::Sum:
            for (const auto& c : sys.children()) collect_radials(*c, out);
            return;
        case SystemKind::Concat:
            for (const auto& [leg, dur] : sys.legs()) collect_radials(*leg, out);
            return;
        default:
            throw UnsupportedError("classify_fixed_sets: system is not built from radial primitives");
    }
}

bool near_integer(double v, double eps = 1e-9) { return std::abs(v - std::llround(v)) < eps; }

// True when the group's summed profile is a single constant integer over
// the closed radius interval [lo, hi].
bool constant_integer_on(const RadialGroup& g, double lo, double hi) {
    lo = std::max(lo, 0.0);
    double v0 = g.prof(lo);
    if (!near_integer(v0)) return false;
    const int n = 96;
    for (int i = 0; i <= n; ++i) {
        double r = lo + (hi - lo) * i / n;
        if (std::abs(g.prof(r) - v0) > 1e-9) return false;
    }
    return true;
}

// Fixedness criterion at a point: every group has rho = 0 or an integer
// summed profile value there.
bool analytically_fixed(const std::vector<RadialGroup>& groups, Vec2 x) {
    for (const auto& g : groups) {
        double rho = dist(x, g.center);
        if (rho == 0.0) continue;
        if (!near_integer(g.prof(rho))) return false;
    }
    return true;
}

std::string fmt_coord(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

// Isolated radii where the summed profile takes an integer value: interior
// crossings inside strict-transition stretches (by bisection) plus integer
// touches at breakpoints that do not border a plateau of that value.
std::vector<std::pair<double, int>> integer_level_circles(const RadialGroup& g) {
    std::vector<std::pair<double, int>> out;
    auto breaks = g.merged_breaks();
    auto is_plateau = [&](size_t i) {
        return std::abs(g.prof(breaks[i]) - g.prof(breaks[i + 1])) < 1e-12;
    };
    for (size_t i = 0; i + 1 < breaks.size(); ++i) {
        double a = breaks[i], b = breaks[i + 1];
        double va = g.prof(a), vb = g.prof(b);
        if (is_plateau(i)) continue;
        double lo = std::min(va, vb), hi = std::max(va, vb);
        for (long long n = static_cast<long long>(std::ceil(lo)); n <= std::floor(hi); ++n) {
            double level = static_cast<double>(n);
            if (level <= lo + 1e-12 || level >= hi - 1e-12) continue;  // handled as touches
            // bisection on the monotone stretch
            double x0 = a, x1 = b, f0 = va - level;
            for (int it = 0; it < 200 && x1 - x0 > 1e-15; ++it) {
                double m = 0.5 * (x0 + x1);
                double fm = g.prof(m) - level;
                if ((f0 <= 0) == (fm <= 0)) {
                    x0 = m;
                    f0 = fm;
                } else {
                    x1 = m;
                }
            }
            out.emplace_back(0.5 * (x0 + x1), static_cast<int>(n));
        }
    }
    // integer touches at interior breakpoints (e.g. a transition ending
    // exactly at an integer and another starting there)
    for (size_t i = 1; i + 1 < breaks.size(); ++i) {
        double v = g.prof(breaks[i]);
        if (!near_integer(v, 1e-12)) continue;
        bool left_plateau = is_plateau(i - 1);
        bool right_plateau = is_plateau(i);
        if (left_plateau || right_plateau) continue;  // edge of a planar region
        out.emplace_back(breaks[i], static_cast<int>(std::llround(v)));
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

std::vector<FixedSetComponent> classify_fixed_sets(const HamiltonianSystem& system,
                                                   const ClassifyOptions& opt) {
    std::vector<const RadialHamiltonian*> leaves;
    collect_radials(system, leaves);

    // merge by center: rotations about a common center compose additively
    std::map<std::pair<double, double>, RadialGroup> by_center;
    for (auto* h : leaves) {
        auto key = std::make_pair(h->center().x, h->center().y);
        auto& g = by_center[key];
        g.center = h->center();
        g.parts.push_back(h);
    }
    std::vector<RadialGroup> groups;
    for (auto& [key, g] : by_center) groups.push_back(std::move(g));

    // tractability: different centers must have disjoint supports or one
    // support must sit inside a constant-integer zone of the other
    for (size_t i = 0; i < groups.size(); ++i) {
        for (size_t j = i + 1; j < groups.size(); ++j) {
            double d = dist(groups[i].center, groups[j].center);
            double ri = groups[i].support_radius(), rj = groups[j].support_radius();
            if (d >= ri + rj - 1e-12) continue;
            bool j_inside_i = constant_integer_on(groups[i], d - rj, d + rj);
            bool i_inside_j = constant_integer_on(groups[j], d - ri, d + ri);
            if (!j_inside_i && !i_inside_j)
                throw UnsupportedError(
                    "classify_fixed_sets: overlapping rotation zones are not analytically "
                    "tractable");
        }
    }

    std::vector<FixedSetComponent> points, circles, regions;

    // centers
    for (const auto& g : groups) {
        bool others_fixed = true;
        for (const auto& o : groups) {
            if (&o == &g) continue;
            double rho = dist(g.center, o.center);
            if (!near_integer(o.prof(rho))) {
                others_fixed = false;
                break;
            }
        }
        if (!others_fixed) continue;
        double v0 = g.prof(0.0);
        if (near_integer(v0)) {
            // locally constant => interior of a planar region (flood fill
            // will pick it up); an isolated integer touch at the center is
            // outside the supported class
            if (std::abs(g.prof(1e-6 * std::max(1.0, g.r_max())) - v0) < 1e-10) continue;
            throw UnsupportedError("classify_fixed_sets: degenerate isolated center");
        }
        FixedSetComponent c;
        c.kind = FixedSetKind::NondegeneratePoint;
        c.center = g.center;
        c.id = "point(" + fmt_coord(g.center.x) + "," + fmt_coord(g.center.y) + ")";
        c.bbox = {g.center, g.center};
        c.representatives = {g.center};
        points.push_back(std::move(c));
    }

    // circles at isolated integer levels
    for (const auto& g : groups) {
        for (auto [radius, level] : integer_level_circles(g)) {
            bool fixed_by_others = true;
            for (const auto& o : groups) {
                if (&o == &g) continue;
                double d = dist(g.center, o.center);
                if (!constant_integer_on(o, d - radius, d + radius)) {
                    fixed_by_others = false;
                    break;
                }
            }
            if (!fixed_by_others) continue;
            FixedSetComponent c;
            c.kind = FixedSetKind::Circle;
            c.center = g.center;
            c.radius = radius;
            c.turns = level;
            c.id = "circle(" + fmt_coord(g.center.x) + "," + fmt_coord(g.center.y) +
                   ";r=" + fmt_coord(radius) + ")";
            c.bbox = {{g.center.x - radius, g.center.y - radius},
                      {g.center.x + radius, g.center.y + radius}};
            const int reps = 12;
            for (int k = 0; k < reps; ++k) {
                double ang = kTwoPi * k / reps;
                c.representatives.push_back(
                    {g.center.x + radius * std::cos(ang), g.center.y + radius * std::sin(ang)});
            }
            circles.push_back(std::move(c));
        }
    }

    // planar regions by flood fill over the unit disk
    {
        const int n = opt.grid_resolution;
        const double cell = 2.0 / (n - 1);
        std::vector<int> mark(static_cast<size_t>(n) * n, -1);
        auto cell_point = [&](int ix, int iy) {
            return Vec2{-1.0 + cell * ix, -1.0 + cell * iy};
        };
        auto in_model = [&](Vec2 p) { return norm(p) <= 1.0 - 0.5 * cell; };

        std::vector<std::vector<std::pair<int, int>>> comps;
        for (int iy = 0; iy < n; ++iy) {
            for (int ix = 0; ix < n; ++ix) {
                if (mark[static_cast<size_t>(iy) * n + ix] != -1) continue;
                Vec2 p = cell_point(ix, iy);
                if (!in_model(p) || !analytically_fixed(groups, p)) continue;
                // BFS flood fill
                int id = static_cast<int>(comps.size());
                comps.emplace_back();
                std::vector<std::pair<int, int>> queue{{ix, iy}};
                mark[static_cast<size_t>(iy) * n + ix] = id;
                while (!queue.empty()) {
                    auto [cx, cy] = queue.back();
                    queue.pop_back();
                    comps[id].emplace_back(cx, cy);
                    const int dx[4] = {1, -1, 0, 0}, dy[4] = {0, 0, 1, -1};
                    for (int k = 0; k < 4; ++k) {
                        int mx = cx + dx[k], my = cy + dy[k];
                        if (mx < 0 || my < 0 || mx >= n || my >= n) continue;
                        if (mark[static_cast<size_t>(my) * n + mx] != -1) continue;
                        Vec2 q = cell_point(mx, my);
                        if (!in_model(q) || !analytically_fixed(groups, q)) continue;
                        mark[static_cast<size_t>(my) * n + mx] = id;
                        queue.push_back({mx, my});
                    }
                }
            }
        }
        for (auto& cells : comps) {
            if (static_cast<int>(cells.size()) < opt.min_region_cells) continue;
            std::sort(cells.begin(), cells.end());
            FixedSetComponent c;
            c.kind = FixedSetKind::PlanarRegion;
            Rect bbox{cell_point(cells.front().first, cells.front().second),
                      cell_point(cells.front().first, cells.front().second)};
            for (auto [ix, iy] : cells) {
                Vec2 p = cell_point(ix, iy);
                bbox.lo.x = std::min(bbox.lo.x, p.x);
                bbox.lo.y = std::min(bbox.lo.y, p.y);
                bbox.hi.x = std::max(bbox.hi.x, p.x);
                bbox.hi.y = std::max(bbox.hi.y, p.y);
            }
            c.bbox = bbox;
            size_t stride = std::max<size_t>(1, cells.size() / opt.max_representatives);
            for (size_t k = 0; k < cells.size() && c.representatives.size() <
                                                       static_cast<size_t>(opt.max_representatives);
                 k += stride)
                c.representatives.push_back(cell_point(cells[k].first, cells[k].second));
            Vec2 rep = c.representatives.front();
            double level = 0.0;
            for (const auto& g : groups) level += g.prof(dist(rep, g.center));
            c.turns = static_cast<int>(std::llround(level));
            c.center = {0.5 * (bbox.lo.x + bbox.hi.x), 0.5 * (bbox.lo.y + bbox.hi.y)};
            c.id = "region(" + fmt_coord(bbox.lo.x) + "," + fmt_coord(bbox.lo.y) + ";" +
                   fmt_coord(bbox.hi.x) + "," + fmt_coord(bbox.hi.y) + ")";
            regions.push_back(std::move(c));
        }
    }

    auto by_geometry = [](const FixedSetComponent& a, const FixedSetComponent& b) {
        if (a.center.x != b.center.x) return a.center.x < b.center.x;
        if (a.center.y != b.center.y) return a.center.y < b.center.y;
        return a.radius < b.radius;
    };
    std::sort(points.begin(), points.end(), by_geometry);
    std::sort(circles.begin(), circles.end(), by_geometry);
    std::sort(regions.begin(), regions.end(), by_geometry);

    std::vector<FixedSetComponent> out;
    for (auto* bucket : {&points, &circles, &regions})
        for (auto& c : *bucket) out.push_back(std::move(c));

    // cross-check every representative against the integrated map
    for (const auto& c : out) {
        for (Vec2 rep : c.representatives) {
            Vec2 image = time_one_map(system, rep, opt.steps);
            if (dist(image, rep) > opt.fixed_tolerance)
                throw NumericError("classify_fixed_sets: representative of " + c.id +
                                   " fails the fixed-point cross-check");
        }
    }
    return out;
}

}  // namespace braidflow
