#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "braidflow/geom.hpp"

namespace braidflow {

/// Compactly supported, non-increasing rotation profile r -> turns.
///
/// The profile is piecewise: between consecutive breakpoints it is either a
/// plateau (equal endpoint values) or a monotone C^1 transition
/// v0 + (v1 - v0) * smoothstep(u^shape), u = (r - r0)/(r1 - r0).
/// Shape exponents >= 1 skew a transition toward its right end and are the
/// "flexible domain" knobs used to separate the action spectrum.
class RadialProfile {
public:
    RadialProfile(std::vector<double> breakpoints, std::vector<double> values,
                  std::vector<double> shapes = {});

    // Turns at radius r. Zero for r >= r_max. Negative r is a domain error.
    double operator()(double r) const;

    double r_max() const { return breaks_.back(); }
    // Largest radius with a nonzero value (start of the trailing zero tail).
    double support_radius() const;

    const std::vector<double>& breakpoints() const { return breaks_; }
    const std::vector<double>& values() const { return values_; }
    const std::vector<double>& shapes() const { return shapes_; }

    bool non_increasing() const;

    // Isolated radii inside strict transitions where the profile equals
    // `level` (bisection per monotone segment; endpoints excluded).
    std::vector<double> level_radii(double level) const;

    // Closed intervals [a, b] with a < b on which the profile is
    // identically `value` (plateau runs, merged across breakpoints).
    std::vector<std::pair<double, double>> plateaus(double value) const;
    // All plateau runs as (a, b, value).
    struct Plateau {
        double lo, hi, value;
    };
    std::vector<Plateau> all_plateaus() const;

    static RadialProfile zero(double r_max = 1.0);

    // Tuned defaults for the two rotation profiles of the disk scenario.
    // alpha0 in (2, 2.5], beta0 in (3, 3.5]; shape exponents skew the
    // innermost transition to enlarge spectral gaps.
    static RadialProfile default_alpha(double alpha0 = 2.5, double inner_shape = 2.0);
    static RadialProfile default_beta(double beta0 = 3.5, double inner_shape = 2.0);

private:
    std::vector<double> breaks_;
    std::vector<double> values_;
    std::vector<double> shapes_;
};

enum class ProfileSpecKind { Alpha, Beta };

struct ConstraintCheck {
    std::string id;
    bool satisfied = false;
    double measured = 0.0;
};

struct ConstraintReport {
    std::vector<ConstraintCheck> checks;

    bool all_satisfied() const;
    std::vector<ConstraintCheck> violations() const;
};

// Checks every constraint of the chosen profile family: endpoint values,
// plateau runs, zero tails, strict decrease on the named intervals (value
// strictness on a fine grid plus a mean-slope floor), global monotonicity.
ConstraintReport validate_profile(const RadialProfile& profile, ProfileSpecKind kind,
                                  double strong_decrease_threshold = 0.1);

/// Radial Hamiltonian H(r) = 2*pi * int_r^{r_max} s * prof(s) ds about a
/// center. Its flow rotates the circle of radius r counterclockwise by
/// 2*pi*prof(r) per unit time. Immutable after construction; the breakpoint
/// suffix-integral table is built once here.
class RadialHamiltonian {
public:
    RadialHamiltonian(RadialProfile profile, Vec2 center);

    double value(double r) const;  // H(r); 0 for r >= r_max
    double value_at(Vec2 p) const { return value(dist(p, center_)); }

    // Counterclockwise angular velocity 2*pi*prof(r) of the induced flow.
    double angular_rate(double r) const;

    Vec2 center() const { return center_; }
    const RadialProfile& profile() const { return profile_; }

private:
    RadialProfile profile_;
    Vec2 center_;
    std::vector<double> suffix_;  // 2*pi * int_{break_i}^{r_max} s*prof at each breakpoint
};

RadialHamiltonian hamiltonian_from_profile(const RadialProfile& profile, Vec2 center);

namespace detail {
// Adaptive Simpson quadrature; throws NumericError when the recursion
// budget is exhausted before reaching the tolerance.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol);
}  // namespace detail

}  // namespace braidflow
