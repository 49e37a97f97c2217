#include "braidflow/profiles.hpp"

#include <algorithm>
#include <cmath>

#include "braidflow/errors.hpp"

namespace braidflow {

namespace {

double smoothstep(double u) { return u * u * (3.0 - 2.0 * u); }

double shaped_step(double u, double shape) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    return smoothstep(shape == 1.0 ? u : std::pow(u, shape));
}

constexpr double kLevelEps = 1e-12;

}  // namespace

RadialProfile::RadialProfile(std::vector<double> breakpoints, std::vector<double> values,
                             std::vector<double> shapes)
    : breaks_(std::move(breakpoints)), values_(std::move(values)), shapes_(std::move(shapes)) {
    if (breaks_.size() < 2 || breaks_.size() != values_.size())
        throw DomainError("RadialProfile: need n>=2 breakpoints with matching values");
    if (!std::is_sorted(breaks_.begin(), breaks_.end()) ||
        std::adjacent_find(breaks_.begin(), breaks_.end()) != breaks_.end())
        throw DomainError("RadialProfile: breakpoints must be strictly increasing");
    if (breaks_.front() != 0.0) throw DomainError("RadialProfile: first breakpoint must be 0");
    if (shapes_.empty()) shapes_.assign(breaks_.size() - 1, 1.0);
    if (shapes_.size() != breaks_.size() - 1)
        throw DomainError("RadialProfile: need one shape per segment");
    for (double s : shapes_)
        if (!(s >= 1.0)) throw DomainError("RadialProfile: shape exponents must be >= 1");
}

double RadialProfile::operator()(double r) const {
    if (r < 0.0) throw DomainError("RadialProfile: negative radius");
    if (r >= breaks_.back()) return 0.0;
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), r);
    size_t i = static_cast<size_t>(it - breaks_.begin()) - 1;
    double v0 = values_[i], v1 = values_[i + 1];
    if (v0 == v1) return v0;
    double u = (r - breaks_[i]) / (breaks_[i + 1] - breaks_[i]);
    return v0 + (v1 - v0) * shaped_step(u, shapes_[i]);
}

double RadialProfile::support_radius() const {
    // walk back over the trailing zero plateau
    size_t i = breaks_.size();
    while (i > 0 && values_[i - 1] == 0.0) --i;
    if (i == 0) return 0.0;
    return breaks_[std::min(i, breaks_.size() - 1)];
}

bool RadialProfile::non_increasing() const {
    for (size_t i = 0; i + 1 < values_.size(); ++i)
        if (values_[i + 1] > values_[i]) return false;
    return true;
}

std::vector<double> RadialProfile::level_radii(double level) const {
    std::vector<double> out;
    for (size_t i = 0; i + 1 < breaks_.size(); ++i) {
        double v0 = values_[i], v1 = values_[i + 1];
        if (v0 == v1) continue;
        double lo = std::min(v0, v1), hi = std::max(v0, v1);
        if (!(lo + kLevelEps < level && level < hi - kLevelEps)) continue;
        double a = breaks_[i], b = breaks_[i + 1];
        // monotone segment: plain bisection on value - level
        double fa = (*this)(a) - level;
        for (int iter = 0; iter < 200 && b - a > 1e-15; ++iter) {
            double m = 0.5 * (a + b);
            double fm = (*this)(m) - level;
            if ((fa <= 0.0) == (fm <= 0.0)) {
                a = m;
                fa = fm;
            } else {
                b = m;
            }
        }
        out.push_back(0.5 * (a + b));
    }
    return out;
}

std::vector<RadialProfile::Plateau> RadialProfile::all_plateaus() const {
    std::vector<Plateau> out;
    size_t i = 0;
    while (i + 1 < breaks_.size()) {
        if (values_[i] == values_[i + 1]) {
            size_t j = i + 1;
            while (j + 1 < breaks_.size() && values_[j + 1] == values_[i]) ++j;
            out.push_back({breaks_[i], breaks_[j], values_[i]});
            i = j;
        } else {
            ++i;
        }
    }
    return out;
}

std::vector<std::pair<double, double>> RadialProfile::plateaus(double value) const {
    std::vector<std::pair<double, double>> out;
    for (const auto& p : all_plateaus())
        if (std::abs(p.value - value) < kLevelEps) out.emplace_back(p.lo, p.hi);
    return out;
}

RadialProfile RadialProfile::zero(double r_max) {
    return RadialProfile({0.0, r_max}, {0.0, 0.0});
}

RadialProfile RadialProfile::default_alpha(double alpha0, double inner_shape) {
    return RadialProfile({0.0, 0.1, 0.2, 0.8, 0.9, 1.0}, {alpha0, 2.0, 1.0, 1.0, 0.0, 0.0},
                         {inner_shape, 1.0, 1.0, 1.0, 1.0});
}

RadialProfile RadialProfile::default_beta(double beta0, double inner_shape) {
    return RadialProfile({0.0, 0.1, 0.2, 0.3}, {beta0, 3.0, 0.0, 0.0}, {inner_shape, 1.0, 1.0});
}

bool ConstraintReport::all_satisfied() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const ConstraintCheck& c) { return c.satisfied; });
}

std::vector<ConstraintCheck> ConstraintReport::violations() const {
    std::vector<ConstraintCheck> v;
    for (const auto& c : checks)
        if (!c.satisfied) v.push_back(c);
    return v;
}

namespace {

void check_value(ConstraintReport& rep, const std::string& id, double measured, bool ok) {
    rep.checks.push_back({id, ok, measured});
}

// "Strongly decreasing" on [a, b]: strictly decreasing values on a fine
// grid and mean slope at most -threshold. The pointwise-derivative reading
// is unsatisfiable at C^1 plateau joins, where the slope necessarily
// vanishes.
void check_strong_decrease(ConstraintReport& rep, const RadialProfile& p, const std::string& id,
                           double a, double b, double threshold) {
    const int n = 256;
    bool strict = true;
    double prev = p(a);
    for (int i = 1; i <= n; ++i) {
        double r = a + (b - a) * i / n;
        double v = p(r);
        if (v >= prev) strict = false;
        prev = v;
    }
    double mean_slope = (p(a) - p(b)) / (b - a);
    check_value(rep, id, mean_slope, strict && mean_slope >= threshold);
}

void check_plateau(ConstraintReport& rep, const RadialProfile& p, const std::string& id, double a,
                   double b, double value) {
    double worst = 0.0;
    const int n = 64;
    for (int i = 0; i <= n; ++i) {
        double r = a + (b - a) * i / n;
        worst = std::max(worst, std::abs(p(r) - value));
    }
    check_value(rep, id, worst, worst < 1e-12);
}

}  // namespace

ConstraintReport validate_profile(const RadialProfile& profile, ProfileSpecKind kind,
                                  double strong_decrease_threshold) {
    ConstraintReport rep;
    if (kind == ProfileSpecKind::Alpha) {
        double a0 = profile(0.0);
        check_value(rep, "alpha-at-0", a0, a0 > 2.0 && a0 <= 2.5);
        check_value(rep, "alpha-at-0.1", profile(0.1), std::abs(profile(0.1) - 2.0) < 1e-12);
        check_plateau(rep, profile, "alpha-plateau-1", 0.2, 0.8, 1.0);
        check_plateau(rep, profile, "alpha-zero-tail", 0.9, profile.r_max(), 0.0);
        check_strong_decrease(rep, profile, "alpha-strong-decrease-0-0.2", 0.0, 0.2,
                              strong_decrease_threshold);
        check_strong_decrease(rep, profile, "alpha-strong-decrease-0.8-0.9", 0.8, 0.9,
                              strong_decrease_threshold);
        check_value(rep, "alpha-monotone", profile.non_increasing() ? 1.0 : 0.0,
                    profile.non_increasing());
    } else {
        double b0 = profile(0.0);
        check_value(rep, "beta-at-0", b0, b0 > 3.0 && b0 <= 3.5);
        check_value(rep, "beta-at-0.1", profile(0.1), std::abs(profile(0.1) - 3.0) < 1e-12);
        check_plateau(rep, profile, "beta-zero-tail", 0.2, profile.r_max(), 0.0);
        check_strong_decrease(rep, profile, "beta-strong-decrease-0-0.2", 0.0, 0.2,
                              strong_decrease_threshold);
        check_value(rep, "beta-monotone", profile.non_increasing() ? 1.0 : 0.0,
                    profile.non_increasing());
    }
    return rep;
}

namespace detail {

namespace {
double simpson(double a, double fa, double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const std::function<double(double)>& f, double a, double fa, double b,
                     double fb, double m, double fm, double whole, double tol, int depth) {
    if (depth > 60) throw NumericError("adaptive quadrature did not converge");
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = simpson(a, fa, m, fm, flm);
    double right = simpson(m, fm, b, fb, frm);
    if (std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth + 1) +
           adaptive_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth + 1);
}
}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol) {
    if (a >= b) return 0.0;
    double m = 0.5 * (a + b);
    double fa = f(a), fb = f(b), fm = f(m);
    double whole = simpson(a, fa, b, fb, fm);
    return adaptive_step(f, a, fa, b, fb, m, fm, whole, tol, 0);
}

}  // namespace detail

RadialHamiltonian::RadialHamiltonian(RadialProfile profile, Vec2 center)
    : profile_(std::move(profile)), center_(center) {
    // suffix_[i] = 2*pi * int_{break_i}^{r_max} s*prof(s) ds
    const auto& br = profile_.breakpoints();
    suffix_.assign(br.size(), 0.0);
    auto integrand = [this](double s) { return s * profile_(s); };
    for (size_t i = br.size() - 1; i-- > 0;) {
        double seg = detail::adaptive_simpson(integrand, br[i], br[i + 1], 1e-13);
        suffix_[i] = suffix_[i + 1] + kTwoPi * seg;
    }
}

double RadialHamiltonian::value(double r) const {
    if (r < 0.0) throw DomainError("RadialHamiltonian: negative radius");
    const auto& br = profile_.breakpoints();
    if (r >= br.back()) return 0.0;
    auto it = std::upper_bound(br.begin(), br.end(), r);
    size_t i = static_cast<size_t>(it - br.begin()) - 1;
    auto integrand = [this](double s) { return s * profile_(s); };
    double partial = detail::adaptive_simpson(integrand, r, br[i + 1], 1e-13);
    return kTwoPi * partial + suffix_[i + 1];
}

double RadialHamiltonian::angular_rate(double r) const { return kTwoPi * profile_(r); }

RadialHamiltonian hamiltonian_from_profile(const RadialProfile& profile, Vec2 center) {
    return RadialHamiltonian(profile, center);
}

}  // namespace braidflow
