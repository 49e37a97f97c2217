#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "braidflow/geom.hpp"
#include "braidflow/profiles.hpp"

namespace braidflow {

class HamiltonianSystem;
using SystemPtr = std::shared_ptr<const HamiltonianSystem>;

enum class SystemKind { Zero, Radial, Sum, Concat, Bump };

enum class TimeEnvelope { Constant, SinSquared };

// Which one-sided value to take at a concat leg boundary.
enum class TimeSide { Left, Right };

/// Composable time-dependent Hamiltonian F(t, x), t in [0, 1], evaluable as
/// a value and as its symplectic gradient X_F = (dF/dy, -dF/dx) for the
/// standard area form. Concat legs are time-rescaled by 1/duration so the
/// concatenated time-1 map is the composition of the legs' time-1 maps.
/// Immutable; safe for concurrent reads.
class HamiltonianSystem : public std::enable_shared_from_this<HamiltonianSystem> {
public:
    virtual ~HamiltonianSystem() = default;

    virtual double value(double t, Vec2 x, TimeSide side = TimeSide::Right) const = 0;
    virtual Vec2 field(double t, Vec2 x, TimeSide side = TimeSide::Right) const = 0;
    virtual SystemKind kind() const = 0;

    // Sorted time partition {0, ..., 1}; the field may jump at interior
    // entries (concat leg boundaries).
    virtual std::vector<double> time_breakpoints() const { return {0.0, 1.0}; }

    // Structure accessors; throw unless kind() matches.
    virtual const RadialHamiltonian& radial() const;
    virtual const std::vector<SystemPtr>& children() const;
    virtual const std::vector<std::pair<SystemPtr, double>>& legs() const;

    static SystemPtr zero();
    static SystemPtr radial_system(RadialHamiltonian h);
    static SystemPtr sum(std::vector<SystemPtr> parts);
    static SystemPtr concat(std::vector<std::pair<SystemPtr, double>> legs);
    static SystemPtr bump(Vec2 center, double radius, double amplitude,
                          TimeEnvelope envelope = TimeEnvelope::Constant);
};

// Convenience free function mirroring the library vocabulary.
Vec2 vector_field(const HamiltonianSystem& system, double t, Vec2 x);

/// One sampled trajectory t in [0,1] of a single point.
struct Trajectory {
    std::string label;
    std::vector<double> times;   // strictly increasing, t0 = 0, tN = 1
    std::vector<Vec2> points;

    double closure_defect() const { return dist(points.front(), points.back()); }
    Vec2 start() const { return points.front(); }
};

inline constexpr int kDefaultSteps = 4096;

// Fixed-step RK4 along the flow, sampling every step; concat legs are
// stepped separately so the field stays smooth within each stretch.
// steps is the total budget per unit time (>= 100).
std::vector<Trajectory> integrate_flow(const HamiltonianSystem& system,
                                       const std::vector<Vec2>& points, int steps,
                                       std::vector<std::string> labels = {});

Vec2 time_one_map(const HamiltonianSystem& system, Vec2 x, int steps = kDefaultSteps);

// Integrate from t0 to t1 only (flow-property tests and continuation).
Vec2 flow_map(const HamiltonianSystem& system, Vec2 x, double t0, double t1, int steps);

struct FixedPointOptions {
    int steps = kDefaultSteps;
    double fixed_tolerance = 1e-8;
    double merge_radius = 1e-5;
    double jacobian_step = 1e-5;
    int max_newton_iters = 25;
    double seed_displacement_cutoff = 0.05;  // only iterate seeds that barely move
    double planar_fraction_threshold = 0.25;
};

struct FixedPointSearch {
    std::vector<Vec2> points;
    double fixed_seed_fraction = 0.0;
    bool planar_region_detected = false;
};

// Newton iteration on x -> time_one_map(x) - x seeded from a grid;
// divergent seeds are discarded silently.
FixedPointSearch find_fixed_points(const HamiltonianSystem& system, Rect region, int nx, int ny,
                                   const FixedPointOptions& options = {});

enum class FixedSetKind { NondegeneratePoint, Circle, PlanarRegion };

struct FixedSetComponent {
    FixedSetKind kind = FixedSetKind::NondegeneratePoint;
    std::string id;
    Vec2 center;        // point location or circle center
    double radius = 0;  // circle radius
    int turns = 0;      // integer profile level on the component
    Rect bbox;
    std::vector<Vec2> representatives;
};

struct ClassifyOptions {
    int steps = kDefaultSteps;
    double fixed_tolerance = 1e-8;
    int grid_resolution = 201;      // flood-fill grid over [-1,1]^2
    int min_region_cells = 8;
    int max_representatives = 20;
};

// Analytic enumeration of the fixed set of a concat/sum of radial
// primitives: centers, circles at isolated integer profile levels, and
// planar regions where every acting profile is integer (flood fill).
// Every representative is cross-checked against the time-1 map.
// Throws UnsupportedError for structures outside this class.
std::vector<FixedSetComponent> classify_fixed_sets(const HamiltonianSystem& system,
                                                   const ClassifyOptions& options = {});

}  // namespace braidflow
