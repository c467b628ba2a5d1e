#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sigma/hs_dynamics.hpp"
#include "sigma/profile_curves.hpp"

namespace sigma {

struct PhaseResult {
    double value = 0;
    bool divergent = false;
    double error_estimate = 0;
    std::optional<double> plus, minus;  // pieces with sin(alpha) > 0 and < 0
};

struct PhaseOptions {
    double tol = 1e-12;        // per-piece quadrature tolerance
    double tail_tol = 1e-9;    // stop doubling once an increment drops below this
    double cap = 1e4;          // larger totals are reported as divergent
    double lambda_margin = 1e-9;
};

// Unbounded orbit through (pi/2, r0).
double type1_lambda(const HSParams& p, double r0);
PhaseResult phi_type1_lambda(int n, double lambda, const PhaseOptions& opt = {});
PhaseResult phi_type1(const HSParams& p, double r0, const PhaseOptions& opt = {});
// Radius where the unbounded orbit of level E meets alpha = pi/2 (E > E0).
double type1_min_radius(const HSParams& p, double E);

// Orbit with E < E0, through (pi, r1) with E = -C r1^2.
double type2_r1(const HSParams& p, double E);
PhaseResult phi_type2(const HSParams& p, double r1, const PhaseOptions& opt = {});
PhaseResult phi_type2_energy(const HSParams& p, double E, const PhaseOptions& opt = {});

// Bounded component of a level in (E0, 0); value is the phase advance per period.
PhaseResult phi_type3(const HSParams& p, double E, const PhaseOptions& opt = {});

// Dispatch on the level; `bounded` selects the component for E0 < E < 0.
PhaseResult phase_for_energy(const HSParams& p, double E, bool bounded, const PhaseOptions& opt = {});

struct SelfIntersection {
    double s1 = 0, s2 = 0;  // s1 < s2
    double x = 0, y = 0;
    double residual = 0;
};
struct SelfIntersectionReport {
    std::vector<SelfIntersection> crossings;
    double resolution = 0;  // polyline points per unit arclength actually used (minimum)
    std::size_t segments = 0;
};
// Planar polyline of gamma = r e^{i phi}; transverse crossings refined by Newton.
SelfIntersectionReport detect_self_intersection(const ProfileCurve& curve, Interval span, double resolution = 8.0);

// Crossings of an explicit polyline (no refinement); consecutive segments skipped.
std::vector<std::pair<std::size_t, std::size_t>> polyline_self_intersections(
    const std::vector<std::pair<double, double>>& pts);

struct Closure {
    bool closes = false;
    long p = 0, q = 0;  // Phi / 2pi ~ p / q
    double defect = 0;
    std::string describe() const;
};
Closure closure_test(double phi, int max_denominator = 64, double tol = 1e-8);

enum class Family { StandardEmbedding, BoundedSpiraloid, UnboundedSpiraloid, CatenoidType, ClosedNonStandard };
std::string to_string(Family f);

struct CatalogEntry {
    Family family = Family::StandardEmbedding;
    std::optional<bool> embedded;
    PhaseResult phi;
    EnergyTag tag = EnergyTag::FixedPoint;
    bool bounded = false;
    double E = 0;
    HSState initial;
    Closure closure;
    std::vector<SelfIntersection> crossings;
    Interval span;  // s-range examined for crossings
};

struct CatalogOptions {
    double r_far = 60.0;       // unbounded orbits are followed out to this radius
    double resolution = 8.0;
    int max_periods = 64;
    PhaseOptions phase;
};

// Orbit through `initial` (C >= 0 assumed; use normalize_flux first).
CatalogEntry classify_catalog(const HSParams& p, const HSState& initial, const CatalogOptions& opt = {});

// Representative of each family for the given parameters, plus a type II
// orbit as an extra unbounded sample.
std::vector<CatalogEntry> catalog_rows(const HSParams& p, const CatalogOptions& opt = {});

// Level in (E0, 0) whose bounded orbit has phase advance `target` per period.
double type3_energy_for_phase(const HSParams& p, double target, const PhaseOptions& opt = {});

// Trajectory traced for self-intersection checks: unbounded orbits out to
// r_far on both sides, bounded ones over `periods` periods from alpha = pi/2.
struct TracedOrbit {
    std::shared_ptr<const HSTrajectory> traj;
    std::shared_ptr<const TrajectoryCurve> curve;
    Interval span;
};
TracedOrbit trace_orbit(const HSParams& p, const HSState& initial, double r_far, int periods = 1);

struct PhaseRow {
    double E = 0;
    std::string klass;
    PhaseResult phi;
    int self_intersections = -1;  // -1: not examined
};
std::vector<PhaseRow> phase_table(const HSParams& p, double E_min, double E_max, int steps, bool bounded,
                                  bool with_crossings = false);

}  // namespace sigma
