#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace sigma {

// Parameters of the equivariant Hamiltonian-stationary system
//   alpha' = C / r^{n-1} - n sin(alpha) / r,   r' = cos(alpha).
// The flux constant C is kept non-negative; see normalize_flux.
struct HSParams {
    int n = 3;
    double C = 0.0;

    HSParams() = default;
    HSParams(int n_, double C_);
};

struct HSState {
    double alpha = 0.0;
    double r = 1.0;
};

// Reversing the arclength maps (alpha, C) to (alpha + pi, -C). Used to bring
// a negative flux constant back to C >= 0.
struct FluxNormalization {
    HSParams params;
    HSState state;
    bool reversed = false;
};
FluxNormalization normalize_flux(int n, double C, HSState initial);

struct HSRate {
    double dalpha;
    double dr;
};

HSRate hs_rhs(const HSState& y, const HSParams& p);

// First integral 2 r^n sin(alpha) - C r^2.
double energy(const HSState& y, const HSParams& p);

// Profile curvature along an orbit, k = C/r^{n-1} - (n-1) sin(alpha)/r, and its s-derivative.
double hs_curvature(const HSState& y, const HSParams& p);
double hs_curvature_rate(const HSState& y, const HSParams& p);

struct FixedPoint {
    HSState state;  // (pi/2, rbar)
    double E0;
};
FixedPoint fixed_points(const HSParams& p);
double critical_energy(const HSParams& p);

struct IntegratorOptions {
    // Error control is essentially relative: the energy has sensitivity
    // 2 r^n cos(alpha) to alpha, so an absolute floor on alpha shows up as
    // drift once r is large.
    double rtol = 1e-12;
    double atol = 1e-16;
    double r_min = 1e-8;  // collapse event
    double r_max = 1e8;   // escape event
    std::size_t max_steps = 2'000'000;
};

enum class Termination { Completed, RadiusCollapse, RadiusBound, StepUnderflow, StepLimit };
std::string to_string(Termination t);

class HSTrajectory {
public:
    const HSParams& params() const { return params_; }
    double s_lo() const { return grid_.front(); }
    double s_hi() const { return grid_.back(); }
    double s_start() const { return s_start_; }
    bool single_point() const { return steps_.empty(); }

    // Dense output; alpha is continuous (not reduced).
    HSState state_at(double s) const;

    // Accepted step endpoints in increasing s, with the states there.
    const std::vector<double>& grid() const { return grid_; }
    const std::vector<HSState>& states() const { return states_; }

    double initial_energy() const { return E_start_; }
    double max_energy_drift() const { return max_drift_; }
    Termination termination() const { return termination_; }
    // s values where alpha crosses pi/2 mod pi.
    const std::vector<double>& section_crossings() const { return sections_; }

    struct Step {
        double s0 = 0.0;    // where the step starts
        double h = 0.0;     // signed step length
        double lo = 0.0;    // usable interval (may be cut short by an event)
        double hi = 0.0;
        double alpha0 = 0.0;  // reduced alpha at s0
        double r0 = 0.0;
        int winding = 0;      // alpha = alpha0 + 2 pi winding + ...
        std::array<std::array<double, 4>, 2> q{};
    };

private:
    friend HSTrajectory integrate(const HSParams&, HSState, double, double, const IntegratorOptions&);
    friend HSTrajectory integrate_two_sided(const HSParams&, HSState, double, double,
                                            const IntegratorOptions&);
    void finalize();

    HSParams params_;
    double s_start_ = 0.0;
    double E_start_ = 0.0;
    double max_drift_ = 0.0;
    Termination termination_ = Termination::Completed;
    std::vector<Step> steps_;  // sorted by lo
    std::vector<double> grid_;
    std::vector<HSState> states_;
    std::vector<double> sections_;
};

// Integrate from `initial` at s = s_begin towards s_end (either direction).
HSTrajectory integrate(const HSParams& p, HSState initial, double s_begin, double s_end,
                       const IntegratorOptions& opts = {});

// `initial` sits at s = 0; integrate backwards to s_back (< 0) and forwards to s_fwd (> 0).
HSTrajectory integrate_two_sided(const HSParams& p, HSState initial, double s_back, double s_fwd,
                                 const IntegratorOptions& opts = {});

enum class EnergyTag { FixedPoint, TypeI, TypeII, TypeIII, Critical };
std::string to_string(EnergyTag t);

struct EnergyClass {
    double E = 0.0;
    double E0 = 0.0;
    std::vector<EnergyTag> components;
    bool has(EnergyTag t) const;
};

EnergyClass classify(const HSParams& p, double E);

// Orbit through a given state; `bounded` tells the two components of
// the levels E0 <= E < 0 apart.
struct OrbitClass {
    EnergyTag tag;
    bool bounded = false;
    double E = 0.0;
};
OrbitClass classify_state(const HSParams& p, const HSState& y);

// Distance in the (alpha mod 2pi, r) plane to the fixed point.
double distance_to_fixed_point(const HSParams& p, const HSState& y);

struct InflectionLocus {
    HSParams params;
    double r1 = 0.0;
    double E1 = 0.0;
    // Locus radius for sin(alpha) > 0.
    double radius_at(double alpha) const;
};
InflectionLocus inflection_locus(const HSParams& p);

struct InflectionReport {
    std::vector<double> s;         // sign changes of k
    bool identically_zero = false;  // |k| below 1e-9 on every sample
    double max_abs_k = 0.0;
};
InflectionReport count_inflections(const HSTrajectory& traj);

// On a level E in (E0, 0) with sin(alpha) > 0 there are two radii; the
// smaller belongs to the bounded component. For sin(alpha) <= 0 the radius
// is unique.
enum class Branch { Smaller, Larger };
double radius_on_level(const HSParams& p, double E, double alpha, Branch branch = Branch::Smaller);

}  // namespace sigma
