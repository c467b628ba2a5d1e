#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "sigma/foliation_core.hpp"
#include "sigma/linalg.hpp"
#include "sigma/profile_curves.hpp"

namespace sigma {

struct FDConfig {
    double h_first = 1e-5;
    double h_second = 1e-3;
    void validate() const;
};

// Any map (s, x) -> C^n over the same parameter space as a spec; lets the
// oracles run on deliberately broken immersions too.
struct Immersion {
    int n = 3;
    Interval domain;
    std::function<ComplexPoint(double, const Vec&)> map;
    std::string name;
};
Immersion immersion_of(const FoliatedSpec& spec);
// Negative control: the imaginary part is rotated by a fixed angle in the (e1, e2) plane.
Immersion corrupt_im_rotation(const FoliatedSpec& spec, double angle);

struct SamplePoint {
    double s = 0;
    Vec x;
};
struct SamplePlan {
    std::vector<SamplePoint> points;
};
// Scrambled Halton points: s uniform in the domain shrunk by `margin`, x on the sphere.
SamplePlan make_sample_plan(int n, Interval domain, int count, std::uint64_t seed, double margin = 0.05);

struct ResidualReport {
    double sup = 0;
    double rms = 0;
    SamplePoint witness;
    int samples = 0;
    int skipped = 0;
    void add(double value, const SamplePoint& at);
    void finish();
};

// Chart (s, u) -> l(s, cos|u| x + sin|u| u/|u|), u in span(v_j).
struct FDTangents {
    std::vector<ComplexPoint> t;  // d/ds, then the v_j directions
    bool one_sided = false;
};
FDTangents fd_tangents(const Immersion& imm, double s, const Vec& x, const FDConfig& cfg = {});
FDTangents fd_tangents(const FoliatedSpec& spec, double s, const Vec& x, const FDConfig& cfg = {});

// Gram matrix of FD tangents, basis (d/ds, v_j).
Mat oracle_metric(const FoliatedSpec& spec, double s, const Vec& x, const FDConfig& cfg = {});
// det_C of the FD unitary frame (sphere directions first normalised, d/ds orthogonalised last).
std::complex<double> oracle_det_frame(const FoliatedSpec& spec, double s, const Vec& x, const FDConfig& cfg = {});

ResidualReport check_lagrangian(const Immersion& imm, const SamplePlan& plan, const FDConfig& cfg = {});

struct MeanCurvatureFD {
    double a = 0;
    Vec aj;
    ComplexPoint nJH;
    ComplexPoint nH;
    double symmetry_defect = 0;  // max |C_abc - C_sigma(abc)|
};
MeanCurvatureFD oracle_mean_curvature(const FoliatedSpec& spec, double s, const Vec& x, const FDConfig& cfg = {});

struct LaplaceBeltramiFD {
    double value = 0;  // Richardson combination of the two outer steps
    double coarse = 0;
    double fine = 0;
    double error_estimate = 0;
    double condition = 0;  // of the chart metric at the centre
};
LaplaceBeltramiFD oracle_laplace_beltrami_beta(const FoliatedSpec& spec, double s, const Vec& x,
                                               const FDConfig& cfg = {});

// |grad beta| from FD of the closed-form angle.
ResidualReport residual_special_lagrangian(const FoliatedSpec& spec, const SamplePlan& plan, const FDConfig& cfg = {});
ResidualReport residual_self_similar(const FoliatedSpec& spec, double lambda, const SamplePlan& plan,
                                     const FDConfig& cfg = {});
ResidualReport residual_translator(const FoliatedSpec& spec, const ComplexPoint& V, const SamplePlan& plan,
                                   const FDConfig& cfg = {});

struct StarInstance {
    Vec b;
    Mat B;  // symmetric
};
struct StarVerdict {
    bool holds = true;
    Vec x, xi;
    double violation = 0;
    int pairs_tested = 0;
};
StarVerdict check_star_condition(const StarInstance& inst, double r, int samples, std::uint64_t seed = 1);
// b = 0 and B a multiple of the identity, both to tol.
bool star_structure_holds(const StarInstance& inst, double tol = 1e-10);

// One row of the verification report; tolerances are relative to max(1, |reference|).
struct CheckResult {
    std::string check;
    bool pass = false;
    double sup = 0, rms = 0, tol = 0;
    SamplePoint witness;
    int samples = 0;
    int skipped = 0;
};
// Closed forms of foliation_core against the oracles above on one plan.
std::vector<CheckResult> verify_spec(const FoliatedSpec& spec, const SamplePlan& plan, const FDConfig& cfg = {});

// Random test specimens: polynomial turning angle on [-1, 1], |gamma| >= 0.5,
// polynomial center velocity with |W| < 0.7 (or W = 0 when centered).
FoliatedSpec random_spec(int n, std::uint64_t seed, bool centered = false);

}  // namespace sigma
