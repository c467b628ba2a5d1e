#pragma once

#include <string>
#include <vector>

#include "sigma/linalg.hpp"
#include "sigma/profile_curves.hpp"

namespace sigma {

// Which closed form to use for the curvature scalar and the Delta-beta
// polynomial. `Geometric` is the one that agrees with the finite-difference
// second fundamental form and Laplace-Beltrami oracles. `Alternate` flips
// the sign of the <W',x> term and uses <W,x>^2 where the geometric form has
// |W|^2 (in B and in the second block of f); its <W'',x> slope and t^5
// leading term are what the coefficient checks below look at.
enum class FormulaVariant { Geometric, Alternate };
std::string to_string(FormulaVariant v);

// Unit vector; throws on the zero vector.
Vec normalize_direction(const Vec& x);

struct TangentFrame {
    Vec x;
    std::vector<Vec> v;  // n-1 vectors, {x, v...} positively oriented
};

// Householder completion: the reflection taking e1 to -x (or to x near x = -e1).
TangentFrame tangent_frame(const Vec& x);

ComplexPoint eval_immersion(const FoliatedSpec& spec, double s, const Vec& x);

// Scalars the closed forms are polynomial in, at one point (s, x).
struct PointData {
    ProfileState p;
    CenterJet c;
    double w = 0, dw = 0, ddw = 0;  // <W,x>, <W',x>, <W'',x>
    double W2 = 0, WdW = 0;         // |W|^2, <W',W>
};
PointData point_data(const FoliatedSpec& spec, double s, const Vec& x);

struct FrameData {
    double g11 = 0;
    Vec g1j;
    double gjj = 0;
    double A = 0;
    Vec Bj;
    ComplexPoint l_s;
    std::vector<ComplexPoint> l_v;  // push-forwards of v_j
    std::vector<ComplexPoint> e;    // push-forwards of the orthonormal frame e_1..e_n

    // Metric in the basis (d/ds, v_2..v_n).
    Mat metric() const;
    // Columns: e_a in the basis (d/ds, v_2..v_n).
    Mat frame_matrix() const;
};

FrameData induced_metric(const FoliatedSpec& spec, double s, const TangentFrame& frame);
FrameData orthonormal_frame(const FoliatedSpec& spec, double s, const TangentFrame& frame);

// Lagrangian angle in [0, 2 pi).
double lagrangian_angle(const FoliatedSpec& spec, double s, const Vec& x);
// Representative of `angle` mod 2 pi nearest to `previous`, for continuation along s.
double unwrap_near(double angle, double previous);

// Curvature scalar by its closed form.
double curvature_scalar_B(const FoliatedSpec& spec, double s, const Vec& x,
                          FormulaVariant v = FormulaVariant::Geometric);
double curvature_scalar_B(const PointData& d, FormulaVariant v);
// Same scalar, assembled from the pairings <l_ab, J l_c> of second derivatives.
double mean_curvature_bracket(const PointData& d, const Vec& Wv, FormulaVariant v);

struct CurvatureData {
    double B = 0;
    double a = 0;
    Vec aj;
    ComplexPoint nJH;  // a l_*e_1 + sum a_j l_*e_j
    double f = 0;
};

CurvatureData mean_curvature_coeffs(const FoliatedSpec& spec, double s, const TangentFrame& frame,
                                    FormulaVariant v = FormulaVariant::Geometric);

// Inputs of the Delta-beta polynomial.
struct DeltaBetaInputs {
    int n = 3;
    double r = 1, alpha = 0, k = 0, dk = 0;
    double w = 0, dw = 0, ddw = 0, W2 = 0, WdW = 0;
};
DeltaBetaInputs delta_beta_inputs(const PointData& d, int n);

struct DeltaBetaBlocks {
    double B = 0, dB = 0;
    double I = 0, II = 0, III = 0, IV = 0;
    double f = 0;
    double A = 0;
    double delta_beta = 0;  // A^6 f, non-negative spectrum convention
};

DeltaBetaBlocks delta_beta_blocks(const DeltaBetaInputs& in, FormulaVariant v = FormulaVariant::Geometric);
DeltaBetaBlocks delta_beta_poly_f(const FoliatedSpec& spec, double s, const Vec& x,
                                  FormulaVariant v = FormulaVariant::Geometric);

// Rotationally symmetric reduction -(r^{1-n}) (r^{n-1} beta')' for W = 0.
double delta_beta_centered(const FoliatedSpec& spec, double s);

// Slope of f in <W'',x> against the expected coefficient
// -(sin a)(1 + 2 cos a <W,x> + <W,x>^2).
struct AccelCoefficientCheck {
    double slope = 0;
    double expected = 0;
    double defect = 0;  // |slope - expected|
};
AccelCoefficientCheck accel_coefficient_check(const DeltaBetaInputs& in, FormulaVariant v);
AccelCoefficientCheck accel_coefficient_check(const FoliatedSpec& spec, double s, const Vec& x, FormulaVariant v);

// f evaluated along <W,x> = t * wx with |W|^2 and <W',W> held fixed and
// W' = W'' = 0; a degree-5 least-squares fit on a geometric ladder of t.
struct LeadingTermOptions {
    double k = 0.3, dk = -0.2;
    double W2 = 0.7;
    double t0 = 0.25, ratio = 1.4142135623730951;
    int points = 12;
};
struct LeadingTermFit {
    std::vector<double> coefficients;  // t^0..t^5
    double leading = 0;
    double expected = 0;  // (-n^2+n+2) sin(a) wx^5 / r^2
    double relative_error = 0;
    double fit_residual = 0;   // relative
    double sixth_order = 0;    // t^6 coefficient of a degree-6 fit, relative to the data
    double condition = 0;
};
LeadingTermFit leading_term_fit(int n, double r, double alpha, double wx, FormulaVariant v,
                                   const LeadingTermOptions& opt = {});

}  // namespace sigma
