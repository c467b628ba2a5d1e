#include "sigma/foliation_core.hpp"

#include <cmath>
#include <numbers>

#include "sigma/errors.hpp"

namespace sigma {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap_2pi(double a) {
    double b = std::fmod(a, 2 * kPi);
    if (b < 0) b += 2 * kPi;
    if (b >= 2 * kPi) b = 0.0;
    return b;
}

void require_radius(double r, const char* what) {
    if (!(r > 0)) throw SingularityError(std::string(what) + ": r = 0");
}

}  // namespace

std::string to_string(FormulaVariant v) { return v == FormulaVariant::Geometric ? "geometric" : "alternate"; }

Vec normalize_direction(const Vec& x) {
    const double nx = x.norm();
    if (!(nx > 0) || !std::isfinite(nx)) throw ValidationError("sphere direction: zero or non-finite vector");
    return x / nx;
}

TangentFrame tangent_frame(const Vec& x_in) {
    if (x_in.size() < 2) throw ValidationError("tangent_frame: dimension must be >= 2");
    const Vec x = std::abs(x_in.norm() - 1.0) < 1e-12 ? x_in : normalize_direction(x_in);
    const auto n = x.size();
    // Reflection through u = x + e1 sends e1 to -x; its columns 2..n then
    // complete x with positive orientation. Close to x = -e1 use u = x - e1
    // (sends e1 to x) and flip the last column to keep the orientation.
    const bool flipped = x(0) < -0.9;
    Vec u = x;
    u(0) += flipped ? -1.0 : 1.0;
    const double uu = u.squaredNorm();
    TangentFrame f;
    f.x = x;
    for (Eigen::Index k = 1; k < n; ++k) {
        Vec v = Vec::Unit(n, k) - (2.0 * u(k) / uu) * u;
        f.v.push_back(v);
    }
    if (flipped) f.v.back() = -f.v.back();
    return f;
}

ComplexPoint eval_immersion(const FoliatedSpec& spec, double s, const Vec& x) {
    spec.require_in_domain(s);
    if (x.size() != spec.n()) throw ValidationError("eval_immersion: x has the wrong dimension");
    const ProfileJet j = spec.curve().jet(s);
    ComplexPoint p = rotate_real(j.phi, j.r * x);
    if (!spec.centered()) p += spec.center_integral(s);
    return p;
}

PointData point_data(const FoliatedSpec& spec, double s, const Vec& x) {
    spec.require_in_domain(s);
    PointData d;
    d.p = eval_profile(spec.curve(), s);
    d.c = spec.center().jet(s);
    d.w = d.c.W.dot(x);
    d.dw = d.c.dW.dot(x);
    d.ddw = d.c.ddW.dot(x);
    d.W2 = d.c.W.squaredNorm();
    d.WdW = d.c.dW.dot(d.c.W);
    return d;
}

Mat FrameData::metric() const {
    const auto m = g1j.size();
    Mat g = Mat::Zero(m + 1, m + 1);
    g(0, 0) = g11;
    for (Eigen::Index j = 0; j < m; ++j) {
        g(0, j + 1) = g(j + 1, 0) = g1j(j);
        g(j + 1, j + 1) = gjj;
    }
    return g;
}

Mat FrameData::frame_matrix() const {
    const auto m = g1j.size();
    const double r = std::sqrt(gjj);
    Mat E = Mat::Zero(m + 1, m + 1);
    E(0, 0) = A;
    for (Eigen::Index j = 0; j < m; ++j) {
        E(j + 1, 0) = A * Bj(j);
        E(j + 1, j + 1) = 1.0 / r;
    }
    return E;
}

FrameData induced_metric(const FoliatedSpec& spec, double s, const TangentFrame& frame) {
    spec.require_in_domain(s);
    const ProfileJet j = spec.curve().jet(s);
    const CenterJet c = spec.center().jet(s);
    const int n = spec.n();
    const double r = j.r;
    const double alpha = std::atan2(j.r * j.dphi, j.dr);
    const double w = c.W.dot(frame.x);
    FrameData fd;
    fd.g11 = 1.0 + c.W.squaredNorm() + 2.0 * std::cos(alpha) * w;
    fd.g1j = Vec(n - 1);
    for (int k = 0; k < n - 1; ++k) fd.g1j(k) = r * c.W.dot(frame.v[k]);
    fd.gjj = r * r;
    // l_s = e^{i theta} x + e^{i phi} W,  l_* v_j = r e^{i phi} v_j.
    fd.l_s = rotate_real(j.phi + alpha, frame.x) + rotate_real(j.phi, c.W);
    for (int k = 0; k < n - 1; ++k) fd.l_v.push_back(rotate_real(j.phi, r * frame.v[k]));
    return fd;
}

FrameData orthonormal_frame(const FoliatedSpec& spec, double s, const TangentFrame& frame) {
    FrameData fd = induced_metric(spec, s, frame);
    const ProfileJet j = spec.curve().jet(s);
    require_radius(j.r, "orthonormal_frame");
    const double alpha = std::atan2(j.r * j.dphi, j.dr);
    const CenterJet c = spec.center().jet(s);
    const double w = c.W.dot(frame.x);
    const double q = 1.0 + 2.0 * std::cos(alpha) * w + w * w;
    if (!(q > 0)) throw InternalError("orthonormal_frame: 1 + 2 cos(a) <W,x> + <W,x>^2 is not positive");
    fd.A = 1.0 / std::sqrt(q);
    const int m = spec.n() - 1;
    fd.Bj = Vec(m);
    for (int k = 0; k < m; ++k) fd.Bj(k) = -c.W.dot(frame.v[k]) / j.r;
    ComplexPoint e1 = fd.l_s;
    for (int k = 0; k < m; ++k) e1 += fd.l_v[k] * fd.Bj(k);
    fd.e.push_back(e1 * fd.A);
    for (int k = 0; k < m; ++k) fd.e.push_back(fd.l_v[k] * (1.0 / j.r));
    return fd;
}

double lagrangian_angle(const FoliatedSpec& spec, double s, const Vec& x) {
    spec.require_in_domain(s);
    const ProfileJet j = spec.curve().jet(s);
    const double alpha = std::atan2(j.r * j.dphi, j.dr);
    const double w = spec.center().jet(s).W.dot(x);
    const std::complex<double> z = std::polar(1.0, alpha) + w;
    if (std::abs(z) < 1e-14) throw UndefinedAngleError("lagrangian_angle: e^{i alpha} + <W,x> vanishes");
    return wrap_2pi(std::arg(z) + spec.n() * j.phi);
}

double unwrap_near(double angle, double previous) {
    return previous + std::remainder(angle - previous, 2 * std::numbers::pi);
}

double curvature_scalar_B(const PointData& d, FormulaVariant v) {
    const double r = d.p.r, k = d.p.k;
    require_radius(r, "curvature_scalar_B");
    const double sa = std::sin(d.p.alpha), ca = std::cos(d.p.alpha);
    const double lin = (k * ca + sa * ca / r) * d.w;
    if (v == FormulaVariant::Geometric) return k + lin - sa * d.dw + (sa / r) * d.W2;
    return k + lin + sa * d.dw + (sa / r) * d.w * d.w;
}

double curvature_scalar_B(const FoliatedSpec& spec, double s, const Vec& x, FormulaVariant v) {
    return curvature_scalar_B(point_data(spec, s, x), v);
}

double mean_curvature_bracket(const PointData& d, const Vec& Wv, FormulaVariant v) {
    const double r = d.p.r, k = d.p.k;
    require_radius(r, "mean_curvature_bracket");
    const double sa = std::sin(d.p.alpha), ca = std::cos(d.p.alpha);
    const double tangential = Wv.squaredNorm();
    if (v == FormulaVariant::Alternate) {
        // Sign-flipped <W',x> pairing; the tangential sums collapse to -|W|^2.
        const double ss_s = k + k * ca * d.w + sa * ca / r * d.w + sa * d.dw + sa / r * d.W2;
        return ss_s + sa / r * tangential - 2.0 * sa / r * tangential;
    }
    // Pairings of second derivatives along (d/ds, v_j) with J l_s and J l_* v_k.
    const double ss_s = k + k * ca * d.w + sa * ca / r * d.w - sa * d.dw + sa / r * d.W2;
    double acc = ss_s;
    for (Eigen::Index j = 0; j < Wv.size(); ++j) {
        const double ss_vj = sa * Wv(j);
        const double vjs_s = sa * Wv(j);
        const double vjs_vj = r * sa;
        const double vjvj_s = r * sa;
        acc -= Wv(j) / r * ss_vj;
        acc -= 2.0 * Wv(j) / r * (vjs_s - Wv(j) / r * vjs_vj);
        acc += Wv(j) * Wv(j) / (r * r) * vjvj_s;
    }
    return acc;
}

CurvatureData mean_curvature_coeffs(const FoliatedSpec& spec, double s, const TangentFrame& frame,
                                    FormulaVariant v) {
    const PointData d = point_data(spec, s, frame.x);
    const FrameData fd = orthonormal_frame(spec, s, frame);
    const int n = spec.n();
    const double r = d.p.r, sa = std::sin(d.p.alpha);
    Vec Wv(n - 1);
    for (int j = 0; j < n - 1; ++j) Wv(j) = d.c.W.dot(frame.v[j]);
    CurvatureData cd;
    cd.B = curvature_scalar_B(d, v);
    const double A = fd.A;
    cd.a = -A * A * A * mean_curvature_bracket(d, Wv, v) - (n - 1) * A * sa / r;
    cd.aj = A * A * sa / r * Wv;
    cd.nJH = fd.e[0] * cd.a;
    for (int j = 0; j < n - 1; ++j) cd.nJH += fd.e[j + 1] * cd.aj(j);
    if (d.p.dk) cd.f = delta_beta_blocks(delta_beta_inputs(d, n), v).f;
    return cd;
}

DeltaBetaInputs delta_beta_inputs(const PointData& d, int n) {
    if (!d.p.dk) throw ValidationError("Delta-beta polynomial needs the curvature derivative (curve not C^3 here)");
    DeltaBetaInputs in;
    in.n = n;
    in.r = d.p.r;
    in.alpha = d.p.alpha;
    in.k = d.p.k;
    in.dk = *d.p.dk;
    in.w = d.w;
    in.dw = d.dw;
    in.ddw = d.ddw;
    in.W2 = d.W2;
    in.WdW = d.WdW;
    return in;
}

DeltaBetaBlocks delta_beta_blocks(const DeltaBetaInputs& in, FormulaVariant v) {
    const int n = in.n;
    const double r = in.r, k = in.k, dk = in.dk;
    require_radius(r, "delta_beta_blocks");
    const double w = in.w, dw = in.dw, ddw = in.ddw, W2 = in.W2, WdW = in.WdW;
    const double sa = std::sin(in.alpha), ca = std::cos(in.alpha);
    const double da = k - sa / r;  // alpha'
    const double dr = ca;
    const bool geo = v == FormulaVariant::Geometric;

    DeltaBetaBlocks b;
    const double Am2 = 1.0 + 2.0 * ca * w + w * w;
    const double lin = k * ca + sa * ca / r;
    const double dlin = dk * ca - k * sa * da + std::cos(2 * in.alpha) * da / r - sa * ca * dr / (r * r);
    const double dsr = (ca * da * r - sa * dr) / (r * r);  // (sin a / r)'
    if (geo) {
        b.B = k + lin * w - sa * dw + sa / r * W2;
        b.dB = dk + dlin * w + lin * dw - ca * da * dw - sa * ddw + dsr * W2 + 2.0 * sa / r * WdW;
    } else {
        b.B = k + lin * w + sa * dw + sa / r * w * w;
        b.dB = dk + dlin * w + lin * dw + ca * da * dw + sa * ddw + dsr * w * w + 2.0 * sa / r * w * dw;
    }
    const double D = ca * dw - da * sa * w + w * dw;
    const double P = W2 - w * w;
    b.I = 3.0 * b.B * D - Am2 * (b.dB - (n - 1) * sa / r * D) - Am2 * Am2 * (n - 1) * dsr;
    const double inner_w = geo ? (n - 1) : (n - 3);
    const double twist = geo ? -sa * (WdW - dw * w) : sa * (WdW - dw * w);
    b.II = -3.0 * b.B * (ca + w) / r * P +
           Am2 / r * ((k * ca - (n - 2) * sa * ca / r - inner_w * sa / r * w) * P + twist);
    b.III = -Am2 * sa / (r * r) * (ca + w) * P - Am2 * Am2 * (n - 1) * sa / (r * r) * w;
    b.IV = -Am2 * b.B * (n - 1) / r * (ca + w) - Am2 * Am2 * (n - 1) * (n - 1) * sa / (r * r) * (ca + w);
    b.f = b.I + b.II + b.III + b.IV;
    b.A = 1.0 / std::sqrt(Am2);
    b.delta_beta = b.f / (Am2 * Am2 * Am2);
    return b;
}

DeltaBetaBlocks delta_beta_poly_f(const FoliatedSpec& spec, double s, const Vec& x, FormulaVariant v) {
    const PointData d = point_data(spec, s, x);
    return delta_beta_blocks(delta_beta_inputs(d, spec.n()), v);
}

double delta_beta_centered(const FoliatedSpec& spec, double s) {
    const ProfileState p = eval_profile(spec.curve(), s);
    if (!p.dk) throw ValidationError("delta_beta_centered: curve has no curvature derivative");
    const int n = spec.n();
    const double r = p.r, sa = std::sin(p.alpha), ca = std::cos(p.alpha);
    const double da = p.k - sa / r;
    // beta = alpha + n phi, so beta' = k + (n-1) sin(a)/r.
    const double db = p.k + (n - 1) * sa / r;
    const double ddb = *p.dk + (n - 1) * (ca * da * r - sa * ca) / (r * r);
    return -ddb - (n - 1) * ca / r * db;
}

AccelCoefficientCheck accel_coefficient_check(const DeltaBetaInputs& in, FormulaVariant v) {
    // f is affine in <W'',x>: a symmetric two-point slope is exact up to rounding.
    DeltaBetaInputs lo = in, hi = in;
    lo.ddw = in.ddw - 0.5;
    hi.ddw = in.ddw + 0.5;
    AccelCoefficientCheck c;
    c.slope = delta_beta_blocks(hi, v).f - delta_beta_blocks(lo, v).f;
    const double sa = std::sin(in.alpha), ca = std::cos(in.alpha);
    c.expected = -(sa + 2.0 * sa * ca * in.w + sa * in.w * in.w);
    c.defect = std::abs(c.slope - c.expected);
    return c;
}

AccelCoefficientCheck accel_coefficient_check(const FoliatedSpec& spec, double s, const Vec& x, FormulaVariant v) {
    return accel_coefficient_check(delta_beta_inputs(point_data(spec, s, x), spec.n()), v);
}

LeadingTermFit leading_term_fit(int n, double r, double alpha, double wx, FormulaVariant v,
                                   const LeadingTermOptions& opt) {
    if (n < 3) throw ValidationError("leading_term_fit: n must be >= 3");
    if (std::sin(alpha) == 0.0) throw ValidationError("leading_term_fit: needs sin(alpha) != 0");
    if (wx == 0.0) throw ValidationError("leading_term_fit: needs <w,x> != 0");
    const int m = opt.points;
    Vec t(m), y(m);
    for (int i = 0; i < m; ++i) {
        t(i) = opt.t0 * std::pow(opt.ratio, i);
        DeltaBetaInputs in;
        in.n = n;
        in.r = r;
        in.alpha = alpha;
        in.k = opt.k;
        in.dk = opt.dk;
        in.w = t(i) * wx;
        in.W2 = opt.W2;
        y(i) = delta_beta_blocks(in, v).f;
    }
    // Column-scaled Vandermonde least squares.
    auto fit = [&](int deg, Vec& coef, double& cond) {
        Mat V(m, deg + 1);
        Vec scale(deg + 1);
        for (int c = 0; c <= deg; ++c) {
            for (int i = 0; i < m; ++i) V(i, c) = std::pow(t(i), c);
            scale(c) = V.col(c).norm();
            V.col(c) /= scale(c);
        }
        Eigen::JacobiSVD<Mat> svd(V, Eigen::ComputeThinU | Eigen::ComputeThinV);
        cond = svd.singularValues()(0) / svd.singularValues()(deg);
        coef = svd.solve(y);
        const double res = (V * coef - y).norm() / y.norm();
        coef = coef.cwiseQuotient(scale);
        return res;
    };
    LeadingTermFit out;
    Vec c5, c6;
    double cond6 = 0;
    out.fit_residual = fit(5, c5, out.condition);
    fit(6, c6, cond6);
    out.coefficients.assign(c5.data(), c5.data() + c5.size());
    out.leading = c5(5);
    const double sa = std::sin(alpha);
    out.expected = (-n * n + n + 2) * sa * std::pow(wx, 5) / (r * r);
    out.relative_error = std::abs(out.leading - out.expected) / std::abs(out.expected);
    out.sixth_order = std::abs(c6(6)) * std::pow(t(m - 1), 6) / y.cwiseAbs().maxCoeff();
    return out;
}

}  // namespace sigma
