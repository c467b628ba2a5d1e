#include "sigma/oracle_verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include <boost/math/special_functions/erf.hpp>

#include "sigma/errors.hpp"

namespace sigma {

namespace {

constexpr double kPi = std::numbers::pi;

// Point on the sphere reached from x along the geodesic with initial velocity u.
Vec sphere_exp(const Vec& x, const Vec& u) {
    const double nu = u.norm();
    if (nu == 0.0) return x;
    return std::cos(nu) * x + (std::sin(nu) / nu) * u;
}

// Normal-coordinate chart around (s0, x0): p = (ds, u_2..u_n).
struct Chart {
    const Immersion& imm;
    double s0;
    TangentFrame frame;

    Chart(const Immersion& i, double s, const Vec& x) : imm(i), s0(s), frame(tangent_frame(x)) {}

    Vec direction(const Vec& p) const {
        Vec u = Vec::Zero(frame.x.size());
        for (Eigen::Index j = 1; j < p.size(); ++j) u += p(j) * frame.v[j - 1];
        return sphere_exp(frame.x, u);
    }
    Vec point(const Vec& p) const { return imm.map(s0 + p(0), direction(p)).flat(); }
};

void require_stencil(const Immersion& imm, double s, double reach, const char* what) {
    if (s - reach < imm.domain.lo || s + reach > imm.domain.hi)
        throw DomainError(std::string(what) + ": finite-difference stencil leaves the domain");
}

// Columns: d/dp_i of the chart point.
Mat chart_jacobian(const Chart& c, const Vec& p, double h) {
    const auto n = p.size();
    Mat T(2 * n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        Vec e = Vec::Zero(n);
        e(i) = h;
        T.col(i) = (c.point(p + e) - c.point(p - e)) / (2 * h);
    }
    return T;
}

Vec J_flat(const Vec& v) {
    const auto n = v.size() / 2;
    Vec out(2 * n);
    out << -v.tail(n), v.head(n);
    return out;
}

// Orthonormal basis of the tangent plane ordered like the closed-form frame:
// sphere directions normalised, then d/ds orthogonalised against them.
Mat fd_unitary_frame(const Mat& T) {
    const auto n = T.cols();
    Mat E(T.rows(), n);
    for (Eigen::Index j = 1; j < n; ++j) {
        Vec v = T.col(j);
        for (Eigen::Index k = 1; k < j; ++k) v -= E.col(k).dot(v) * E.col(k);
        E.col(j) = v.normalized();
    }
    Vec t = T.col(0);
    for (Eigen::Index j = 1; j < n; ++j) t -= E.col(j).dot(t) * E.col(j);
    E.col(0) = t.normalized();
    return E;
}

double wrap_pi(double a) { return std::remainder(a, 2 * kPi); }

// Radical inverse in base b.
double radical_inverse(std::uint64_t i, unsigned b) {
    double f = 1.0, r = 0.0;
    while (i > 0) {
        f /= b;
        r += f * static_cast<double>(i % b);
        i /= b;
    }
    return r;
}

constexpr std::array<unsigned, 10> kPrimes{2, 3, 5, 7, 11, 13, 17, 19, 23, 29};

}  // namespace

void FDConfig::validate() const {
    if (!(h_first > 0 && h_first < 1e-2)) throw ValidationError("FDConfig: h_first must lie in (0, 1e-2)");
    if (!(h_second > 0)) throw ValidationError("FDConfig: h_second must be positive");
}

Immersion immersion_of(const FoliatedSpec& spec) {
    return {spec.n(), spec.domain(), [spec](double s, const Vec& x) { return eval_immersion(spec, s, x); },
            spec.name()};
}

Immersion corrupt_im_rotation(const FoliatedSpec& spec, double angle) {
    const double c = std::cos(angle), sn = std::sin(angle);
    return {spec.n(), spec.domain(),
            [spec, c, sn](double s, const Vec& x) {
                ComplexPoint p = eval_immersion(spec, s, x);
                const double a = p.im(0), b = p.im(1);
                p.im(0) = c * a - sn * b;
                p.im(1) = sn * a + c * b;
                return p;
            },
            spec.name() + "+corrupted"};
}

SamplePlan make_sample_plan(int n, Interval domain, int count, std::uint64_t seed, double margin) {
    if (count < 0 || n < 2) throw ValidationError("make_sample_plan: bad arguments");
    if (static_cast<std::size_t>(n + 1) > kPrimes.size()) throw ValidationError("make_sample_plan: n too large");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::vector<double> shift(n + 1);
    for (auto& v : shift) v = U(rng);
    const double lo = domain.lo + margin * domain.length();
    const double hi = domain.hi - margin * domain.length();
    SamplePlan plan;
    for (int i = 0; i < count; ++i) {
        std::vector<double> q(n + 1);
        for (int d = 0; d <= n; ++d) {
            double v = radical_inverse(static_cast<std::uint64_t>(i + 1), kPrimes[d]) + shift[d];
            v -= std::floor(v);
            q[d] = std::clamp(v, 1e-12, 1 - 1e-12);
        }
        SamplePoint sp;
        sp.s = lo + (hi - lo) * q[0];
        sp.x = Vec(n);
        for (int d = 0; d < n; ++d) sp.x(d) = std::sqrt(2.0) * boost::math::erf_inv(2 * q[d + 1] - 1);
        if (sp.x.norm() < 1e-8) sp.x = Vec::Unit(n, 0);
        sp.x.normalize();
        plan.points.push_back(sp);
    }
    return plan;
}

void ResidualReport::add(double value, const SamplePoint& at) {
    if (samples == 0 || value > sup) {
        sup = value;
        witness = at;
    }
    rms += value * value;
    ++samples;
}

void ResidualReport::finish() { rms = samples ? std::sqrt(rms / samples) : 0.0; }

FDTangents fd_tangents(const Immersion& imm, double s, const Vec& x, const FDConfig& cfg) {
    cfg.validate();
    const double h = cfg.h_first;
    if (!imm.domain.contains(s)) throw DomainError("fd_tangents: s outside the domain");
    Chart c(imm, s, x);
    const int n = imm.n;
    FDTangents out;
    auto at = [&](double ds) {
        Vec p = Vec::Zero(n);
        p(0) = ds;
        return c.point(p);
    };
    Vec ts;
    if (s - h >= imm.domain.lo && s + h <= imm.domain.hi) {
        ts = (at(h) - at(-h)) / (2 * h);
    } else {
        out.one_sided = true;
        const double d = (s + 2 * h <= imm.domain.hi) ? h : -h;
        ts = (-3 * at(0) + 4 * at(d) - at(2 * d)) / (2 * d);
    }
    out.t.push_back(ComplexPoint::from_flat(ts));
    for (int j = 1; j < n; ++j) {
        Vec e = Vec::Zero(n);
        e(j) = h;
        out.t.push_back(ComplexPoint::from_flat((c.point(e) - c.point(-e)) / (2 * h)));
    }
    return out;
}

FDTangents fd_tangents(const FoliatedSpec& spec, double s, const Vec& x, const FDConfig& cfg) {
    return fd_tangents(immersion_of(spec), s, x, cfg);
}

Mat oracle_metric(const FoliatedSpec& spec, double s, const Vec& x, const FDConfig& cfg) {
    const auto t = fd_tangents(spec, s, x, cfg);
    const auto n = t.t.size();
    Mat g(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) g(i, j) = dot(t.t[i], t.t[j]);
    return g;
}

std::complex<double> oracle_det_frame(const FoliatedSpec& spec, double s, const Vec& x, const FDConfig& cfg) {
    const auto t = fd_tangents(spec, s, x, cfg);
    Mat T(2 * spec.n(), spec.n());
    for (int i = 0; i < spec.n(); ++i) T.col(i) = t.t[i].flat();
    const Mat E = fd_unitary_frame(T);
    std::vector<ComplexPoint> cols;
    for (int i = 0; i < spec.n(); ++i) cols.push_back(ComplexPoint::from_flat(E.col(i)));
    return det_c(cols);
}

ResidualReport check_lagrangian(const Immersion& imm, const SamplePlan& plan, const FDConfig& cfg) {
    ResidualReport rep;
    for (const auto& sp : plan.points) {
        const auto t = fd_tangents(imm, sp.s, sp.x, cfg);
        double worst = 0;
        for (std::size_t a = 0; a < t.t.size(); ++a)
            for (std::size_t b = a + 1; b < t.t.size(); ++b) worst = std::max(worst, std::abs(omega(t.t[a], t.t[b])));
        rep.add(worst, sp);
    }
    rep.finish();
    return rep;
}

MeanCurvatureFD oracle_mean_curvature(const FoliatedSpec& spec, double s, const Vec& x, const FDConfig& cfg) {
    cfg.validate();
    const Immersion imm = immersion_of(spec);
    const double h2 = cfg.h_second;
    require_stencil(imm, s, h2, "oracle_mean_curvature");
    if (!(spec.curve().jet(s).r > 10 * h2)) throw SingularityError("oracle_mean_curvature: too close to r = 0");
    Chart c(imm, s, x);
    const int n = spec.n();
    const Vec p0 = Vec::Zero(n);
    const Mat T = chart_jacobian(c, p0, cfg.h_first);
    const Vec L0 = c.point(p0);
    // Second derivatives of the chart.
    std::vector<std::vector<Vec>> H(n, std::vector<Vec>(n));
    for (int i = 0; i < n; ++i) {
        Vec ei = Vec::Zero(n);
        ei(i) = h2;
        H[i][i] = (c.point(ei) - 2 * L0 + c.point(-ei)) / (h2 * h2);
        for (int j = 0; j < i; ++j) {
            Vec ej = Vec::Zero(n);
            ej(j) = h2;
            H[i][j] = H[j][i] =
                (c.point(ei + ej) - c.point(ei - ej) - c.point(-ei + ej) + c.point(-ei - ej)) / (4 * h2 * h2);
        }
    }
    const Mat g = T.transpose() * T;
    const Mat ginv = g.inverse();
    Vec trace = Vec::Zero(2 * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) trace += ginv(i, j) * H[i][j];
    const Mat E = fd_unitary_frame(T);
    MeanCurvatureFD out;
    Vec nH = Vec::Zero(2 * n);
    Vec nJH = Vec::Zero(2 * n);
    for (int a = 0; a < n; ++a) {
        const Vec JE = J_flat(E.col(a));
        const double coef = trace.dot(JE);
        nH += coef * JE;
        nJH -= coef * E.col(a);
    }
    out.nH = ComplexPoint::from_flat(nH);
    out.nJH = ComplexPoint::from_flat(nJH);
    out.a = nJH.dot(E.col(0));
    out.aj = Vec(n - 1);
    for (int j = 1; j < n; ++j) out.aj(j - 1) = nJH.dot(E.col(j));

    // C_abc = <h(E_a, E_b), J E_c>; chart coefficients of E_a are M = g^{-1} T^T E.
    const Mat M = ginv * T.transpose() * E;
    std::vector<double> C(n * n * n);
    auto idx = [n](int a, int b, int cc) { return (a * n + b) * n + cc; };
    for (int cc = 0; cc < n; ++cc) {
        const Vec JE = J_flat(E.col(cc));
        Mat P(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) P(i, j) = H[i][j].dot(JE);
        const Mat Cab = M.transpose() * P * M;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) C[idx(a, b, cc)] = Cab(a, b);
    }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int cc = 0; cc < n; ++cc) {
                const double v = C[idx(a, b, cc)];
                for (double w : {C[idx(a, cc, b)], C[idx(b, a, cc)], C[idx(cc, b, a)]})
                    out.symmetry_defect = std::max(out.symmetry_defect, std::abs(v - w));
            }
    return out;
}

LaplaceBeltramiFD oracle_laplace_beltrami_beta(const FoliatedSpec& spec, double s, const Vec& x,
                                               const FDConfig& cfg) {
    cfg.validate();
    const Immersion imm = immersion_of(spec);
    const double h = cfg.h_first;
    const double H = 2 * cfg.h_second;
    require_stencil(imm, s, H + 2 * h, "oracle_laplace_beltrami_beta");
    Chart c(imm, s, x);
    const int n = spec.n();
    auto beta = [&](const Vec& p) { return lagrangian_angle(spec, s + p(0), c.direction(p)); };
    // Flux density sqrt(g) g^{ij} d_j beta at a chart point.
    auto flux = [&](const Vec& p, double* sqrt_g, double* cond) {
        const Mat T = chart_jacobian(c, p, h);
        Vec db(n);
        for (int i = 0; i < n; ++i) {
            Vec e = Vec::Zero(n);
            e(i) = h;
            db(i) = wrap_pi(beta(p + e) - beta(p - e)) / (2 * h);
        }
        const Mat g = T.transpose() * T;
        Eigen::LDLT<Mat> ldlt(g);
        const double sg = std::sqrt(g.determinant());
        if (sqrt_g) *sqrt_g = sg;
        if (cond) {
            Eigen::SelfAdjointEigenSolver<Mat> es(g);
            *cond = es.eigenvalues().maxCoeff() / es.eigenvalues().minCoeff();
        }
        return Vec(sg * ldlt.solve(db));
    };
    LaplaceBeltramiFD out;
    double sg0 = 0;
    flux(Vec::Zero(n), &sg0, &out.condition);
    if (!(out.condition < 1e12)) throw NumericError("oracle_laplace_beltrami_beta: chart metric degenerate");
    auto divergence = [&](double step) {
        double div = 0;
        for (int i = 0; i < n; ++i) {
            Vec e = Vec::Zero(n);
            e(i) = step;
            div += (flux(e, nullptr, nullptr)(i) - flux(-e, nullptr, nullptr)(i)) / (2 * step);
        }
        return -div / sg0;
    };
    out.coarse = divergence(H);
    out.fine = divergence(H / 2);
    out.value = (4 * out.fine - out.coarse) / 3;
    out.error_estimate = std::abs(out.fine - out.coarse) / 3;
    return out;
}

ResidualReport residual_special_lagrangian(const FoliatedSpec& spec, const SamplePlan& plan, const FDConfig& cfg) {
    cfg.validate();
    const Immersion imm = immersion_of(spec);
    const double h = cfg.h_first;
    ResidualReport rep;
    for (const auto& sp : plan.points) {
        try {
            require_stencil(imm, sp.s, 2 * h, "residual_special_lagrangian");
            Chart c(imm, sp.s, sp.x);
            const int n = spec.n();
            const Mat T = chart_jacobian(c, Vec::Zero(n), h);
            Vec db(n);
            for (int i = 0; i < n; ++i) {
                Vec e = Vec::Zero(n);
                e(i) = h;
                const double bp = lagrangian_angle(spec, sp.s + e(0), c.direction(e));
                const double bm = lagrangian_angle(spec, sp.s - e(0), c.direction(-e));
                db(i) = wrap_pi(bp - bm) / (2 * h);
            }
            const Mat g = T.transpose() * T;
            rep.add(std::sqrt(std::max(0.0, db.dot(g.ldlt().solve(db)))), sp);
        } catch (const UndefinedAngleError&) {
            ++rep.skipped;
        }
    }
    rep.finish();
    return rep;
}

namespace {

template <class F>
ResidualReport normal_residual(const FoliatedSpec& spec, const SamplePlan& plan, const FDConfig& cfg, F&& field) {
    ResidualReport rep;
    const Immersion imm = immersion_of(spec);
    for (const auto& sp : plan.points) {
        const MeanCurvatureFD mc = oracle_mean_curvature(spec, sp.s, sp.x, cfg);
        Chart c(imm, sp.s, sp.x);
        const Mat E = fd_unitary_frame(chart_jacobian(c, Vec::Zero(spec.n()), cfg.h_first));
        const Vec target = field(sp);
        Vec perp = Vec::Zero(2 * spec.n());
        for (int a = 0; a < spec.n(); ++a) {
            const Vec JE = J_flat(E.col(a));
            perp += target.dot(JE) * JE;
        }
        const Vec Hvec = mc.nH.flat() / spec.n();
        rep.add((Hvec - perp).norm(), sp);
    }
    rep.finish();
    return rep;
}

}  // namespace

ResidualReport residual_self_similar(const FoliatedSpec& spec, double lambda, const SamplePlan& plan,
                                     const FDConfig& cfg) {
    // H + lambda X^perp = H - (-lambda X)^perp.
    return normal_residual(spec, plan, cfg,
                           [&](const SamplePoint& sp) { return Vec(-lambda * eval_immersion(spec, sp.s, sp.x).flat()); });
}

ResidualReport residual_translator(const FoliatedSpec& spec, const ComplexPoint& V, const SamplePlan& plan,
                                   const FDConfig& cfg) {
    if (V.dim() != spec.n()) throw ValidationError("residual_translator: V has the wrong dimension");
    const Vec v = V.flat();
    return normal_residual(spec, plan, cfg, [&](const SamplePoint&) { return v; });
}

StarVerdict check_star_condition(const StarInstance& inst, double r, int samples, std::uint64_t seed) {
    const auto n = inst.b.size();
    if (inst.B.rows() != n || inst.B.cols() != n) throw ValidationError("StarInstance: shape mismatch");
    if ((inst.B - inst.B.transpose()).cwiseAbs().maxCoeff() > 1e-12) throw ValidationError("StarInstance: B not symmetric");
    if (!(r > 0)) throw ValidationError("check_star_condition: r must be positive");
    if (samples < n * n) throw ValidationError("check_star_condition: need at least n^2 samples");
    StarVerdict v;
    auto test = [&](const Vec& x, const Vec& xi) {
        ++v.pairs_tested;
        const double val = inst.b.dot(xi) + r * (inst.B * x).dot(xi);
        if (std::abs(val) > 1e-10) {
            v.holds = false;
            v.x = x;
            v.xi = xi;
            v.violation = val;
            return true;
        }
        return false;
    };
    // Axis pairs and their 45-degree rotations detect b and the shape of B directly.
    for (Eigen::Index i = 0; i < n && v.pairs_tested < samples; ++i)
        for (Eigen::Index j = 0; j < n && v.pairs_tested < samples; ++j) {
            if (i == j) continue;
            const Vec ei = Vec::Unit(n, i), ej = Vec::Unit(n, j);
            if (test(ei, ej)) return v;
            if (i < j && test((ei + ej) / std::sqrt(2.0), (ei - ej) / std::sqrt(2.0))) return v;
        }
    const SamplePlan plan = make_sample_plan(static_cast<int>(n), {0.0, 1.0}, 2 * samples, seed, 0.0);
    for (std::size_t k = 0; k + 1 < plan.points.size() && v.pairs_tested < samples; k += 2) {
        const Vec& x = plan.points[k].x;
        Vec xi = plan.points[k + 1].x - plan.points[k + 1].x.dot(x) * x;
        if (xi.norm() < 1e-6) continue;
        if (test(x, xi.normalized())) return v;
    }
    return v;
}

bool star_structure_holds(const StarInstance& inst, double tol) {
    if (inst.b.norm() >= tol) return false;
    const auto n = inst.B.rows();
    double off = 0;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            if (i != j) off = std::max(off, std::abs(inst.B(i, j)));
    const Vec d = inst.B.diagonal();
    return off + (d.maxCoeff() - d.minCoeff()) < tol;
}

std::vector<CheckResult> verify_spec(const FoliatedSpec& spec, const SamplePlan& plan, const FDConfig& cfg) {
    struct Acc {
        ResidualReport rep;
        double tol;
    };
    std::map<std::string, Acc> acc{{"lagrangian", {{}, 1e-8}},          {"metric", {{}, 1e-6}},
                                   {"frame_orthonormality", {{}, 1e-9}}, {"lagrangian_angle", {{}, 1e-6}},
                                   {"mean_curvature", {{}, 1e-4}},       {"c_symmetry", {{}, 1e-4}},
                                   {"delta_beta", {{}, 1e-3}}};
    const std::vector<std::string> order{"lagrangian", "metric", "frame_orthonormality", "lagrangian_angle",
                                         "mean_curvature", "c_symmetry", "delta_beta"};
    const Immersion imm = immersion_of(spec);
    const int n = spec.n();
    for (const auto& sp : plan.points) {
        const TangentFrame fr = tangent_frame(sp.x);
        const FDTangents t = fd_tangents(imm, sp.s, sp.x, cfg);
        double om = 0;
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b) om = std::max(om, std::abs(omega(t.t[a], t.t[b])));
        acc["lagrangian"].rep.add(om, sp);

        const FrameData fd = orthonormal_frame(spec, sp.s, fr);
        const Mat g = fd.metric();
        Mat gfd(n, n);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) gfd(a, b) = dot(t.t[a], t.t[b]);
        acc["metric"].rep.add((g - gfd).norm() / std::max(1.0, g.norm()), sp);

        double ortho = 0;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) ortho = std::max(ortho, std::abs(dot(fd.e[a], fd.e[b]) - (a == b ? 1.0 : 0.0)));
        acc["frame_orthonormality"].rep.add(ortho, sp);

        try {
            const double beta = lagrangian_angle(spec, sp.s, sp.x);
            const double d = std::remainder(std::arg(oracle_det_frame(spec, sp.s, sp.x, cfg)) - beta, 2 * kPi);
            acc["lagrangian_angle"].rep.add(std::abs(d), sp);

            const CurvatureData cd = mean_curvature_coeffs(spec, sp.s, fr);
            const MeanCurvatureFD mc = oracle_mean_curvature(spec, sp.s, sp.x, cfg);
            Vec ref(n), got(n);
            ref << cd.a, cd.aj;
            got << mc.a, mc.aj;
            acc["mean_curvature"].rep.add((ref - got).norm() / std::max(1.0, ref.norm()), sp);
            acc["c_symmetry"].rep.add(mc.symmetry_defect, sp);

            const double f6 = delta_beta_poly_f(spec, sp.s, sp.x).delta_beta;
            const LaplaceBeltramiFD lb = oracle_laplace_beltrami_beta(spec, sp.s, sp.x, cfg);
            acc["delta_beta"].rep.add(std::abs(f6 - lb.value) / std::max(1.0, std::abs(lb.value)), sp);
        } catch (const UndefinedAngleError&) {
            for (const char* k : {"lagrangian_angle", "mean_curvature", "c_symmetry", "delta_beta"}) ++acc[k].rep.skipped;
        }
    }
    std::vector<CheckResult> out;
    for (const auto& name : order) {
        Acc& a = acc[name];
        a.rep.finish();
        CheckResult c;
        c.check = name;
        c.sup = a.rep.sup;
        c.rms = a.rep.rms;
        c.tol = a.tol;
        c.witness = a.rep.witness;
        c.samples = a.rep.samples;
        c.skipped = a.rep.skipped;
        c.pass = a.rep.samples > 0 && a.rep.sup < a.tol;
        out.push_back(c);
    }
    return out;
}

FoliatedSpec random_spec(int n, std::uint64_t seed, bool centered) {
    std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + 17);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    std::normal_distribution<double> N(0.0, 1.0);
    const Interval dom{-1.0, 1.0};
    std::vector<double> th{kPi * (1 + U(rng)), U(rng), 0.5 * U(rng), 0.3 * U(rng)};
    const double rho = 2.0 + 0.5 * U(rng);
    const std::complex<double> g0 = std::polar(rho, kPi * U(rng));
    auto curve = std::make_shared<TurningAngleCurve>(th, g0, dom);
    std::shared_ptr<const CenterVelocity> center;
    if (centered) {
        center = std::make_shared<ZeroCenter>(n);
    } else {
        for (int attempt = 0;; ++attempt) {
            std::vector<Vec> coeffs;
            for (double scale : {0.25, 0.2, 0.15}) {
                Vec c(n);
                for (int i = 0; i < n; ++i) c(i) = scale * N(rng);
                coeffs.push_back(c);
            }
            auto pc = std::make_shared<PolynomialCenter>(coeffs);
            double worst = 0;
            for (int i = 0; i <= 40; ++i) worst = std::max(worst, pc->jet(-1.0 + i / 20.0).W.norm());
            if (worst < 0.7 || attempt > 100) {
                center = pc;
                break;
            }
        }
    }
    return FoliatedSpec(n, curve, center, 0.0, centered ? "random_centered" : "random");
}

}  // namespace sigma
