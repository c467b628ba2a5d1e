#include "sigma/phase_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <unordered_map>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include "sigma/errors.hpp"

namespace sigma {

namespace {

constexpr double kPi = std::numbers::pi;
using GK = boost::math::quadrature::gauss_kronrod<double, 31>;

struct Piece {
    double value = 0, error = 0;
};

template <class F>
Piece gk(F&& f, double a, double b, double tol) {
    Piece p;
    p.value = GK::integrate(f, a, b, 20, tol, &p.error);
    return p;
}

template <class F>
double toms748(F&& g, double a, double b) {
    boost::math::tools::eps_tolerance<double> tol(50);
    std::uintmax_t it = 200;
    double fa = g(a), fb = g(b);
    if (fa == 0) return a;
    if (fb == 0) return b;
    if ((fa < 0) == (fb < 0)) throw NumericError("root not bracketed");
    auto r = boost::math::tools::toms748_solve(g, a, b, fa, fb, tol, it);
    return 0.5 * (r.first + r.second);
}

// ((1+u^2)^n - 1) / u^2
double power_excess(int n, double u) {
    const double u2 = u * u;
    if (u2 < 1e-8) return n + 0.5 * n * (n - 1) * u2;
    return std::expm1(n * std::log1p(u2)) / u2;
}

// int_0^inf g(u) du on [0,1], [1,2], [2,4], ... until an increment is below tail_tol.
template <class F>
Piece doubling(F&& g, const PhaseOptions& opt) {
    Piece total;
    double a = 0, b = 1;
    for (int k = 0; k < 200; ++k) {
        const Piece p = gk(g, a, b, opt.tol);
        total.value += p.value;
        total.error += p.error;
        if (!std::isfinite(total.value) || total.value > opt.cap) return total;
        if (std::abs(p.value) < opt.tail_tol && k > 2) {
            total.error += std::abs(p.value);  // the remaining tail is of the same order
            return total;
        }
        a = b;
        b *= 2;
    }
    throw NumericError("phase quadrature: tail did not settle");
}

double dphi_dalpha(const HSParams& p, double r, double alpha) {
    const double q = std::pow(r, p.n - 2) * std::sin(alpha);
    const double den = p.C - p.n * q;
    if (!(den > 0)) throw DomainError("alpha' changes sign on this piece; wrong component");
    return q / den;
}

PhaseResult divergent() {
    PhaseResult r;
    r.divergent = true;
    r.value = std::numeric_limits<double>::infinity();
    return r;
}

}  // namespace

double type1_lambda(const HSParams& p, double r0) {
    if (!(r0 > 0)) throw ValidationError("type1_lambda: r0 must be positive");
    return p.C / (2 * std::pow(r0, p.n - 2));
}

PhaseResult phi_type1_lambda(int n, double lambda, const PhaseOptions& opt) {
    if (n < 3) throw ValidationError("phi_type1: n >= 3 required");
    if (!(lambda >= 0)) throw ValidationError("phi_type1: lambda must be non-negative");
    if (lambda >= 0.5 * n - opt.lambda_margin) return divergent();
    // x = 1 + u^2 removes the inverse square root at x = 1.
    auto g = [&](double u) {
        const double u2 = u * u;
        const double x = 1 + u2;
        const double D = 1 + lambda * u2 * (2 + u2);
        const double G = power_excess(n, u) - lambda * (2 + u2);
        const double xn = std::pow(x, n);
        return 4 * D / (x * std::sqrt(G * (xn + D)));
    };
    const Piece pc = doubling(g, opt);
    if (!(pc.value <= opt.cap)) return divergent();
    PhaseResult r;
    r.value = pc.value;
    r.error_estimate = pc.error;
    return r;
}

PhaseResult phi_type1(const HSParams& p, double r0, const PhaseOptions& opt) {
    return phi_type1_lambda(p.n, type1_lambda(p, r0), opt);
}

double type1_min_radius(const HSParams& p, double E) {
    if (p.C == 0) {
        if (!(E > 0)) throw DomainError("type1_min_radius: needs E > 0 when C = 0");
        return std::pow(E / 2, 1.0 / p.n);
    }
    const auto fp = fixed_points(p);
    if (!(E > fp.E0)) throw DomainError("type1_min_radius: needs E > E0");
    auto g = [&](double r) { return 2 * std::pow(r, p.n) - p.C * r * r - E; };
    double hi = 2 * fp.state.r;
    while (g(hi) < 0) hi *= 2;
    return toms748(g, fp.state.r, hi);
}

double type2_r1(const HSParams& p, double E) {
    if (!(p.C > 0)) throw ValidationError("type II orbits need C > 0");
    if (!(E < critical_energy(p))) throw DomainError("type II orbits need E < E0");
    return std::sqrt(-E / p.C);
}

PhaseResult phi_type2(const HSParams& p, double r1, const PhaseOptions& opt) {
    if (!(p.C > 0)) throw ValidationError("type II orbits need C > 0");
    if (!(r1 > 0)) throw ValidationError("phi_type2: r1 must be positive");
    const double E = -p.C * r1 * r1;
    if (!(E < critical_energy(p))) throw DomainError("phi_type2: E = -C r1^2 must lie below E0");
    const int n = p.n;
    const double lambda = type1_lambda(p, r1);
    // Same substitution; here the numerator vanishes at u = 0 instead, so the
    // integrand is regular there.
    auto g = [&](double u) {
        const double u2 = u * u;
        const double x = 1 + u2;
        const double D = lambda * u2 * (2 + u2);
        const double xn = std::pow(x, n);
        const double lower = 1 + u2 * (power_excess(n, u) - lambda * (2 + u2));  // x^n - D
        if (!(lower > 0)) throw NumericError("phi_type2: level reaches sin(alpha) = 1");
        return 4 * u * D / (x * std::sqrt(lower * (xn + D)));
    };
    const Piece plus = doubling(g, opt);

    auto h = [&](double a) { return dphi_dalpha(p, radius_on_level(p, E, a), a); };
    const Piece minus = gk(h, kPi, 2 * kPi, opt.tol);

    PhaseResult r;
    r.plus = plus.value;
    r.minus = minus.value;
    r.value = plus.value + minus.value;
    r.error_estimate = plus.error + minus.error;
    if (!(plus.value <= opt.cap)) return divergent();
    return r;
}

PhaseResult phi_type2_energy(const HSParams& p, double E, const PhaseOptions& opt) {
    return phi_type2(p, type2_r1(p, E), opt);
}

PhaseResult phi_type3(const HSParams& p, double E, const PhaseOptions& opt) {
    if (!(p.C > 0)) throw ValidationError("type III orbits need C > 0");
    const double E0 = critical_energy(p);
    if (!(E > E0 && E < 0)) throw DomainError("phi_type3: needs E0 < E < 0");
    auto h = [&](double a) { return dphi_dalpha(p, radius_on_level(p, E, a, Branch::Smaller), a); };
    const Piece p1 = gk(h, kPi / 2, kPi, opt.tol);
    const Piece p2 = gk(h, 2 * kPi, 2.5 * kPi, opt.tol);
    const Piece m = gk(h, kPi, 2 * kPi, opt.tol);
    PhaseResult r;
    r.plus = p1.value + p2.value;
    r.minus = m.value;
    r.value = *r.plus + *r.minus;
    r.error_estimate = p1.error + p2.error + m.error;
    if (!(r.value <= opt.cap)) return divergent();
    return r;
}

PhaseResult phase_for_energy(const HSParams& p, double E, bool bounded, const PhaseOptions& opt) {
    if (p.C == 0) return phi_type1_lambda(p.n, 0.0, opt);
    const EnergyClass ec = classify(p, E);
    if (ec.has(EnergyTag::Critical)) return divergent();
    if (ec.has(EnergyTag::TypeII)) return phi_type2_energy(p, E, opt);
    if (bounded && ec.has(EnergyTag::TypeIII)) return phi_type3(p, E, opt);
    return phi_type1(p, type1_min_radius(p, E), opt);
}

// ---------------------------------------------------------------------------
// Self-intersections

namespace {

struct Node {
    double s, x, y, theta;
};

Node sample(const ProfileCurve& c, double s) {
    const ProfileJet j = c.jet(s);
    const std::complex<double> e = std::polar(1.0, j.phi);
    const std::complex<double> g = j.r * e;
    const std::complex<double> d = std::complex<double>(j.dr, j.r * j.dphi) * e;
    return {s, g.real(), g.imag(), std::arg(d)};
}

// Parameters (t, u) of the crossing of segments pq and ab, if proper.
bool segment_cross(const std::pair<double, double>& p, const std::pair<double, double>& q,
                   const std::pair<double, double>& a, const std::pair<double, double>& b, double* t, double* u) {
    const double rx = q.first - p.first, ry = q.second - p.second;
    const double sx = b.first - a.first, sy = b.second - a.second;
    const double den = rx * sy - ry * sx;
    if (den == 0) return false;  // parallel; not transverse
    const double qx = a.first - p.first, qy = a.second - p.second;
    const double tt = (qx * sy - qy * sx) / den;
    const double uu = (qx * ry - qy * rx) / den;
    if (tt < 0 || tt > 1 || uu < 0 || uu > 1) return false;
    if (t) *t = tt;
    if (u) *u = uu;
    return true;
}

}  // namespace

std::vector<std::pair<std::size_t, std::size_t>> polyline_self_intersections(
    const std::vector<std::pair<double, double>>& pts) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    if (pts.size() < 4) return out;
    const std::size_t m = pts.size() - 1;
    double cell = 0;
    for (std::size_t i = 0; i < m; ++i)
        cell = std::max(cell, std::hypot(pts[i + 1].first - pts[i].first, pts[i + 1].second - pts[i].second));
    if (cell == 0) return out;
    const bool closed = std::hypot(pts.front().first - pts.back().first, pts.front().second - pts.back().second) <
                        1e-9 * std::max(1.0, std::hypot(pts.front().first, pts.front().second));
    auto key = [](long i, long j) { return (static_cast<long long>(i) << 32) ^ static_cast<long long>(j & 0xffffffff); };
    std::unordered_map<long long, std::vector<std::size_t>> grid;
    for (std::size_t i = 0; i < m; ++i) {
        const auto [x0, x1] = std::minmax(pts[i].first, pts[i + 1].first);
        const auto [y0, y1] = std::minmax(pts[i].second, pts[i + 1].second);
        for (long a = std::lround(std::floor(x0 / cell)); a <= std::lround(std::floor(x1 / cell)); ++a)
            for (long b = std::lround(std::floor(y0 / cell)); b <= std::lround(std::floor(y1 / cell)); ++b)
                grid[key(a, b)].push_back(i);
    }
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const auto& [k, segs] : grid) {
        for (std::size_t a = 0; a < segs.size(); ++a)
            for (std::size_t b = a + 1; b < segs.size(); ++b) {
                std::size_t i = std::min(segs[a], segs[b]), j = std::max(segs[a], segs[b]);
                if (j <= i + 1) continue;
                if (closed && i == 0 && j == m - 1) continue;
                if (!seen.insert({i, j}).second) continue;
                if (segment_cross(pts[i], pts[i + 1], pts[j], pts[j + 1], nullptr, nullptr)) out.push_back({i, j});
            }
    }
    std::sort(out.begin(), out.end());
    return out;
}

SelfIntersectionReport detect_self_intersection(const ProfileCurve& curve, Interval span, double resolution) {
    if (!(resolution >= 2)) throw ValidationError("detect_self_intersection: resolution must be at least 2 per unit length");
    if (!(span.hi > span.lo)) throw ValidationError("detect_self_intersection: empty span");
    const Interval dom = curve.domain();
    if (span.lo < dom.lo || span.hi > dom.hi) throw DomainError("detect_self_intersection: span outside the curve domain");

    const auto steps = static_cast<std::size_t>(std::ceil(span.length() * resolution));
    std::vector<Node> nodes;
    nodes.reserve(steps + 1);
    for (std::size_t i = 0; i <= steps; ++i)
        nodes.push_back(sample(curve, i == steps ? span.hi : std::min(span.hi, span.lo + span.length() * i / steps)));
    // Refine where the tangent turns by more than 0.05 rad per segment.
    for (int pass = 0; pass < 20; ++pass) {
        std::vector<Node> next;
        next.reserve(nodes.size());
        bool changed = false;
        for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
            next.push_back(nodes[i]);
            const double dt = std::abs(std::remainder(nodes[i + 1].theta - nodes[i].theta, 2 * kPi));
            if (dt > 0.05 && nodes[i + 1].s - nodes[i].s > 1e-9) {
                next.push_back(sample(curve, 0.5 * (nodes[i].s + nodes[i + 1].s)));
                changed = true;
            }
        }
        next.push_back(nodes.back());
        nodes.swap(next);
        if (!changed) break;
    }

    std::vector<std::pair<double, double>> pts;
    pts.reserve(nodes.size());
    for (const auto& nd : nodes) pts.push_back({nd.x, nd.y});
    SelfIntersectionReport rep;
    rep.resolution = resolution;
    rep.segments = nodes.size() - 1;

    auto gamma = [&](double s) {
        const Node nd = sample(curve, s);
        return std::array<double, 4>{nd.x, nd.y, std::cos(nd.theta), std::sin(nd.theta)};
    };
    for (const auto& [i, j] : polyline_self_intersections(pts)) {
        double t = 0, u = 0;
        segment_cross(pts[i], pts[i + 1], pts[j], pts[j + 1], &t, &u);
        double s1 = nodes[i].s + t * (nodes[i + 1].s - nodes[i].s);
        double s2 = nodes[j].s + u * (nodes[j + 1].s - nodes[j].s);
        double res = 0;
        for (int it = 0; it < 60; ++it) {
            const auto a = gamma(s1), b = gamma(s2);
            const double fx = a[0] - b[0], fy = a[1] - b[1];
            res = std::hypot(fx, fy);
            if (res < 1e-13) break;
            // [a' , -b'] d = -F
            const double det = -a[2] * b[3] + a[3] * b[2];
            if (std::abs(det) < 1e-14) break;
            const double d1 = (-fx * (-b[3]) + fy * (-b[2])) / det;
            const double d2 = (a[2] * (-fy) - a[3] * (-fx)) / det;
            s1 = std::clamp(s1 + d1, span.lo, span.hi);
            s2 = std::clamp(s2 + d2, span.lo, span.hi);
            if (std::abs(d1) + std::abs(d2) < 1e-15) break;
        }
        if (s1 > s2) std::swap(s1, s2);
        if (std::abs(s1 - span.lo) < 1e-6 && std::abs(s2 - span.hi) < 1e-6) continue;  // closed curve seam
        if (s2 - s1 < 1e-9) continue;
        bool dup = false;
        for (const auto& c : rep.crossings)
            if (std::abs(c.s1 - s1) < 1e-7 && std::abs(c.s2 - s2) < 1e-7) dup = true;
        if (dup) continue;
        const auto a = gamma(s1);
        rep.crossings.push_back({s1, s2, a[0], a[1], res});
    }
    std::sort(rep.crossings.begin(), rep.crossings.end(),
              [](const SelfIntersection& a, const SelfIntersection& b) { return a.s1 < b.s1; });
    return rep;
}

// ---------------------------------------------------------------------------
// Closure and catalog

std::string Closure::describe() const {
    std::ostringstream os;
    if (closes)
        os << "closes after " << q << " period" << (q == 1 ? "" : "s") << " (" << p << "/" << q << ")";
    else
        os << "no closure detected (cap)";
    return os.str();
}

Closure closure_test(double phi, int max_denominator, double tol) {
    Closure c;
    if (!std::isfinite(phi)) return c;
    const double x = phi / (2 * kPi);
    // Continued-fraction convergents of x.
    long h0 = 1, h1 = static_cast<long>(std::floor(x)), k0 = 0, k1 = 1;
    double rest = x - std::floor(x);
    for (int it = 0; it < 64; ++it) {
        const double d = std::abs(x - static_cast<double>(h1) / k1);
        if (d < tol) {
            c.closes = true;
            c.p = h1;
            c.q = k1;
            c.defect = d;
            return c;
        }
        if (rest < 1e-15) break;
        const double inv = 1.0 / rest;
        const long a = static_cast<long>(std::floor(inv));
        rest = inv - a;
        const long h2 = a * h1 + h0, k2 = a * k1 + k0;
        if (k2 > max_denominator) break;
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
    }
    c.defect = std::abs(x - static_cast<double>(h1) / k1);
    return c;
}

std::string to_string(Family f) {
    switch (f) {
        case Family::StandardEmbedding: return "StandardEmbedding";
        case Family::BoundedSpiraloid: return "BoundedSpiraloid";
        case Family::UnboundedSpiraloid: return "UnboundedSpiraloid";
        case Family::CatenoidType: return "CatenoidType";
        case Family::ClosedNonStandard: return "ClosedNonStandard";
    }
    return "?";
}

namespace {

// s-length of one period of a bounded orbit: int d(alpha) / alpha'.
double type3_period(const HSParams& p, double E) {
    auto h = [&](double a) {
        const double r = radius_on_level(p, E, a, Branch::Smaller);
        const double rate = p.C / std::pow(r, p.n - 1) - p.n * std::sin(a) / r;
        if (!(rate > 0)) throw DomainError("alpha' changes sign on this piece; wrong component");
        return 1.0 / rate;
    };
    return gk(h, kPi / 2, 2.5 * kPi, 1e-12).value;
}

}  // namespace

TracedOrbit trace_orbit(const HSParams& p, const HSState& initial, double r_far, int periods) {
    if (!(r_far > initial.r)) throw ValidationError("trace_orbit: r_far must exceed the initial radius");
    const OrbitClass oc = classify_state(p, initial);
    IntegratorOptions io;
    io.r_max = r_far;
    TracedOrbit out;
    if (oc.tag == EnergyTag::TypeIII) {
        if (periods < 1) throw ValidationError("trace_orbit: periods must be positive");
        const double T = type3_period(p, oc.E);
        const double S = periods * T;
        auto traj = std::make_shared<HSTrajectory>(integrate(p, initial, 0.0, S * (1 + 1e-6) + 1e-6, io));
        // Pin the span to an exact number of turns of alpha.
        const double target = initial.alpha + 2 * kPi * periods;
        auto g = [&](double s) { return traj->state_at(s).alpha - target; };
        const double lo = std::max(0.0, S * (1 - 1e-6) - 1e-6);
        const double end = toms748(g, lo, traj->s_hi());
        out.traj = traj;
        out.span = {0.0, end};
    } else if (oc.tag == EnergyTag::FixedPoint) {
        const double T = 2 * kPi * initial.r * periods;
        auto traj = std::make_shared<HSTrajectory>(integrate(p, initial, 0.0, T, io));
        out.traj = traj;
        out.span = {0.0, T};
    } else {
        // Critical orbits creep up on the fixed point; stop once within 1e-7 of it.
        const double S = oc.tag == EnergyTag::Critical ? 80.0 : 20 * r_far + 2000;
        auto traj = std::make_shared<HSTrajectory>(integrate_two_sided(p, initial, -S, S, io));
        double lo = traj->s_lo(), hi = traj->s_hi();
        if (oc.tag == EnergyTag::Critical) {
            auto far = [&](double s) { return distance_to_fixed_point(p, traj->state_at(s)) > 1e-7; };
            for (double s = 0; s <= hi; s += 0.25)
                if (!far(s)) {
                    hi = s;
                    break;
                }
            for (double s = 0; s >= lo; s -= 0.25)
                if (!far(s)) {
                    lo = s;
                    break;
                }
        }
        out.traj = traj;
        out.span = {lo, hi};
    }
    out.curve = std::make_shared<TrajectoryCurve>(out.traj, 0.0);
    return out;
}

CatalogEntry classify_catalog(const HSParams& p, const HSState& initial, const CatalogOptions& opt) {
    if (!(p.C > 0)) throw ValidationError("classify_catalog: needs C > 0");
    const OrbitClass oc = classify_state(p, initial);
    CatalogEntry e;
    e.tag = oc.tag;
    e.bounded = oc.bounded;
    e.E = oc.E;
    e.initial = initial;
    const double r_far = std::max(opt.r_far, 4 * initial.r);
    switch (oc.tag) {
        case EnergyTag::FixedPoint: {
            e.family = Family::StandardEmbedding;
            e.phi.value = 2 * kPi;  // one turn of the circle
            e.closure = closure_test(e.phi.value, opt.max_periods);
            const auto tr = trace_orbit(p, fixed_points(p).state, r_far, 1);
            e.span = tr.span;
            e.crossings = detect_self_intersection(*tr.curve, tr.span, opt.resolution).crossings;
            e.embedded = e.crossings.empty();
            return e;
        }
        case EnergyTag::Critical: {
            e.family = oc.bounded ? Family::BoundedSpiraloid : Family::UnboundedSpiraloid;
            e.phi = divergent();
            break;
        }
        case EnergyTag::TypeI:
        case EnergyTag::TypeII: {
            e.family = Family::CatenoidType;
            e.phi = phase_for_energy(p, oc.E, false, opt.phase);
            break;
        }
        case EnergyTag::TypeIII: {
            e.family = Family::ClosedNonStandard;
            e.phi = phi_type3(p, oc.E, opt.phase);
            e.closure = closure_test(e.phi.value, opt.max_periods);
            const int periods = e.closure.closes ? static_cast<int>(e.closure.q) : 2;
            const auto tr = trace_orbit(p, initial, r_far, periods);
            e.span = tr.span;
            e.crossings = detect_self_intersection(*tr.curve, tr.span, opt.resolution).crossings;
            if (!e.crossings.empty()) e.embedded = false;
            return e;
        }
    }
    const auto tr = trace_orbit(p, initial, r_far);
    e.span = tr.span;
    e.crossings = detect_self_intersection(*tr.curve, tr.span, opt.resolution).crossings;
    if (!e.crossings.empty())
        e.embedded = false;
    else if (oc.tag == EnergyTag::TypeI && !e.phi.divergent && e.phi.value < 2 * kPi)
        e.embedded = true;
    return e;
}

double type3_energy_for_phase(const HSParams& p, double target, const PhaseOptions& opt) {
    if (!(target > 0)) throw ValidationError("type3_energy_for_phase: target must be positive");
    const double E0 = critical_energy(p);
    auto g = [&](double E) {
        const PhaseResult r = phi_type3(p, E, opt);
        return (r.divergent ? opt.cap : r.value) - target;
    };
    double lo = E0 * (1 - 1e-6), hi = E0 * 1e-6;
    if (g(lo) < 0 || g(hi) > 0) throw NumericError("type3_energy_for_phase: target outside the sampled range");
    return toms748(g, lo, hi);
}

std::vector<CatalogEntry> catalog_rows(const HSParams& p, const CatalogOptions& opt) {
    const auto fp = fixed_points(p);
    const double E0 = fp.E0;
    const double rbar = fp.state.r;
    std::vector<CatalogEntry> rows;
    rows.push_back(classify_catalog(p, fp.state, opt));
    rows.push_back(classify_catalog(p, {1.5 * kPi, radius_on_level(p, E0, 1.5 * kPi)}, opt));
    rows.push_back(classify_catalog(p, {kPi / 4, radius_on_level(p, E0, kPi / 4, Branch::Larger)}, opt));
    rows.push_back(classify_catalog(p, {kPi / 2, 2 * rbar}, opt));
    // A closed orbit: pick the level whose phase advance is a third of a turn.
    const double E3 = type3_energy_for_phase(p, 2 * kPi / 3, opt.phase);
    rows.push_back(classify_catalog(p, {kPi / 2, radius_on_level(p, E3, kPi / 2, Branch::Smaller)}, opt));
    const double E2 = 3 * E0;
    rows.push_back(classify_catalog(p, {1.5 * kPi, radius_on_level(p, E2, 1.5 * kPi)}, opt));
    return rows;
}

std::vector<PhaseRow> phase_table(const HSParams& p, double E_min, double E_max, int steps, bool bounded,
                                  bool with_crossings) {
    if (steps < 1) throw ValidationError("phase_table: steps must be positive");
    if (!(E_max >= E_min)) throw ValidationError("phase_table: E_max < E_min");
    std::vector<PhaseRow> rows;
    for (int i = 0; i < steps; ++i) {
        PhaseRow row;
        row.E = steps == 1 ? E_min : E_min + (E_max - E_min) * i / (steps - 1);
        const EnergyClass ec = classify(p, row.E);
        EnergyTag tag = ec.components.front();
        if (ec.has(EnergyTag::TypeIII)) tag = bounded ? EnergyTag::TypeIII : EnergyTag::TypeI;
        row.klass = to_string(tag);
        row.phi = phase_for_energy(p, row.E, bounded, {});
        if (with_crossings && tag != EnergyTag::Critical) {
            HSState init;
            if (tag == EnergyTag::TypeII)
                init = {1.5 * kPi, radius_on_level(p, row.E, 1.5 * kPi)};
            else if (tag == EnergyTag::TypeIII)
                init = {kPi / 2, radius_on_level(p, row.E, kPi / 2, Branch::Smaller)};
            else
                init = {kPi / 2, type1_min_radius(p, row.E)};
            row.self_intersections = static_cast<int>(classify_catalog(p, init).crossings.size());
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace sigma
