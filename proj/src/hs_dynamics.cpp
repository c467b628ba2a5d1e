#include "sigma/hs_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "sigma/errors.hpp"

namespace sigma {

namespace {

constexpr double kPi = std::numbers::pi;

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = -71.0 / 57600, e3 = 71.0 / 16695, e4 = -71.0 / 1920, e5 = 17253.0 / 339200,
                 e6 = -22.0 / 525, e7 = 1.0 / 40;

// Quartic dense output, rows = stages k1..k7 (k2 row is zero), columns = theta^1..theta^4.
constexpr double P[7][4] = {
    {1.0, -8048581381.0 / 2820520608, 8663915743.0 / 2820520608, -12715105075.0 / 11282082432},
    {0, 0, 0, 0},
    {0, 131558114200.0 / 32700410799, -68118460800.0 / 10900136933, 87487479700.0 / 32700410799},
    {0, -1754552775.0 / 470086768, 14199869525.0 / 1410260304, -10690763975.0 / 1880347072},
    {0, 127303824393.0 / 49829197408, -318862633887.0 / 49829197408, 701980252875.0 / 199316789632},
    {0, -282668133.0 / 205662961, 2019193451.0 / 616988883, -1453857185.0 / 822651844},
    {0, 40617522.0 / 29380423, -110615467.0 / 29380423, 69997945.0 / 29380423},
};

using Y = std::array<double, 2>;

Y rhs(const Y& y, const HSParams& p) {
    const auto d = hs_rhs({y[0], y[1]}, p);
    return {d.dalpha, d.dr};
}

double reduce_angle(double a, int& winding) {
    const double k = std::round(a / (2 * kPi));
    winding += static_cast<int>(k);
    return a - 2 * kPi * k;
}

struct StepEval {
    const HSTrajectory::Step& st;
    double theta(double s) const { return (s - st.s0) / st.h; }
    Y reduced(double s) const {
        const double t = theta(s);
        const double t2 = t * t, t3 = t2 * t, t4 = t3 * t;
        Y y{st.alpha0, st.r0};
        for (int i = 0; i < 2; ++i)
            y[i] += st.h * (st.q[i][0] * t + st.q[i][1] * t2 + st.q[i][2] * t3 + st.q[i][3] * t4);
        return y;
    }
    HSState state(double s) const {
        const Y y = reduced(s);
        return {y[0] + 2 * kPi * st.winding, y[1]};
    }
};

template <class F>
double locate(F&& g, double a, double b) {
    if (a > b) std::swap(a, b);
    double ga = g(a), gb = g(b);
    if (ga == 0) return a;
    if (gb == 0) return b;
    std::uintmax_t iters = 200;
    auto tol = boost::math::tools::eps_tolerance<double>(50);
    auto [lo, hi] = boost::math::tools::toms748_solve(g, a, b, ga, gb, tol, iters);
    return 0.5 * (lo + hi);
}

// One directed run. Steps are appended in the order they are taken.
struct Run {
    std::vector<HSTrajectory::Step> steps;
    Termination term = Termination::Completed;
};

Run run(const HSParams& p, HSState initial, double s_begin, double s_end, const IntegratorOptions& o) {
    Run out;
    if (s_end == s_begin) return out;
    const double dir = s_end > s_begin ? 1.0 : -1.0;
    int winding = 0;
    Y y{reduce_angle(initial.alpha, winding), initial.r};
    double s = s_begin;

    auto err_norm = [&](const Y& y0, const Y& y1, const Y& e) {
        double acc = 0;
        for (int i = 0; i < 2; ++i) {
            const double sc = o.atol + o.rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
            acc += (e[i] / sc) * (e[i] / sc);
        }
        return std::sqrt(acc / 2);
    };

    Y k1 = rhs(y, p);
    // The fixed point is a saddle; stepping from it only amplifies the
    // rounding in cos(pi/2), so the equilibrium is emitted as one constant step.
    if (p.C > 0) {
        const double eps = std::numeric_limits<double>::epsilon();
        const double scale_a = p.C / std::pow(y[1], p.n - 1) + p.n / y[1];
        if (std::abs(k1[0]) <= 8 * eps * scale_a && std::abs(k1[1]) <= 8 * eps &&
            distance_to_fixed_point(p, {y[0], y[1]}) <= 8 * eps * std::max(1.0, y[1])) {
            HSTrajectory::Step st;
            st.s0 = s_begin;
            st.h = s_end - s_begin;
            st.lo = std::min(s_begin, s_end);
            st.hi = std::max(s_begin, s_end);
            st.alpha0 = y[0];
            st.r0 = y[1];
            st.winding = winding;
            out.steps.push_back(st);
            return out;
        }
    }
    // Initial step heuristic (Hairer, Norsett, Wanner).
    double h;
    {
        const double d0 = std::hypot(y[0], y[1]) / std::sqrt(2.0);
        const double d1 = std::hypot(k1[0], k1[1]) / std::sqrt(2.0);
        double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        h0 = std::min(h0, std::abs(s_end - s_begin));
        Y y1{y[0] + dir * h0 * k1[0], y[1] + dir * h0 * k1[1]};
        if (y1[1] <= 0) h0 *= 0.01, y1 = {y[0] + dir * h0 * k1[0], y[1] + dir * h0 * k1[1]};
        const Y f1 = rhs(y1, p);
        const double d2 = std::hypot(f1[0] - k1[0], f1[1] - k1[1]) / std::sqrt(2.0) / h0;
        const double m = std::max(d1, d2);
        const double h1 = m <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / m, 1.0 / 5);
        h = std::min(100 * h0, h1);
        h = std::min(h, std::abs(s_end - s_begin));
    }

    double facold = 1e-4;
    const double beta = 0.04, expo1 = 0.2 - beta * 0.75;
    std::size_t n_steps = 0;

    while (dir * (s_end - s) > 0) {
        if (n_steps++ >= o.max_steps) {
            out.term = Termination::StepLimit;
            return out;
        }
        if (h < 1e-14 * std::max(1.0, std::abs(s))) {
            out.term = Termination::StepUnderflow;
            return out;
        }
        bool last = false;
        if (h >= dir * (s_end - s)) {
            h = dir * (s_end - s);
            last = true;
        }
        const double hs = dir * h;
        auto stage = [&](std::initializer_list<std::pair<double, const Y*>> terms) {
            Y z = y;
            for (auto [a, k] : terms)
                for (int i = 0; i < 2; ++i) z[i] += hs * a * (*k)[i];
            return z;
        };
        bool bad = false;
        auto f = [&](const Y& z) {
            if (!(z[1] > 0) || !std::isfinite(z[0])) {
                bad = true;
                return Y{0, 0};
            }
            return rhs(z, p);
        };
        const Y k2 = f(stage({{a21, &k1}}));
        const Y k3 = f(stage({{a31, &k1}, {a32, &k2}}));
        const Y k4 = f(stage({{a41, &k1}, {a42, &k2}, {a43, &k3}}));
        const Y k5 = f(stage({{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
        const Y k6 = f(stage({{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
        const Y y1 = stage({{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
        const Y k7 = f(y1);
        if (bad) {
            h *= 0.25;
            continue;
        }
        Y e;
        for (int i = 0; i < 2; ++i)
            e[i] = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        const double err = err_norm(y, y1, e);

        const double fac11 = std::pow(std::max(err, 1e-300), expo1);
        double fac = fac11 / std::pow(facold, beta);
        fac = std::clamp(fac / 0.9, 1.0 / 10.0, 1.0 / 0.2);
        if (err > 1.0) {
            h /= std::min(1.0 / 0.2, fac11 / 0.9);
            continue;
        }
        facold = std::max(err, 1e-4);

        HSTrajectory::Step st;
        st.s0 = s;
        st.h = hs;
        st.alpha0 = y[0];
        st.r0 = y[1];
        st.winding = winding;
        const Y* K[7] = {&k1, &k2, &k3, &k4, &k5, &k6, &k7};
        for (int i = 0; i < 2; ++i)
            for (int c = 0; c < 4; ++c) {
                double acc = 0;
                for (int j = 0; j < 7; ++j) acc += (*K[j])[i] * P[j][c];
                st.q[i][c] = acc;
            }
        const double s1 = last ? s_end : s + hs;
        st.lo = std::min(s, s1);
        st.hi = std::max(s, s1);

        // Radius events on the dense output.
        StepEval ev{st};
        auto cut = [&](double level, Termination t) {
            auto g = [&](double x) { return ev.reduced(x)[1] - level; };
            const double se = locate(g, s, s1);
            st.lo = std::min(s, se);
            st.hi = std::max(s, se);
            out.steps.push_back(st);
            out.term = t;
        };
        if (y1[1] < o.r_min) {
            cut(o.r_min, Termination::RadiusCollapse);
            return out;
        }
        if (y1[1] > o.r_max) {
            cut(o.r_max, Termination::RadiusBound);
            return out;
        }
        out.steps.push_back(st);

        s = s1;
        y = y1;
        y[0] = reduce_angle(y[0], winding);
        k1 = k7;
        h = h / fac;
        if (last) break;
    }
    return out;
}

}  // namespace

HSParams::HSParams(int n_, double C_) : n(n_), C(C_) {
    if (n < 3) throw ValidationError("HSParams: n must be >= 3");
    if (!(C >= 0) || !std::isfinite(C)) throw ValidationError("HSParams: C must be finite and >= 0");
}

FluxNormalization normalize_flux(int n, double C, HSState initial) {
    if (C >= 0) return {HSParams(n, C), initial, false};
    return {HSParams(n, -C), {initial.alpha + kPi, initial.r}, true};
}

HSRate hs_rhs(const HSState& y, const HSParams& p) {
    if (!(y.r > 0)) throw SingularityError("hs_rhs: r must be positive");
    return {p.C / std::pow(y.r, p.n - 1) - p.n * std::sin(y.alpha) / y.r, std::cos(y.alpha)};
}

double energy(const HSState& y, const HSParams& p) {
    return 2 * std::pow(y.r, p.n) * std::sin(y.alpha) - p.C * y.r * y.r;
}

double hs_curvature(const HSState& y, const HSParams& p) {
    if (!(y.r > 0)) throw SingularityError("hs_curvature: r must be positive");
    return p.C / std::pow(y.r, p.n - 1) - (p.n - 1) * std::sin(y.alpha) / y.r;
}

double hs_curvature_rate(const HSState& y, const HSParams& p) {
    const double r = y.r, sa = std::sin(y.alpha), ca = std::cos(y.alpha);
    const double da = hs_rhs(y, p).dalpha;
    return -(p.n - 1) * p.C * std::pow(r, -p.n) * ca - (p.n - 1) * (ca * da * r - sa * ca) / (r * r);
}

FixedPoint fixed_points(const HSParams& p) {
    if (!(p.C > 0))
        throw ValidationError("fixed_points: C = 0 has no interior fixed point (special Lagrangian family)");
    const double rbar = std::pow(p.C / p.n, 1.0 / (p.n - 2));
    FixedPoint fp{{kPi / 2, rbar}, critical_energy(p)};
    const double e = energy(fp.state, p);
    if (std::abs(e - fp.E0) > 1e-12 * std::max(1.0, std::abs(fp.E0)))
        throw InternalError("fixed_points: energy at the fixed point disagrees with E0");
    return fp;
}

double critical_energy(const HSParams& p) {
    return std::pow(p.C / p.n, static_cast<double>(p.n) / (p.n - 2)) * (2 - p.n);
}

std::string to_string(Termination t) {
    switch (t) {
        case Termination::Completed: return "completed";
        case Termination::RadiusCollapse: return "radius_collapse";
        case Termination::RadiusBound: return "radius_bound";
        case Termination::StepUnderflow: return "step_underflow";
        case Termination::StepLimit: return "step_limit";
    }
    return "?";
}

HSState HSTrajectory::state_at(double s) const {
    if (steps_.empty()) {
        if (s != s_start_) throw DomainError("trajectory has a single point");
        return states_.front();
    }
    if (s < s_lo() || s > s_hi()) throw DomainError("state_at: s outside trajectory span");
    auto it = std::upper_bound(steps_.begin(), steps_.end(), s,
                               [](double v, const Step& st) { return v < st.lo; });
    const Step& st = it == steps_.begin() ? steps_.front() : *std::prev(it);
    return StepEval{st}.state(s);
}

void HSTrajectory::finalize() {
    std::sort(steps_.begin(), steps_.end(), [](const Step& a, const Step& b) { return a.lo < b.lo; });
    grid_.clear();
    states_.clear();
    sections_.clear();
    if (steps_.empty()) return;
    grid_.push_back(steps_.front().lo);
    for (const auto& st : steps_) grid_.push_back(st.hi);
    for (std::size_t i = 0; i < grid_.size(); ++i) {
        const Step& st = steps_[std::min(i, steps_.size() - 1)];
        states_.push_back(StepEval{st}.state(grid_[i]));
    }
    // Section crossings: cos(alpha) changes sign inside a step.
    for (const auto& st : steps_) {
        StepEval ev{st};
        auto g = [&](double x) { return std::cos(ev.reduced(x)[0]); };
        const double ga = g(st.lo), gb = g(st.hi);
        if (ga == 0) sections_.push_back(st.lo);
        if ((ga < 0) != (gb < 0) && gb != 0) sections_.push_back(locate(g, st.lo, st.hi));
    }
}

HSTrajectory integrate(const HSParams& p, HSState initial, double s_begin, double s_end,
                       const IntegratorOptions& opts) {
    if (!(initial.r > 0)) throw ValidationError("integrate: r0 must be positive");
    if (!(opts.rtol >= 1e-14)) throw ValidationError("integrate: rtol below 1e-14 is not supported");
    HSTrajectory t;
    t.params_ = p;
    t.s_start_ = s_begin;
    Run r = run(p, initial, s_begin, s_end, opts);
    t.steps_ = std::move(r.steps);
    t.termination_ = r.term;
    t.finalize();
    t.E_start_ = energy(initial, p);
    if (t.steps_.empty()) {
        t.grid_ = {s_begin};
        t.states_ = {initial};
    }
    for (const auto& y : t.states_) t.max_drift_ = std::max(t.max_drift_, std::abs(energy(y, p) - t.E_start_));
    return t;
}

HSTrajectory integrate_two_sided(const HSParams& p, HSState initial, double s_back, double s_fwd,
                                 const IntegratorOptions& opts) {
    if (!(initial.r > 0)) throw ValidationError("integrate: r0 must be positive");
    if (s_back > 0 || s_fwd < 0) throw ValidationError("integrate_two_sided: need s_back <= 0 <= s_fwd");
    HSTrajectory t;
    t.params_ = p;
    t.s_start_ = 0.0;
    Run back = run(p, initial, 0.0, s_back, opts);
    Run fwd = run(p, initial, 0.0, s_fwd, opts);
    t.steps_ = std::move(back.steps);
    t.steps_.insert(t.steps_.end(), fwd.steps.begin(), fwd.steps.end());
    t.termination_ = fwd.term != Termination::Completed ? fwd.term : back.term;
    t.finalize();
    t.E_start_ = energy(initial, p);
    if (t.steps_.empty()) {
        t.grid_ = {0.0};
        t.states_ = {initial};
    }
    for (const auto& y : t.states_) t.max_drift_ = std::max(t.max_drift_, std::abs(energy(y, p) - t.E_start_));
    return t;
}

std::string to_string(EnergyTag t) {
    switch (t) {
        case EnergyTag::FixedPoint: return "FixedPoint";
        case EnergyTag::TypeI: return "TypeI";
        case EnergyTag::TypeII: return "TypeII";
        case EnergyTag::TypeIII: return "TypeIII";
        case EnergyTag::Critical: return "Critical";
    }
    return "?";
}

bool EnergyClass::has(EnergyTag t) const {
    return std::find(components.begin(), components.end(), t) != components.end();
}

EnergyClass classify(const HSParams& p, double E) {
    if (!(p.C > 0)) throw ValidationError("classify: needs C > 0");
    EnergyClass out;
    out.E = E;
    out.E0 = critical_energy(p);
    if (std::abs(E - out.E0) <= 1e-12 * std::max(1.0, std::abs(out.E0)))
        out.components = {EnergyTag::Critical};
    else if (E >= 0)
        out.components = {EnergyTag::TypeI};
    else if (E < out.E0)
        out.components = {EnergyTag::TypeII};
    else
        out.components = {EnergyTag::TypeIII, EnergyTag::TypeI};
    return out;
}

double distance_to_fixed_point(const HSParams& p, const HSState& y) {
    const auto fp = fixed_points(p);
    double da = std::remainder(y.alpha - fp.state.alpha, 2 * kPi);
    return std::hypot(da, y.r - fp.state.r);
}

OrbitClass classify_state(const HSParams& p, const HSState& y) {
    const double E = energy(y, p);
    const EnergyClass ec = classify(p, E);
    const double sa = std::sin(y.alpha);
    const double rstar = sa > 0 ? std::pow(p.C / (p.n * sa), 1.0 / (p.n - 2)) : 0.0;
    // Bounded side of the levels E0 <= E < 0: sin(alpha) <= 0, or below the radial minimiser.
    const bool inner = sa <= 0 || y.r < rstar;
    if (ec.has(EnergyTag::Critical)) {
        if (distance_to_fixed_point(p, y) < 1e-9) return {EnergyTag::FixedPoint, true, E};
        return {EnergyTag::Critical, inner, E};
    }
    if (ec.has(EnergyTag::TypeII)) return {EnergyTag::TypeII, false, E};
    if (ec.components.size() == 1) return {EnergyTag::TypeI, false, E};
    return inner ? OrbitClass{EnergyTag::TypeIII, true, E} : OrbitClass{EnergyTag::TypeI, false, E};
}

double InflectionLocus::radius_at(double alpha) const {
    const double sa = std::sin(alpha);
    if (!(sa > 0)) throw DomainError("inflection locus undefined where sin(alpha) <= 0");
    return std::pow(params.C / ((params.n - 1) * sa), 1.0 / (params.n - 2));
}

InflectionLocus inflection_locus(const HSParams& p) {
    if (!(p.C > 0)) throw ValidationError("inflection_locus: needs C > 0");
    InflectionLocus L;
    L.params = p;
    L.r1 = std::pow(p.C / (p.n - 1), 1.0 / (p.n - 2));
    L.E1 = 2 * std::pow(L.r1, p.n) - p.C * L.r1 * L.r1;
    const double E0 = critical_energy(p);
    if (p.n > 3 && !(E0 < L.E1 && L.E1 < 0))
        throw InternalError("inflection_locus: E1 outside (E0, 0)");
    if (p.n == 3) {
        // The locus is the zero level: 2 r^3 sin(a) - C r^2 = 0 at r = C / (2 sin a).
        for (double a : {0.3, kPi / 2, 2.5}) {
            const double r = L.radius_at(a);
            if (std::abs(energy({a, r}, p)) > 1e-10 * std::max(1.0, r * r))
                throw InternalError("inflection_locus: n = 3 locus is not the zero level");
        }
    }
    return L;
}

InflectionReport count_inflections(const HSTrajectory& traj) {
    InflectionReport rep;
    const auto& p = traj.params();
    const auto& grid = traj.grid();
    auto k = [&](double s) { return hs_curvature(traj.state_at(s), p); };
    // Sample each step at its ends and three interior points.
    std::vector<double> ss;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i)
        for (int j = 0; j < 4; ++j) ss.push_back(grid[i] + (grid[i + 1] - grid[i]) * j / 4.0);
    ss.push_back(grid.back());
    std::vector<double> ks;
    ks.reserve(ss.size());
    for (double s : ss) {
        ks.push_back(k(s));
        rep.max_abs_k = std::max(rep.max_abs_k, std::abs(ks.back()));
    }
    if (rep.max_abs_k < 1e-9) {
        rep.identically_zero = true;
        return rep;
    }
    for (std::size_t i = 0; i + 1 < ss.size(); ++i) {
        if (ks[i] == 0) {
            rep.s.push_back(ss[i]);
            continue;
        }
        if ((ks[i] < 0) == (ks[i + 1] < 0) || ks[i + 1] == 0) continue;
        double a = ss[i], b = ss[i + 1], ka = ks[i];
        while (b - a > 1e-10) {
            const double m = 0.5 * (a + b);
            const double km = k(m);
            if ((km < 0) == (ka < 0)) a = m, ka = km;
            else b = m;
        }
        rep.s.push_back(0.5 * (a + b));
    }
    return rep;
}

double radius_on_level(const HSParams& p, double E, double alpha, Branch branch) {
    const double sa = std::sin(alpha);
    const int n = p.n;
    const double C = p.C;
    auto g = [&](double r) { return 2 * sa * std::pow(r, n) - C * r * r - E; };
    auto solve = [&](double a, double b) {
        const double r = locate(g, a, b);
        if (std::abs(g(r)) > 1e-10 * std::max({1.0, std::abs(E), C * r * r}))
            throw NumericError("radius_on_level: energy residual too large");
        return r;
    };
    if (C == 0) {
        if (!(sa * E > 0)) throw NumericError("radius_on_level: level does not meet this alpha");
        return std::pow(E / (2 * sa), 1.0 / n);
    }
    if (sa <= 0) {
        if (!(E < 0)) throw NumericError("radius_on_level: level does not meet this alpha");
        const double r1 = std::sqrt(-E / C);
        if (sa == 0) return r1;
        return solve(0.0, r1);
    }
    const double rstar = std::pow(C / (n * sa), 1.0 / (n - 2));
    if (branch == Branch::Smaller) {
        if (!(E < 0) || !(g(rstar) < 0)) throw NumericError("radius_on_level: no smaller root on this level");
        return solve(0.0, rstar);
    }
    if (!(g(rstar) <= 0)) throw NumericError("radius_on_level: no larger root on this level");
    double hi = 2 * rstar;
    while (g(hi) < 0) hi *= 2;
    return solve(rstar, hi);
}

}  // namespace sigma
