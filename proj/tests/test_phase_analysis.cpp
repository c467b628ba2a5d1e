#include <cmath>
#include <memory>

#include "sigma/errors.hpp"
#include "sigma/hs_dynamics.hpp"
#include "sigma/phase_analysis.hpp"
#include "sigma/profile_curves.hpp"
#include "support.hpp"

using namespace sigma;
using testing::kPi;

namespace {

// mpmath values from tests/oracles/oracle_values.py
struct Type1Ref {
    int n;
    double lambda, phi;
};
const Type1Ref kType1[] = {
    {3, 0.5, 1.9308583776515889},  {3, 1.0, 3.1415926535897932},    {3, 1.4, 5.3464531661591692},
    {3, 1.4999, 13.419038905827203}, {4, 0.7, 1.2974923834873849}, {5, 2.2, 2.0663630108560948},
};

struct SplitRef {
    int n;
    double C, E, plus, minus;
};
const SplitRef kType2[] = {
    {3, 3, -3, 2.2139576166885544, -0.34443506344317242},
    {3, 3, -1.5, 3.6803690833626352, -0.28110285656986515},
    {3, 3, -10, 1.125329692447913, -0.46274351465399099},
    {3, 3, -36, 0.58154036962155234, -0.58791874463792474},
    {3, 3, -100, 0.34730601153430547, -0.67894998561833045},
    {3, 3, -10000, 0.034641906970823956, -0.93725451723502481},
};
const SplitRef kType3[] = {
    {3, 3, -0.5, 0.52828321183417869, -0.19402766633979257},
    {3, 3, -0.9, 1.4180090035526486, -0.23830281697017787},
    {4, 3, -0.6, 0.20276521447000896, -0.1026900521533058},
};

}  // namespace

TEST_CASE("unbounded orbit phase matches the reference values") {
    for (const auto& ref : kType1) {
        CAPTURE(ref.n);
        CAPTURE(ref.lambda);
        const auto r = phi_type1_lambda(ref.n, ref.lambda);
        REQUIRE_FALSE(r.divergent);
        CHECK(std::abs(r.value - ref.phi) < 1e-8 * std::max(1.0, ref.phi));
        CHECK(r.error_estimate < 1e-6 * std::max(1.0, r.value));
    }
}

TEST_CASE("unbounded orbit phase limits in lambda") {
    for (int n : {3, 4, 5}) {
        CAPTURE(n);
        const auto r = phi_type1_lambda(n, 0.0);
        CHECK(std::abs(r.value - kPi / n) < 1e-10);
        CHECK(phi_type1_lambda(n, 0.5 * n).divergent);
        CHECK(phi_type1_lambda(n, 0.5 * n + 1).divergent);
        CHECK(std::isinf(phi_type1_lambda(n, 0.5 * n).value));
    }
    // grows without bound as lambda approaches n/2, but slowly
    double prev = 0;
    for (double lam : {1.0, 1.4, 1.49, 1.499, 1.4999, 1.49999}) {
        const auto r = phi_type1_lambda(3, lam);
        REQUIRE_FALSE(r.divergent);
        CHECK(r.value > prev);
        prev = r.value;
    }
    CHECK(prev > 15);
    CHECK_THROWS_AS(phi_type1_lambda(2, 0.1), ValidationError);
    CHECK_THROWS_AS(phi_type1_lambda(3, -0.1), ValidationError);
}

TEST_CASE("unbounded orbit phase decreases with the turning radius") {
    const HSParams p(3, 3.0);
    double prev = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 10; ++i) {
        const double r0 = 1.05 + 0.6 * i;
        const auto r = phi_type1(p, r0);
        REQUIRE_FALSE(r.divergent);
        CHECK(r.value < prev);
        CHECK(r.value > kPi / 3);
        prev = r.value;
    }
    CHECK(type1_lambda(p, 2.0) == doctest::Approx(0.75));
    CHECK(phi_type1(HSParams(3, 3.0), 1.0).divergent);
}

TEST_CASE("type II pieces match the reference values") {
    for (const auto& ref : kType2) {
        CAPTURE(ref.E);
        const HSParams p(ref.n, ref.C);
        const auto r = phi_type2_energy(p, ref.E);
        REQUIRE(r.plus);
        REQUIRE(r.minus);
        CHECK(std::abs(*r.plus - ref.plus) < 1e-8);
        CHECK(std::abs(*r.minus - ref.minus) < 1e-8);
        CHECK(std::abs(r.value - (ref.plus + ref.minus)) < 2e-8);
        CHECK(r.error_estimate < 1e-6 * std::max(1.0, std::abs(r.value)));
    }
    CHECK(type2_r1(HSParams(3, 3.0), -12.0) == doctest::Approx(2.0));
    CHECK_THROWS_AS(phi_type2_energy(HSParams(3, 3.0), -0.5), DomainError);
    CHECK_THROWS_AS(phi_type2_energy(HSParams(3, 0.0), -0.5), ValidationError);
}

TEST_CASE("type II piece ordering and monotonicity") {
    const HSParams p(3, 3.0);
    const double E0 = critical_energy(p);
    double prev = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < 10; ++i) {
        const double E = E0 * (10.0 - i * 0.95);  // -10 .. -1.45
        const auto r = phi_type2_energy(p, E);
        CAPTURE(E);
        CHECK(*r.plus > prev);
        prev = *r.plus;
        CHECK(*r.minus < 0);
        CHECK(*r.minus > -kPi / 3 - 1e-12);
        CHECK(*r.plus > 0);
        CHECK(*r.plus > std::abs(*r.minus));
    }
    // the positive piece loses to the negative one far below E0 (crossover
    // near E = -35.4); further down it keeps shrinking towards 0
    const auto deep = phi_type2_energy(p, -36.0);
    CHECK(*deep.plus < std::abs(*deep.minus));
    const auto deeper = phi_type2_energy(p, -1e4);
    CHECK(*deeper.plus < 0.05);
    CHECK(*deeper.minus < *deep.minus);
    CHECK(*deeper.minus > -kPi / 3);
}

TEST_CASE("type III pieces match the reference values") {
    for (const auto& ref : kType3) {
        CAPTURE(ref.n);
        CAPTURE(ref.E);
        const HSParams p(ref.n, ref.C);
        const auto r = phi_type3(p, ref.E);
        CHECK(std::abs(*r.plus - ref.plus) < 1e-8);
        CHECK(std::abs(*r.minus - ref.minus) < 1e-8);
        CHECK(r.error_estimate < 1e-6 * std::max(1.0, std::abs(r.value)));
        CHECK(r.value > 0);
    }
    const HSParams p(3, 3.0);
    CHECK_THROWS_AS(phi_type3(p, 0.5), DomainError);
    CHECK_THROWS_AS(phi_type3(p, -1.5), DomainError);
}

TEST_CASE("type III limits at the ends of the level range") {
    const HSParams p(3, 3.0);
    const auto near_zero = phi_type3(p, -1e-6);
    CHECK(std::abs(*near_zero.plus) < 1e-2);
    CHECK(std::abs(*near_zero.minus) < 1e-2);

    double prev = 0;
    for (double d : {1e-1, 1e-2, 1e-3, 1e-4}) {
        const auto r = phi_type3(p, -1.0 + d);
        CHECK(*r.plus > prev);
        prev = *r.plus;
    }
    CHECK(prev > 5);
}

TEST_CASE("phase_for_energy dispatches on the level") {
    const HSParams p(3, 3.0);
    CHECK(phase_for_energy(p, -1.0, true).divergent);
    CHECK(phase_for_energy(p, -3.0, false).value == doctest::Approx(2.2139576166885544 - 0.34443506344317242));
    CHECK(phase_for_energy(p, -0.5, true).value == doctest::Approx(0.52828321183417869 - 0.19402766633979257));
    const double r0 = type1_min_radius(p, -0.5);
    CHECK(2 * r0 * r0 * r0 - 3 * r0 * r0 == doctest::Approx(-0.5));
    CHECK(phase_for_energy(p, -0.5, false).value == doctest::Approx(phi_type1(p, r0).value));
    CHECK(phase_for_energy(p, 4.0, false).value == doctest::Approx(phi_type1(p, type1_min_radius(p, 4.0)).value));
    CHECK(phase_for_energy(HSParams(4, 0.0), 2.0, false).value == doctest::Approx(kPi / 4));
}

TEST_CASE("quadrature agrees with integrating along the orbit") {
    // phase along a traced unbounded orbit out to r = R, plus the tail
    // C / (2 (n-2) R^{n-2}) from sin(alpha) ~ C / (2 r^{n-2}) on each side
    for (const auto& [n, r0] : {std::pair{3, 2.0}, std::pair{4, 1.3}}) {
        CAPTURE(n);
        const HSParams p(n, 3.0);
        const double R = n == 3 ? 1e3 : 2e2;
        IntegratorOptions o;
        o.r_max = R;
        auto traj = std::make_shared<HSTrajectory>(integrate_two_sided(p, {kPi / 2, r0}, -2 * R, 2 * R, o));
        REQUIRE(traj->termination() == Termination::RadiusBound);
        const TrajectoryCurve curve(traj, 0.0);
        const double lo = traj->s_lo(), hi = traj->s_hi();
        auto tail = [&](double r) { return p.C / (2 * (n - 2) * std::pow(r, n - 2)); };
        const double along = curve.phase_advance(hi) - curve.phase_advance(lo) + tail(traj->state_at(hi).r) +
                             tail(traj->state_at(lo).r);
        const double quad = phi_type1(p, r0).value;
        CHECK(std::abs(along - quad) < 1e-5);
    }
}

TEST_CASE("phase rate changes sign only where alpha is a multiple of pi") {
    const HSParams p(3, 3.0);
    const auto traj = integrate_two_sided(p, {1.5 * kPi, type2_r1(p, -3.0)}, -6.0, 6.0);
    const auto& st = traj.states();
    int changes = 0;
    for (std::size_t i = 1; i < st.size(); ++i) {
        const double a = std::sin(st[i - 1].alpha), b = std::sin(st[i].alpha);
        if ((a < 0) != (b < 0)) {
            ++changes;
            // a multiple of pi lies between the two step ends
            const double k0 = std::floor(st[i - 1].alpha / kPi), k1 = std::floor(st[i].alpha / kPi);
            CHECK(k0 != k1);
        }
    }
    CHECK(changes == 2);
}

TEST_CASE("polyline crossings") {
    std::vector<std::pair<double, double>> straight;
    for (int i = 0; i < 20; ++i) straight.emplace_back(0.3 * i, -0.1 * i);
    CHECK(polyline_self_intersections(straight).empty());

    std::vector<std::pair<double, double>> eight;
    for (int i = 0; i <= 400; ++i) {
        const double t = 2 * kPi * i / 400.0 + 0.01;
        eight.emplace_back(std::sin(t), std::sin(t) * std::cos(t));
    }
    const auto c = polyline_self_intersections(eight);
    CHECK(c.size() == 1);

    CHECK(polyline_self_intersections({}).empty());
    CHECK(polyline_self_intersections({{0, 0}, {1, 1}}).empty());
}

TEST_CASE("self-intersection detection on profile curves") {
    const auto& cat = catenoid3(1.0, 5.0).curve();
    const auto rep = detect_self_intersection(cat, cat.domain());
    CHECK(rep.crossings.empty());
    CHECK(rep.resolution >= 8.0);

    // one full turn of the unit circle closes up but does not cross itself
    const auto& circ = standard_circle(3).curve();
    CHECK(detect_self_intersection(circ, {0.0, 1.9 * kPi}).crossings.empty());
}

TEST_CASE("type II orbit crosses itself once at a mirror pair") {
    const HSParams p(3, 3.0);
    const double E = -3.0;
    const auto tr = trace_orbit(p, {1.5 * kPi, type2_r1(p, E)}, 60.0);
    const auto rep = detect_self_intersection(*tr.curve, tr.span);
    REQUIRE(rep.crossings.size() == 1);
    const auto& x = rep.crossings[0];
    CHECK(x.residual < 1e-9);
    const auto a = eval_profile(*tr.curve, x.s1), b = eval_profile(*tr.curve, x.s2);
    CHECK(std::abs(a.r - b.r) < 1e-6);
    CHECK(std::abs(std::remainder(a.alpha + b.alpha - 3 * kPi, 2 * kPi)) < 1e-6);
    CHECK(std::abs(a.r * std::cos(a.phi) - x.x) < 1e-8);
    CHECK(std::abs(a.r * std::sin(a.phi) - x.y) < 1e-8);
    // the minimum radius sits midway in s
    CHECK(std::abs(x.s1 + x.s2) < 1e-6);
}

TEST_CASE("closure test") {
    const auto third = closure_test(2 * kPi / 3);
    CHECK(third.closes);
    CHECK(third.p == 1);
    CHECK(third.q == 3);
    CHECK(third.defect < 1e-12);
    const auto c = closure_test(2 * kPi * 5 / 7);
    CHECK(c.closes);
    CHECK(c.p == 5);
    CHECK(c.q == 7);
    CHECK_FALSE(closure_test(2 * kPi * std::sqrt(2.0)).closes);
    CHECK_FALSE(closure_test(2 * kPi / 3 + 1e-5).closes);
    CHECK_FALSE(third.describe().empty());
}

TEST_CASE("type III level for a prescribed phase") {
    const HSParams p(3, 3.0);
    const double E = type3_energy_for_phase(p, 2 * kPi / 3);
    CHECK(E > -1.0);
    CHECK(E < 0.0);
    CHECK(std::abs(phi_type3(p, E).value - 2 * kPi / 3) < 1e-9);
    CHECK_THROWS_AS(type3_energy_for_phase(p, -1.0), ValidationError);
}

TEST_CASE("catalog for n = 3, C = 3") {
    const HSParams p(3, 3.0);
    const auto rows = catalog_rows(p);
    REQUIRE(rows.size() == 6);

    CHECK(rows[0].family == Family::StandardEmbedding);
    CHECK(rows[0].tag == EnergyTag::FixedPoint);
    REQUIRE(rows[0].embedded);
    CHECK(*rows[0].embedded);

    int spiral_bounded = 0, spiral_unbounded = 0, catenoid = 0, closed = 0;
    for (const auto& r : rows) {
        CAPTURE(to_string(r.family));
        CAPTURE(r.E);
        switch (r.family) {
            case Family::BoundedSpiraloid:
                ++spiral_bounded;
                CHECK(r.phi.divergent);
                CHECK(r.E == doctest::Approx(critical_energy(p)));
                break;
            case Family::UnboundedSpiraloid:
                ++spiral_unbounded;
                CHECK(r.phi.divergent);
                break;
            case Family::CatenoidType:
                ++catenoid;
                CHECK_FALSE(r.phi.divergent);
                REQUIRE(r.embedded);
                // embedded exactly when no crossing was found
                CHECK(*r.embedded == r.crossings.empty());
                for (const auto& x : r.crossings) CHECK(x.residual < 1e-9);
                break;
            case Family::ClosedNonStandard:
                ++closed;
                CHECK(r.bounded);
                CHECK(r.closure.closes);
                CHECK(r.closure.p == 1);
                CHECK(r.closure.q == 3);
                REQUIRE(r.embedded);
                CHECK_FALSE(*r.embedded);
                CHECK_FALSE(r.crossings.empty());
                break;
            case Family::StandardEmbedding:
                break;
        }
    }
    CHECK(spiral_bounded == 1);
    CHECK(spiral_unbounded == 1);
    CHECK(catenoid == 2);
    CHECK(closed == 1);

    // the extra type II row crosses itself, the E = 4 one does not
    CHECK(rows[5].tag == EnergyTag::TypeII);
    CHECK(rows[5].crossings.size() == 1);
    CHECK_FALSE(*rows[5].embedded);
}

TEST_CASE("catalog entry for the fixed point") {
    const HSParams p(4, 2.0);
    const auto fp = fixed_points(p);
    const auto e = classify_catalog(p, fp.state);
    CHECK(e.family == Family::StandardEmbedding);
    CHECK(e.E == doctest::Approx(fp.E0));
}

TEST_CASE("phase table") {
    const HSParams p(3, 3.0);
    const auto rows = phase_table(p, -5.0, 3.0, 9, false);
    REQUIRE(rows.size() == 9);
    CHECK(rows.front().E == -5.0);
    CHECK(rows.back().E == 3.0);
    for (const auto& r : rows) {
        CAPTURE(r.E);
        CHECK_FALSE(r.klass.empty());
        CHECK(r.self_intersections == -1);
        if (r.E == -1.0) CHECK(r.phi.divergent);
    }
    const auto bounded = phase_table(p, -0.9, -0.1, 4, true, true);
    for (const auto& r : bounded) CHECK(r.self_intersections >= 0);
    CHECK_THROWS(phase_table(p, 1.0, 0.0, 4, false));
}
