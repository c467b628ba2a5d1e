#include <cmath>
#include <memory>

#include "sigma/errors.hpp"
#include "sigma/hs_dynamics.hpp"
#include "sigma/oracle_verify.hpp"
#include "sigma/profile_curves.hpp"
#include "support.hpp"

using namespace sigma;
using testing::kPi;
using testing::vec;

namespace {

std::vector<FoliatedSpec> all_presets() {
    return {standard_circle(3), centered_circle(4, 0.7), line(3, 0.4, 0.5), epicycloid(3, 1.3, vec({0.2, 0.1, 0})),
            catenoid3(1.0), catenoid3(0.6, 2.0), random_spec(4, 5), testing::mp_fixture()};
}

}  // namespace

TEST_CASE("standard circle values") {
    const auto st = eval_profile(standard_circle(3).curve(), kPi / 2);
    CHECK(st.r == doctest::Approx(1.0));
    CHECK(st.phi == doctest::Approx(kPi / 2));
    CHECK(st.alpha == doctest::Approx(kPi / 2));
    CHECK(st.k == doctest::Approx(1.0));

    const auto s0 = eval_profile(standard_circle(3).curve(), 0.0);
    CHECK(s0.theta == doctest::Approx(kPi / 2));
    CHECK(std::abs(s0.phi) < 1e-15);
}

TEST_CASE("catenoid profile") {
    const auto& c = catenoid3(1.0).curve();
    const auto a = eval_profile(c, 0.0);
    CHECK(a.r == doctest::Approx(1.0));
    CHECK(std::abs(a.phi) < 1e-15);
    CHECK(std::sin(a.alpha) == doctest::Approx(1.0));
    CHECK(std::abs(std::cos(a.alpha)) < 1e-15);
    CHECK(std::abs(a.k) < 1e-15);

    const auto b = eval_profile(c, 1.0);
    CHECK(b.r == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(b.alpha == doctest::Approx(kPi / 4).epsilon(1e-14));
    CHECK(std::abs(b.k) < 1e-15);
}

TEST_CASE("line preset is totally geodesic") {
    const auto spec = line(3, 0.0, 0.5);
    for (double s : {0.1, 0.7, 1.9}) {
        const auto st = eval_profile(spec.curve(), s);
        CHECK(st.alpha == 0.0);
        CHECK(st.k == 0.0);
        const auto W = spec.center().jet(s).W;
        CHECK(W(0) == 0.5);
        CHECK(W(1) == 0.0);
        CHECK(W(2) == 0.0);
    }
    CHECK_THROWS_AS(eval_profile(spec.curve(), 0.0), SingularityError);
}

TEST_CASE("eval_profile rejects s outside the domain") {
    CHECK_THROWS_AS(eval_profile(catenoid3(1.0).curve(), 3.5), DomainError);
    CHECK_THROWS_AS(eval_profile(standard_circle(3).curve(), -7.0), DomainError);
}

TEST_CASE("arclength report") {
    CHECK(check_arclength(standard_circle(3).curve(), 50).max_deviation == 0.0);

    const UniformCircleCurve doubled(1.0, 2.0, 0.0, {0, 3});
    const auto rep = check_arclength(doubled, 10);
    CHECK(rep.max_deviation == doctest::Approx(3.0));
    CHECK(rep.flagged);
    CHECK_THROWS_AS(check_arclength(doubled, 1), ValidationError);
}

TEST_CASE("preset identities at every sample") {
    for (const auto& spec : all_presets()) {
        CAPTURE(spec.name());
        const Interval d = spec.domain();
        CHECK(check_arclength(spec.curve(), 101).max_deviation < 1e-9);
        for (int i = 1; i < 40; ++i) {
            const double s = d.lo + d.length() * i / 40.0;
            const auto st = eval_profile(spec.curve(), s);
            CHECK(std::abs(std::cos(st.alpha) - st.dr) < 1e-12);
            CHECK(std::abs(std::sin(st.alpha) - st.r * st.dphi) < 1e-12);
            CHECK(std::abs(st.theta - st.phi - st.alpha) < 1e-12);
            const double c = std::cos(st.alpha), sn = std::sin(st.alpha);
            CHECK(std::abs(c * c + sn * sn - 1) < 1e-12);

            // k against a central difference of the tangent angle
            const double h = 1e-4;
            const auto p = eval_profile(spec.curve(), s + h), m = eval_profile(spec.curve(), s - h);
            const double dtheta = std::remainder(p.theta - m.theta, 2 * kPi) / (2 * h);
            CHECK(std::abs(dtheta - st.k) < 1e-6);
        }
    }
}

TEST_CASE("curvature is exact on the simplest presets") {
    const auto circ = standard_circle(5);
    const auto ln = line(4, 1.1, -0.3);
    for (double s : {-3.0, -0.2, 0.5, 2.9}) CHECK(eval_profile(circ.curve(), s).k == 1.0);
    for (double s : {0.01, 0.5, 1.7}) CHECK(eval_profile(ln.curve(), s).k == 0.0);
}

TEST_CASE("center velocity derivatives against finite differences") {
    const PolynomialCenter W({vec({0.2, -0.1, 0.15}), vec({0.05, 0.1, -0.2}), vec({-0.1, 0.05, 0.1}),
                              vec({0.03, 0, -0.02})});
    const double h = 1e-4;
    for (double s : {-0.8, 0.0, 0.35, 0.9}) {
        const auto j = W.jet(s), p = W.jet(s + h), m = W.jet(s - h);
        CHECK((j.dW - (p.W - m.W) / (2 * h)).norm() < 1e-6);
        CHECK((j.ddW - (p.dW - m.dW) / (2 * h)).norm() < 1e-6);
    }
    CHECK(ZeroCenter(3).is_zero());
    CHECK(PolynomialCenter({vec({0, 0, 0})}).is_zero());
    CHECK_FALSE(W.is_zero());
}

TEST_CASE("spec construction checks") {
    auto curve = standard_circle(3).curve_ptr();
    CHECK_THROWS_AS(FoliatedSpec(2, curve, std::make_shared<ZeroCenter>(2), 0.0), ValidationError);
    CHECK_THROWS_AS(FoliatedSpec(3, curve, std::make_shared<ZeroCenter>(4), 0.0), ValidationError);
    CHECK_THROWS_AS(FoliatedSpec(3, curve, std::make_shared<ZeroCenter>(3), 100.0), ValidationError);
    CHECK_THROWS_AS(catenoid3(0.0), ValidationError);
    CHECK_THROWS_AS(catenoid3(-1.0), ValidationError);
    CHECK_THROWS_AS(centered_circle(3, 0.0), ValidationError);
    CHECK_THROWS_AS(make_preset("helix", {}), ValidationError);
    CHECK_THROWS_AS(make_preset("line", {{"n", 3}, {"rho", 2}}), ValidationError);
    CHECK_THROWS_AS(make_preset("catenoid3", {{"C_geo", -2}}), ValidationError);
}

TEST_CASE("make_preset resolves every name") {
    for (const auto& name : preset_names()) {
        CAPTURE(name);
        const auto spec = make_preset(name, {});
        CHECK(spec.n() >= 3);
        CHECK(spec.name() == name);
    }
    CHECK(make_preset("standard_circle", {{"n", 5}}).n() == 5);
    CHECK(make_preset("centered_circle", {{"n", 3}, {"rho", 2.5}}).curve().jet(0.3).r == doctest::Approx(2.5));
}

TEST_CASE("curve from the fixed-point orbit is the standard circle") {
    const HSParams p(3, 3.0);
    const auto fp = fixed_points(p);
    auto traj = std::make_shared<HSTrajectory>(integrate(p, fp.state, 0.0, 20.0));
    const auto curve = curve_from_hs_trajectory(traj, 0.4);
    const UniformCircleCurve circle(1.0, 1.0, 0.4, {0, 20});
    for (double s : {0.0, 3.3, 10.0, 19.9}) {
        const auto a = eval_profile(*curve, s), b = eval_profile(circle, s);
        CHECK(std::abs(a.r - b.r) < 1e-10);
        CHECK(std::abs(a.phi - b.phi) < 1e-9);
        CHECK(std::abs(a.k - b.k) < 1e-9);
    }
    CHECK(check_arclength(*curve, 200).max_deviation < 1e-8);
}

TEST_CASE("curve from the zero-energy orbit is the catenoid profile") {
    // flux 2 at r = 1 with alpha = pi/2 lies on E = 0
    const HSParams p(3, 2.0);
    auto traj = std::make_shared<HSTrajectory>(integrate_two_sided(p, {kPi / 2, 1.0}, -5.0, 5.0));
    const auto curve = curve_from_hs_trajectory(traj, 0.0);
    const auto& cat = catenoid3(1.0, 5.0).curve();
    for (double s = -5.0; s <= 5.0; s += 0.25) {
        const auto a = eval_profile(*curve, s), b = eval_profile(cat, s);
        CHECK(std::abs(a.r - b.r) < 1e-8);
        CHECK(std::abs(a.phi - b.phi) < 1e-8);
    }
    CHECK(check_arclength(*curve, 300).max_deviation < 1e-8);
}

TEST_CASE("single-point trajectory gives a single-point curve") {
    const HSParams p(3, 3.0);
    auto traj = std::make_shared<HSTrajectory>(integrate(p, {1.0, 1.5}, 0.7, 0.7));
    CHECK(traj->single_point());
    const auto curve = curve_from_hs_trajectory(traj, 0.0);
    CHECK(curve->domain().lo == 0.7);
    CHECK(curve->domain().hi == 0.7);
    CHECK(eval_profile(*curve, 0.7).r == doctest::Approx(1.5));
    CHECK_THROWS_AS(eval_profile(*curve, 0.8), DomainError);
}

TEST_CASE("collapsing trajectory is refused") {
    const HSParams p(3, 0.0);
    // C = 0 from alpha = pi heads into the origin; rounding in sin(pi) only
    // turns it around at r ~ 1e-5, so the collapse radius is set above that
    IntegratorOptions o;
    o.r_min = 1e-3;
    auto traj = std::make_shared<HSTrajectory>(integrate(p, {kPi, 1.0}, 0.0, 5.0, o));
    CHECK(traj->termination() == Termination::RadiusCollapse);
    CHECK_THROWS_AS(curve_from_hs_trajectory(traj, 0.0), SingularityError);
}
