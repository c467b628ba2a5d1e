#include <cmath>
#include <random>

#include "sigma/errors.hpp"
#include "sigma/foliation_core.hpp"
#include "sigma/oracle_verify.hpp"
#include "support.hpp"

using namespace sigma;
using testing::kPi;
using testing::unit;
using testing::vec;

namespace {

double wrap(double a) {
    a = std::fmod(a, 2 * kPi);
    return a < 0 ? a + 2 * kPi : a;
}

Vec random_direction(std::mt19937_64& rng, int n) {
    std::normal_distribution<double> N(0, 1);
    Vec x(n);
    for (int i = 0; i < n; ++i) x(i) = N(rng);
    return x.normalized();
}

}  // namespace

TEST_CASE("tangent frame") {
    SUBCASE("axis aligned") {
        const auto f = tangent_frame(vec({1, 0, 0}));
        REQUIRE(f.v.size() == 2);
        CHECK((f.v[0] - vec({0, 1, 0})).norm() < 1e-15);
        CHECK((f.v[1] - vec({0, 0, 1})).norm() < 1e-15);
    }
    SUBCASE("orthonormal, oriented and deterministic") {
        std::mt19937_64 rng(3);
        for (int n : {3, 4, 5, 7}) {
            for (int rep = 0; rep < 30; ++rep) {
                Vec x = random_direction(rng, n);
                if (rep == 0) x = -Vec::Unit(n, 0);  // the antipodal branch
                if (rep == 1) x = Vec::Unit(n, 1);
                const auto f = tangent_frame(x);
                Mat M(n, n);
                M.col(0) = f.x;
                for (int j = 0; j < n - 1; ++j) M.col(j + 1) = f.v[j];
                CHECK((M.transpose() * M - Mat::Identity(n, n)).norm() < 1e-12);
                CHECK(M.determinant() == doctest::Approx(1.0).epsilon(1e-12));
                const auto g = tangent_frame(x);
                for (int j = 0; j < n - 1; ++j) CHECK((g.v[j] - f.v[j]).norm() == 0.0);
            }
        }
    }
    SUBCASE("input checks") {
        CHECK_THROWS_AS(tangent_frame(vec({0, 0, 0})), ValidationError);
        CHECK(std::abs(normalize_direction(vec({3, 4, 0})).norm() - 1) < 1e-15);
        CHECK_THROWS_AS(normalize_direction(vec({0, 0, 0})), ValidationError);
    }
}

TEST_CASE("immersion values") {
    const auto circ = eval_immersion(standard_circle(3), kPi / 2, vec({1, 0, 0}));
    CHECK(circ.re.norm() < 1e-15);
    CHECK((circ.im - vec({1, 0, 0})).norm() < 1e-15);

    const double w = 0.3;
    const auto ln = line(3, 0.0, w);
    const Vec x = unit({0.2, -0.5, 0.8});
    for (double s : {0.0, 0.6, 1.5}) {
        const auto p = eval_immersion(ln, s, x);
        const Vec expect = s * x + s * vec({w, 0, 0});
        CHECK((p.re - expect).norm() < 1e-12);
        CHECK(p.im.norm() < 1e-12);
    }

    const auto cat = eval_immersion(catenoid3(1.0), 0.0, x);
    CHECK((cat.re - x).norm() < 1e-15);
    CHECK(cat.im.norm() < 1e-15);
}

TEST_CASE("induced metric") {
    SUBCASE("centered is diagonal") {
        const auto spec = catenoid3(1.0);
        const Vec x = unit({0.3, 0.3, -0.9});
        const auto fd = induced_metric(spec, 1.2, tangent_frame(x));
        const double r2 = 1 + 1.2 * 1.2;
        Mat expect = Mat::Identity(3, 3) * r2;
        expect(0, 0) = 1;
        CHECK((fd.metric() - expect).norm() < 1e-13);
    }
    SUBCASE("alpha = 0 with W parallel to x") {
        const auto fd = induced_metric(line(3, 0.0, 0.1), 0.8, tangent_frame(vec({1, 0, 0})));
        CHECK(fd.g11 == doctest::Approx(1.21).epsilon(1e-14));
        CHECK(fd.g1j.norm() < 1e-15);
    }
}

TEST_CASE("orthonormal frame coefficients") {
    SUBCASE("W = 0") {
        const auto fd = orthonormal_frame(catenoid3(2.0), 0.4, tangent_frame(unit({1, 2, 3})));
        CHECK(fd.A == 1.0);
        CHECK(fd.Bj.norm() == 0.0);
    }
    SUBCASE("alpha = pi/2 and <W,x> = 1") {
        // circle of radius 1 with W = e1, evaluated at x = e1
        const auto spec = epicycloid(3, 1.0, vec({1, 0, 0}));
        const auto fd = orthonormal_frame(spec, 0.3, tangent_frame(vec({1, 0, 0})));
        CHECK(fd.A == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-14));
    }
    SUBCASE("g-orthonormal on random specs") {
        for (int n : {3, 4, 5})
            for (std::uint64_t seed = 1; seed <= 6; ++seed) {
                const auto spec = random_spec(n, seed);
                const auto plan = make_sample_plan(n, spec.domain(), 8, seed);
                for (const auto& p : plan.points) {
                    const auto fd = orthonormal_frame(spec, p.s, tangent_frame(p.x));
                    const Mat E = fd.frame_matrix();
                    CHECK((E.transpose() * fd.metric() * E - Mat::Identity(n, n)).norm() < 1e-9);
                    CHECK(fd.A > 0);
                    const auto d = point_data(spec, p.s, p.x);
                    const double ca = std::cos(d.p.alpha);
                    CHECK(fd.A == doctest::Approx(1 / std::sqrt(1 + 2 * ca * d.w + d.w * d.w)).epsilon(1e-14));
                    // pushed-forward frame is orthonormal in R^{2n}
                    for (int a = 0; a < n; ++a)
                        for (int b = 0; b < n; ++b)
                            CHECK(std::abs(dot(fd.e[a], fd.e[b]) - (a == b ? 1.0 : 0.0)) < 1e-9);
                }
            }
    }
}

TEST_CASE("lagrangian angle") {
    CHECK(lagrangian_angle(standard_circle(3), 0.0, vec({1, 0, 0})) == doctest::Approx(kPi / 2));
    CHECK(lagrangian_angle(catenoid3(1.0), 0.0, unit({1, 1, 0})) == doctest::Approx(kPi / 2));
    // catenoid at s = 1: alpha = pi/4, phi = pi/4, so beta = pi/4 + 3 pi/4 = pi
    CHECK(lagrangian_angle(catenoid3(1.0), 1.0, unit({1, 1, 0})) == doctest::Approx(kPi));

    SUBCASE("centered reduction is exact") {
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            const auto spec = random_spec(4, seed, true);
            const auto plan = make_sample_plan(4, spec.domain(), 10, seed);
            for (const auto& p : plan.points) {
                const auto st = eval_profile(spec.curve(), p.s);
                CHECK(lagrangian_angle(spec, p.s, p.x) == wrap(st.alpha + 4 * st.phi));
                const auto cd = mean_curvature_coeffs(spec, p.s, tangent_frame(p.x));
                CHECK(cd.aj.norm() == 0.0);
            }
        }
    }
    SUBCASE("undefined where e^{i alpha} + <W,x> vanishes") {
        // alpha = 0 on the ray, <W,x> = -1
        CHECK_THROWS_AS(lagrangian_angle(line(3, 0.0, -1.0), 0.5, vec({1, 0, 0})), UndefinedAngleError);
    }
    SUBCASE("range") {
        const auto spec = random_spec(3, 9);
        for (const auto& p : make_sample_plan(3, spec.domain(), 40, 2).points) {
            const double b = lagrangian_angle(spec, p.s, p.x);
            CHECK(b >= 0);
            CHECK(b < 2 * kPi);
        }
    }
    SUBCASE("unwrapping") {
        CHECK(unwrap_near(0.1, 2 * kPi - 0.1) == doctest::Approx(2 * kPi + 0.1));
        CHECK(unwrap_near(6.2, 0.05) == doctest::Approx(6.2 - 2 * kPi));
        CHECK(unwrap_near(1.0, 1.2) == doctest::Approx(1.0));
    }
}

TEST_CASE("curvature scalar") {
    const auto cat = catenoid3(1.0);
    for (double s : {-1.0, 0.3, 2.0}) {
        const Vec x = unit({1, -2, 0.5});
        CHECK(curvature_scalar_B(cat, s, x) == eval_profile(cat.curve(), s).k);
        CHECK(curvature_scalar_B(cat, s, x, FormulaVariant::Alternate) == eval_profile(cat.curve(), s).k);
    }
    CHECK(curvature_scalar_B(standard_circle(3), 0.4, vec({0, 1, 0})) == 1.0);

    SUBCASE("re-association") {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> U(-1, 1);
        for (int i = 0; i < 200; ++i) {
            PointData d;
            d.p.r = 0.3 + std::abs(U(rng)) * 2;
            d.p.alpha = U(rng) * kPi;
            d.p.k = U(rng) * 3;
            d.w = U(rng);
            d.dw = U(rng);
            d.W2 = d.w * d.w + std::abs(U(rng));
            const double sa = std::sin(d.p.alpha), ca = std::cos(d.p.alpha), r = d.p.r;
            // Horner in <W,x>
            const double geo = d.p.k - sa * d.dw + sa / r * d.W2 + d.w * (d.p.k * ca + ca * sa / r);
            const double alt = (d.p.k + sa * d.dw) + d.w * ((d.p.k * ca + ca * sa / r) + d.w * (sa / r));
            CHECK(std::abs(curvature_scalar_B(d, FormulaVariant::Geometric) - geo) < 1e-14 * (1 + std::abs(geo)));
            CHECK(std::abs(curvature_scalar_B(d, FormulaVariant::Alternate) - alt) < 1e-14 * (1 + std::abs(alt)));
        }
    }
    SUBCASE("second-derivative bracket agrees with B") {
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            const auto spec = random_spec(4, seed);
            for (const auto& p : make_sample_plan(4, spec.domain(), 10, seed).points) {
                const auto d = point_data(spec, p.s, p.x);
                const auto fr = tangent_frame(p.x);
                Vec Wv(3);
                for (int j = 0; j < 3; ++j) Wv(j) = d.c.W.dot(fr.v[j]);
                for (auto v : {FormulaVariant::Geometric, FormulaVariant::Alternate})
                    CHECK(std::abs(mean_curvature_bracket(d, Wv, v) - curvature_scalar_B(d, v)) < 1e-12);
            }
        }
    }
}

TEST_CASE("mean curvature coefficients") {
    SUBCASE("standard circle") {
        const auto cd = mean_curvature_coeffs(standard_circle(3), 0.0, tangent_frame(vec({1, 0, 0})));
        CHECK(cd.a == doctest::Approx(-3.0).epsilon(1e-14));
        CHECK(cd.aj.norm() == 0.0);
        CHECK(norm(cd.nJH) / 3 == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("centered closed form") {
        const auto spec = random_spec(5, 4, true);
        for (double s : {-0.5, 0.1, 0.7}) {
            const auto st = eval_profile(spec.curve(), s);
            const auto cd = mean_curvature_coeffs(spec, s, tangent_frame(unit({1, 2, 0, -1, 3})));
            CHECK(cd.a == doctest::Approx(-(st.k + 4 * std::sin(st.alpha) / st.r)).epsilon(1e-13));
        }
    }
    SUBCASE("a_j from raw inputs") {
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            const auto spec = random_spec(3 + seed % 3, seed);
            const int n = spec.n();
            for (const auto& p : make_sample_plan(n, spec.domain(), 10, seed).points) {
                const auto fr = tangent_frame(p.x);
                const auto cd = mean_curvature_coeffs(spec, p.s, fr);
                const auto st = eval_profile(spec.curve(), p.s);
                const Vec W = spec.center().jet(p.s).W;
                const double ca = std::cos(st.alpha), w = W.dot(p.x);
                const double A2 = 1 / (1 + 2 * ca * w + w * w);
                for (int j = 0; j < n - 1; ++j)
                    CHECK(std::abs(cd.aj(j) - A2 * std::sin(st.alpha) * W.dot(fr.v[j]) / st.r) < 1e-12);
            }
        }
    }
}

TEST_CASE("Delta beta polynomial") {
    SUBCASE("harmonic on the standard circle") {
        for (int n : {3, 4, 6}) {
            const auto db = delta_beta_poly_f(standard_circle(n), 0.3, Vec::Unit(n, 1));
            CHECK(std::abs(db.f) < 1e-13);
        }
    }
    SUBCASE("values of the independent high-precision oracle") {
        // tests/oracles/oracle_values.py, Laplacian of the angle on its fixture
        const auto spec = testing::mp_fixture();
        const auto a = delta_beta_poly_f(spec, 0.3, unit({1, 0.5, -0.3}));
        const auto b = delta_beta_poly_f(spec, -0.4, unit({0.2, -0.8, 0.5}));
        CHECK(a.delta_beta == doctest::Approx(-1.76488095778975).epsilon(1e-11));
        CHECK(b.delta_beta == doctest::Approx(-1.28375935578461).epsilon(1e-11));
    }
    SUBCASE("centered one-dimensional identity") {
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            const int n = 3 + static_cast<int>(seed % 3);
            const auto spec = random_spec(n, seed, true);
            for (const auto& p : make_sample_plan(n, spec.domain(), 6, seed).points) {
                const auto db = delta_beta_poly_f(spec, p.s, p.x);
                CHECK(std::abs(db.delta_beta - delta_beta_centered(spec, p.s)) < 1e-9);
            }
        }
    }
    SUBCASE("blocks sum to f") {
        const auto db = delta_beta_poly_f(random_spec(4, 2), 0.2, unit({1, 1, 1, 1}));
        CHECK(db.f == db.I + db.II + db.III + db.IV);
        CHECK(db.delta_beta == doctest::Approx(std::pow(db.A, 6) * db.f).epsilon(1e-14));
    }
    SUBCASE("r = 0 is singular") {
        DeltaBetaInputs in;
        in.r = 0;
        CHECK_THROWS_AS(delta_beta_blocks(in), SingularityError);
    }
}

TEST_CASE("coefficient of <W'',x>") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(-1, 1);
    for (int i = 0; i < 100; ++i) {
        DeltaBetaInputs in;
        in.n = 3 + i % 4;
        in.r = 0.2 + 2 * std::abs(U(rng));
        in.alpha = U(rng) * kPi;
        in.k = 2 * U(rng);
        in.dk = 2 * U(rng);
        in.w = U(rng);
        in.dw = U(rng);
        in.ddw = U(rng);
        in.W2 = in.w * in.w + std::abs(U(rng));
        in.WdW = U(rng);
        const auto alt = accel_coefficient_check(in, FormulaVariant::Alternate);
        CHECK(alt.defect < 1e-12);
        // the geometric form carries the opposite sign
        const auto geo = accel_coefficient_check(in, FormulaVariant::Geometric);
        CHECK(std::abs(geo.slope + geo.expected) < 1e-12);
    }
    DeltaBetaInputs flat;
    flat.alpha = 0;
    flat.w = 0.4;
    CHECK(accel_coefficient_check(flat, FormulaVariant::Alternate).slope == 0.0);
    CHECK(accel_coefficient_check(flat, FormulaVariant::Geometric).slope == 0.0);
    DeltaBetaInputs centered;
    centered.alpha = 1.1;
    centered.r = 0.7;
    const auto c = accel_coefficient_check(centered, FormulaVariant::Alternate);
    CHECK(c.slope == doctest::Approx(-std::sin(1.1)).epsilon(1e-14));
}

TEST_CASE("leading term in <W,x>") {
    for (int n : {3, 4, 5}) {
        for (double alpha : {0.4, 1.3, -2.0}) {
            const double r = 0.8, wx = 0.9;
            const auto alt = leading_term_fit(n, r, alpha, wx, FormulaVariant::Alternate);
            const double expect = (-n * n + n + 2) * std::sin(alpha) * std::pow(wx, 5) / (r * r);
            CHECK(alt.expected == doctest::Approx(expect).epsilon(1e-14));
            CHECK(alt.relative_error < 1e-6);
            CHECK(alt.fit_residual < 1e-8);
            const auto geo = leading_term_fit(n, r, alpha, wx, FormulaVariant::Geometric);
            CHECK(geo.leading == doctest::Approx(-n * (n - 2) * std::sin(alpha) * std::pow(wx, 5) / (r * r)).epsilon(1e-6));
            CHECK(geo.fit_residual < 1e-8);
        }
    }
    const auto ten = leading_term_fit(4, 1.0, kPi / 2, 1.0, FormulaVariant::Alternate);
    CHECK(ten.leading == doctest::Approx(-10.0).epsilon(1e-6));
    CHECK_THROWS_AS(leading_term_fit(3, 1.0, 0.0, 1.0, FormulaVariant::Alternate), ValidationError);
    CHECK_THROWS_AS(leading_term_fit(2, 1.0, 1.0, 1.0, FormulaVariant::Alternate), ValidationError);
}

TEST_CASE("variant names") {
    CHECK(to_string(FormulaVariant::Geometric) == "geometric");
    CHECK(to_string(FormulaVariant::Alternate) == "alternate");
}
