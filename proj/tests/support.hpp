#pragma once

#include <cmath>
#include <initializer_list>
#include <memory>
#include <numbers>

#include <doctest.h>

#include "sigma/profile_curves.hpp"

namespace testing {

inline constexpr double kPi = std::numbers::pi;

inline sigma::Vec vec(std::initializer_list<double> v) {
    sigma::Vec out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double c : v) out(i++) = c;
    return out;
}

inline sigma::Vec unit(std::initializer_list<double> v) { return vec(v).normalized(); }

// Same immersion as the fixture in tests/oracles/oracle_values.py.
inline sigma::FoliatedSpec mp_fixture() {
    auto curve = std::make_shared<sigma::TurningAngleCurve>(std::vector<double>{0.3, 0.7, 0.2, -0.1},
                                                            std::complex<double>(1.2, 0.4), sigma::Interval{-1, 1});
    auto W = std::make_shared<sigma::PolynomialCenter>(
        std::vector<sigma::Vec>{vec({0.2, -0.1, 0.15}), vec({0.05, 0.1, -0.2}), vec({-0.1, 0.05, 0.1})});
    return sigma::FoliatedSpec(3, curve, W, 0.0, "fixture");
}

inline bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace testing
