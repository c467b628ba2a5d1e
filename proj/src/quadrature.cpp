#include "sigma/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include <boost/math/quadrature/gauss.hpp>

#include "sigma/errors.hpp"

namespace sigma {

namespace {

using Rule = boost::math::quadrature::gauss<double, 20>;

template <class F, class T>
T apply_rule(const F& f, double a, double b, T acc) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    const auto& x = Rule::abscissa();
    const auto& w = Rule::weights();
    // 20 points: abscissae are the non-negative half, none is zero.
    for (std::size_t i = 0; i < x.size(); ++i) {
        acc += w[i] * (f(mid - half * x[i]) + f(mid + half * x[i]));
    }
    return acc * half;
}

}  // namespace

Vec gauss_legendre(const std::function<Vec(double)>& f, double a, double b) {
    Vec zero = f(a) * 0.0;
    if (a == b) return zero;
    return apply_rule(f, a, b, zero);
}

double gauss_legendre(const std::function<double(double)>& f, double a, double b) {
    if (a == b) return 0.0;
    return apply_rule(f, a, b, 0.0);
}

CumulativeQuadrature::CumulativeQuadrature(std::function<Vec(double)> f, int dim,
                                           std::vector<double> breakpoints, double origin,
                                           double abs_tol, int max_depth)
    : f_(std::move(f)), dim_(dim) {
    breakpoints.push_back(origin);
    std::sort(breakpoints.begin(), breakpoints.end());
    breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());

    // Refine each cell until the rule is self-consistent.
    std::vector<double> nodes{breakpoints.front()};
    struct Cell {
        double a, b;
        int depth;
    };
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        std::vector<Cell> stack{{breakpoints[i], breakpoints[i + 1], 0}};
        std::vector<double> accepted;
        while (!stack.empty()) {
            Cell c = stack.back();
            stack.pop_back();
            const double m = 0.5 * (c.a + c.b);
            Vec whole = gauss_legendre(f_, c.a, c.b);
            Vec split = gauss_legendre(f_, c.a, m) + gauss_legendre(f_, m, c.b);
            if ((whole - split).lpNorm<Eigen::Infinity>() <= abs_tol || c.b - c.a < 1e-9) {
                accepted.push_back(c.b);
                continue;
            }
            if (c.depth >= max_depth) throw NumericError("cumulative quadrature: refinement did not converge");
            // Push right half first so the left half is processed first.
            stack.push_back({m, c.b, c.depth + 1});
            stack.push_back({c.a, m, c.depth + 1});
        }
        nodes.insert(nodes.end(), accepted.begin(), accepted.end());
    }
    nodes_ = std::move(nodes);

    // Cumulative values, anchored at the origin.
    const auto k0 = static_cast<std::size_t>(
        std::lower_bound(nodes_.begin(), nodes_.end(), origin) - nodes_.begin());
    cumulative_.assign(nodes_.size(), Vec::Zero(dim_));
    for (std::size_t k = k0 + 1; k < nodes_.size(); ++k)
        cumulative_[k] = cumulative_[k - 1] + gauss_legendre(f_, nodes_[k - 1], nodes_[k]);
    for (std::size_t k = k0; k-- > 0;)
        cumulative_[k] = cumulative_[k + 1] - gauss_legendre(f_, nodes_[k], nodes_[k + 1]);
}

Vec CumulativeQuadrature::operator()(double s) const {
    if (s < nodes_.front() || s > nodes_.back()) throw DomainError("cumulative quadrature: s outside range");
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), s);
    std::size_t k = it == nodes_.begin() ? 0 : static_cast<std::size_t>(it - nodes_.begin()) - 1;
    if (k + 1 == nodes_.size() && k > 0) --k;
    if (s == nodes_[k]) return cumulative_[k];
    return cumulative_[k] + gauss_legendre(f_, nodes_[k], s);
}

}  // namespace sigma
