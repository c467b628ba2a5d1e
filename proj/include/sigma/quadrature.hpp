#pragma once

#include <functional>
#include <vector>

#include "sigma/linalg.hpp"

namespace sigma {

// Fixed 20-point Gauss-Legendre rule on [a, b] for vector integrands.
Vec gauss_legendre(const std::function<Vec(double)>& f, double a, double b);
double gauss_legendre(const std::function<double(double)>& f, double a, double b);

// s |-> int_{origin}^{s} f. Cells are refined once at construction until the
// 20-point rule agrees with its two-half split to abs_tol; evaluation then
// integrates from the nearest node on the left with the same fixed rule, so
// the result is smooth in s inside every cell.
class CumulativeQuadrature {
public:
    CumulativeQuadrature(std::function<Vec(double)> f, int dim, std::vector<double> breakpoints,
                         double origin, double abs_tol = 1e-12, int max_depth = 30);

    Vec operator()(double s) const;
    double lo() const { return nodes_.front(); }
    double hi() const { return nodes_.back(); }
    std::size_t cells() const { return nodes_.size() - 1; }

private:
    std::function<Vec(double)> f_;
    int dim_;
    std::vector<double> nodes_;
    std::vector<Vec> cumulative_;
};

}  // namespace sigma
