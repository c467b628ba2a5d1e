#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace sigma {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// A point or vector of C^n stored as (re, im).
struct ComplexPoint {
    Vec re;
    Vec im;

    ComplexPoint() = default;
    ComplexPoint(Vec r, Vec i) : re(std::move(r)), im(std::move(i)) {}
    explicit ComplexPoint(int n) : re(Vec::Zero(n)), im(Vec::Zero(n)) {}

    int dim() const { return static_cast<int>(re.size()); }

    // Multiplication by i.
    ComplexPoint J() const { return {-im, re}; }

    // Flattened (re, im) in R^{2n}.
    Vec flat() const;
    static ComplexPoint from_flat(const Vec& v);

    ComplexPoint operator+(const ComplexPoint& o) const { return {re + o.re, im + o.im}; }
    ComplexPoint operator-(const ComplexPoint& o) const { return {re - o.re, im - o.im}; }
    ComplexPoint operator*(double t) const { return {re * t, im * t}; }
    ComplexPoint& operator+=(const ComplexPoint& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
};

// e^{i t} * v for a real vector v.
ComplexPoint rotate_real(double t, const Vec& v);

// Euclidean inner product of R^{2n}.
double dot(const ComplexPoint& a, const ComplexPoint& b);
double norm(const ComplexPoint& a);

// Symplectic form omega(u, v) = <J u, v>.
double omega(const ComplexPoint& u, const ComplexPoint& v);

// Complex determinant of the n x n matrix whose columns are the given vectors.
std::complex<double> det_c(const std::vector<ComplexPoint>& cols);

}  // namespace sigma
