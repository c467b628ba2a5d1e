#include "sigma/linalg.hpp"

#include <cmath>

namespace sigma {

Vec ComplexPoint::flat() const {
    Vec v(2 * re.size());
    v << re, im;
    return v;
}

ComplexPoint ComplexPoint::from_flat(const Vec& v) {
    const auto n = v.size() / 2;
    return {v.head(n), v.tail(n)};
}

ComplexPoint rotate_real(double t, const Vec& v) { return {std::cos(t) * v, std::sin(t) * v}; }

double dot(const ComplexPoint& a, const ComplexPoint& b) { return a.re.dot(b.re) + a.im.dot(b.im); }

double norm(const ComplexPoint& a) { return std::sqrt(dot(a, a)); }

double omega(const ComplexPoint& u, const ComplexPoint& v) { return u.re.dot(v.im) - u.im.dot(v.re); }

std::complex<double> det_c(const std::vector<ComplexPoint>& cols) {
    const int n = static_cast<int>(cols.size());
    Eigen::MatrixXcd m(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) m(i, j) = {cols[j].re(i), cols[j].im(i)};
    return m.determinant();
}

}  // namespace sigma
