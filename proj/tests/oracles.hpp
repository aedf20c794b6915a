#pragma once

// Test-only oracles, independent of the library's computation paths.

#include <holofourier/common.hpp>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <functional>

namespace oracle {

/// Composite Simpson on [a, b] with n panels (n even).
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    if (n % 2) ++n;
    double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

/// Modified Bessel I_n(x) by the ascending series sum_k (x/2)^{n+2k}/(k!(k+n)!).
inline double bessel_i(int n, double x) {
    n = std::abs(n);
    double half = x / 2.0;
    double term = 1.0;
    for (int i = 1; i <= n; ++i) term *= half / i;  // (x/2)^n / n!
    double sum = term;
    for (int k = 1; k < 200; ++k) {
        term *= half * half / (k * (k + n));
        sum += term;
        if (term < 1e-300 || term < 1e-18 * sum) break;
    }
    return sum;
}

/// Largest singular value of a 2x2 complex matrix via Eigen's SVD.
inline double sigma_max(const Eigen::Matrix2cd& m) {
    Eigen::JacobiSVD<Eigen::Matrix2cd> svd(m);
    return svd.singularValues()(0);
}

/// Exact binomial coefficients as doubles.
inline double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace oracle
