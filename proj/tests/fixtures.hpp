#pragma once

// Test curves built from elementary closed forms.

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Core>

#include "elastica/discrete.hpp"

namespace fixture {

using elastica::DiscreteCurve;
constexpr double kPi = std::numbers::pi;

// Regular N-gon inscribed in a circle of the given radius, traversed `fold` times.
inline DiscreteCurve circle(int n, double radius = 1.0, int fold = 1) {
    Eigen::MatrixXd v(2, n * fold);
    for (int i = 0; i < n * fold; ++i) {
        const double t = 2.0 * kPi * i / n;
        v.col(i) << radius * std::cos(t), radius * std::sin(t);
    }
    return DiscreteCurve(std::move(v), true);
}

inline DiscreteCurve ellipse(int n, double a, double b) {
    Eigen::MatrixXd v(2, n);
    for (int i = 0; i < n; ++i) {
        const double t = 2.0 * kPi * i / n;
        v.col(i) << a * std::cos(t), b * std::sin(t);
    }
    return DiscreteCurve(std::move(v), true);
}

// Circle polygon with vertices jittered radially and in angle.
inline DiscreteCurve jittered_circle(int n, double amount, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-amount, amount);
    Eigen::MatrixXd v(2, n);
    for (int i = 0; i < n; ++i) {
        const double t = 2.0 * kPi * (i + u(rng)) / n;
        const double r = 1.0 + u(rng);
        v.col(i) << r * std::cos(t), r * std::sin(t);
    }
    return DiscreteCurve(std::move(v), true);
}

// Random smooth loop from the origin back to the origin: sum of sin(pi k t)
// modes with random vector coefficients, n samples (final origin dropped).
inline Eigen::MatrixXd random_loop(int dim, int n, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    constexpr int kModes = 4;
    Eigen::MatrixXd coeff(dim, kModes);
    for (int j = 0; j < kModes; ++j)
        for (int d = 0; d < dim; ++d) coeff(d, j) = g(rng) / (j + 1);
    Eigen::MatrixXd v(dim, n);
    for (int i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / n;
        v.col(i).setZero();
        for (int j = 0; j < kModes; ++j) v.col(i) += coeff.col(j) * std::sin(kPi * (j + 1) * t);
    }
    return v;
}

// Closed curve made of r random loops through the origin, so the origin has
// multiplicity r.
inline DiscreteCurve random_r_fold(int r, int dim, int n_per_loop, std::mt19937_64& rng) {
    Eigen::MatrixXd v(dim, r * n_per_loop);
    for (int i = 0; i < r; ++i) v.middleCols(i * n_per_loop, n_per_loop) = random_loop(dim, n_per_loop, rng);
    return DiscreteCurve(std::move(v), true);
}

// Random closed curve: a closed Fourier series with a few modes.
inline DiscreteCurve random_closed(int dim, int n, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    constexpr int kModes = 5;
    Eigen::MatrixXd a(dim, kModes), b(dim, kModes);
    for (int j = 0; j < kModes; ++j)
        for (int d = 0; d < dim; ++d) {
            a(d, j) = g(rng) / (j + 1);
            b(d, j) = g(rng) / (j + 1);
        }
    Eigen::MatrixXd v(dim, n);
    for (int i = 0; i < n; ++i) {
        const double t = 2.0 * kPi * i / n;
        v.col(i).setZero();
        for (int j = 0; j < kModes; ++j) {
            v.col(i) += a.col(j) * std::cos((j + 1) * t) + b.col(j) * std::sin((j + 1) * t);
        }
    }
    return DiscreteCurve(std::move(v), true);
}

} // namespace fixture
