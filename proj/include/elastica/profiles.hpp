#pragma once

// Curvature-level solutions of the elastica equation.
//
// A spatial elastica that is not a segment has squared curvature
//   |kappa|^2(s) = A^2 (1 - (m/w) sn^2(A s / (2 sqrt w) + s0, m)),
// with 0 <= m <= w <= 1, w > 0, A > 0. The multiplier and the torsion constant
// follow from (m, w, A):
//   lambda = A^2 (3w - m - 1) / (2w),   4 c^2 = A^6 (1 - w)(w - m) / w^2.
// u = |kappa|^2 solves (u')^2 = P(u) = -u^3 + 2 lambda u^2 + 4 a u - 4 c^2 whose
// roots are a1 = A^2 (1 - 1/w) <= 0 <= a2 = A^2 (1 - m/w) <= a3 = A^2.

#include <functional>
#include <string>
#include <string_view>

namespace elastica::profiles {

struct CurvatureProfile {
    double m = 0.0;
    double w = 1.0;
    double A = 1.0;
    double s0 = 0.0;
};

// Throws DomainError unless 0 <= m <= w <= 1, w > 0, A > 0.
void validate(const CurvatureProfile& p);
CurvatureProfile make_profile(double m, double w, double A, double s0 = 0.0);

struct CubicRoots {
    double alpha1;
    double alpha2;
    double alpha3;
};

double profile_lambda(const CurvatureProfile& p);
double profile_c(const CurvatureProfile& p);
// The linear coefficient a in P(u) = -u^3 + 2 lambda u^2 + 4 a u - 4 c^2.
double profile_a(const CurvatureProfile& p);
CubicRoots profile_roots(const CurvatureProfile& p);

// Arclength period 4K(m) sqrt(w) / A of |kappa|^2; infinity when m = 0
// (constant) or m = 1 (not periodic).
double profile_period(const CurvatureProfile& p);

double kappa_sq(const CurvatureProfile& p, double s);
double kappa_sq_derivative(const CurvatureProfile& p, double s);
double kappa(const CurvatureProfile& p, double s);
double kappa_derivative(const CurvatureProfile& p, double s);

// t = c / |kappa|^2. Throws DomainError for planar profiles (c = 0).
double torsion(const CurvatureProfile& p, double s);

// Signed curvature of a planar profile (w = m: cn branch, w = 1: dn branch).
double signed_planar_curvature(const CurvatureProfile& p, int sign, double s);

// Solution of (u')^2 = (a1 - u)(a2 - u)(a3 - u).
class CubicOdeSolution {
public:
    // Nonconstant branch u = a3 - (a3 - a2) sn^2(sqrt(a3 - a1) s / 2 + s0, mu),
    // mu = (a3 - a2)/(a3 - a1). Requires a1 <= 0 <= a2 < a3.
    CubicOdeSolution(double alpha1, double alpha2, double alpha3, double s0);

    // u constant, equal to a root of the cubic.
    static CubicOdeSolution constant(double value);

    double operator()(double s) const;
    double derivative(double s) const;
    bool is_constant() const { return constant_; }
    double parameter() const { return mu_; }

private:
    CubicOdeSolution() = default;
    double a1_ = 0.0, a2_ = 0.0, a3_ = 0.0, s0_ = 0.0;
    double mu_ = 0.0, freq_ = 0.0;
    bool constant_ = false;
};

CubicOdeSolution solve_cubic_ode(double alpha1, double alpha2, double alpha3, double s0);

// Planar curvature families (signed curvature k).
enum class PlanarFamily { linear, wavelike, borderline, orbitlike, circular };

struct PlanarCurvatureFamily {
    PlanarFamily tag = PlanarFamily::linear;
    double m = 0.0;    // wavelike / orbitlike only
    double A = 1.0;    // amplitude, unused for linear
    double beta = 0.0; // phase
    int sign = 1;
};

void validate(const PlanarCurvatureFamily& f);
// alpha with A^2 = 4 alpha^2 m (wavelike) or A^2 = 4 alpha^2 (borderline, orbitlike).
double family_frequency(const PlanarCurvatureFamily& f);
double planar_lambda(const PlanarCurvatureFamily& f);
double planar_k(const PlanarCurvatureFamily& f, double s);
double planar_k_derivative(const PlanarCurvatureFamily& f, double s);

std::string to_string(PlanarFamily tag);
PlanarFamily parse_family(std::string_view name);

using ScalarFunction = std::function<double(double)>;

// 2 k'' + k^3 - lambda k with a central second difference.
double residual_planar(const ScalarFunction& k, double lambda, double s, double h);
// 2 k'' + k^3 - lambda k - 2 c^2 / k^3 for the curvature magnitude of a spatial elastica.
double residual_spatial(const ScalarFunction& k, double lambda, double c, double s, double h);

// Plain-text record with keys m, w, A, s0, sign.
struct ProfileRecord {
    CurvatureProfile profile;
    int sign = 1;
};

std::string format_profile_record(const ProfileRecord& rec);
ProfileRecord parse_profile_record(std::string_view text);

} // namespace elastica::profiles
