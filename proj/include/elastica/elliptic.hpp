#pragma once

// Jacobi elliptic integrals and functions, parameter convention m = k^2.
//
// Complete integrals use the arithmetic-geometric mean, incomplete integrals
// use Carlson's symmetric forms R_F and R_D (duplication algorithm), and
// sn/cn/dn use the descending Landen (AGM) transformation.
//
// Accuracy: absolute error below 1e-12 for m <= 1 - 1e-9 and |x| <= 100.
// Operations that need K(m) reject m > 1 - 1e-9 instead of degrading.

#include <numbers>

namespace elastica::elliptic {

// Largest m accepted by operations that depend on K(m).
inline constexpr double kMaxParameter = 1.0 - 1e-9;

// Limits of the complete-integral derivatives at m = 0.
inline constexpr double kDerivKAtZero = std::numbers::pi / 8.0;
inline constexpr double kDerivEAtZero = -std::numbers::pi / 8.0;

// The parameter m in [0, 1]. Construction from a double validates the range.
class EllipticParameter {
public:
    EllipticParameter(double m); // NOLINT(google-explicit-constructor)
    double value() const { return m_; }
    operator double() const { return m_; } // NOLINT(google-explicit-constructor)

private:
    double m_;
};

struct EllipticValue {
    double value = 0.0;
    double est_abs_error = 0.0;
};

// Carlson symmetric integrals. x, y, z >= 0 with at most one zero (R_F) and
// z > 0, x + y > 0 (R_D).
double carlson_rf(double x, double y, double z);
double carlson_rd(double x, double y, double z);

double comp_K(EllipticParameter m);
double comp_E(EllipticParameter m);
EllipticValue comp_K_with_error(EllipticParameter m);
EllipticValue comp_E_with_error(EllipticParameter m);

// Incomplete integrals F(x, m) = int_0^x (1 - m sin^2)^{-1/2},
// E(x, m) = int_0^x (1 - m sin^2)^{1/2}. Defined for every real x.
double ellint_F(double x, EllipticParameter m);
double ellint_E_inc(double x, EllipticParameter m);
EllipticValue ellint_F_with_error(double x, EllipticParameter m);
EllipticValue ellint_E_inc_with_error(double x, EllipticParameter m);

// Jacobi amplitude, the inverse of F(., m).
double am(double x, EllipticParameter m);

struct JacobiTriple {
    double sn;
    double cn;
    double dn;
};

// sn, cn, dn evaluated together; m = 1 gives tanh, sech, sech.
JacobiTriple jacobi(double x, EllipticParameter m);
double sn(double x, EllipticParameter m);
double cn(double x, EllipticParameter m);
double dn(double x, EllipticParameter m);

// Parameter derivatives, m in (0, 1).
double dK_dm(EllipticParameter m);
double dE_dm(EllipticParameter m);
double dF_dm(double x, EllipticParameter m);
double dE_inc_dm(double x, EllipticParameter m);

} // namespace elastica::elliptic
