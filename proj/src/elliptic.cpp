#include "elastica/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "elastica/errors.hpp"

namespace elastica::elliptic {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kPi = std::numbers::pi;

void require_k_domain(double m, const char* op) {
    if (m > kMaxParameter) {
        throw DomainError(std::string(op) + ": parameter m=" + std::to_string(m) +
                          " too close to 1 (requires m <= 1 - 1e-9)");
    }
}

void require_open_unit(double m, const char* op) {
    if (m <= 0.0 || m >= 1.0) {
        throw DomainError(std::string(op) + ": requires m in (0, 1)");
    }
}

// AGM iteration shared by K and E: a_n together with
// sum_{n>=0} 2^{n-1} c_n^2, c_0^2 = m.
struct AgmResult {
    double a;
    double csum;
};

AgmResult agm(double m) {
    double a = 1.0;
    double g = std::sqrt(1.0 - m);
    double csum = 0.5 * m;
    double pow2 = 0.5;
    for (int it = 0; it < 64; ++it) {
        const double c = 0.5 * (a - g);
        if (std::abs(c) <= kEps * a) break;
        const double an = 0.5 * (a + g);
        g = std::sqrt(a * g);
        a = an;
        pow2 *= 2.0;
        csum += pow2 * c * c;
    }
    return {a, csum};
}

// x = j*pi + y with |y| <= pi/2.
struct Reduced {
    double j;
    double y;
};

Reduced reduce_half_period(double x) {
    const double j = std::nearbyint(x / kPi);
    return {j, x - j * kPi};
}

struct IncompletePair {
    double F;
    double E;
};

// F and E for |y| <= pi/2 sharing one R_F evaluation.
IncompletePair incomplete_principal(double y, double m, bool want_e) {
    const double s = std::sin(y);
    const double c = std::cos(y);
    const double delta = (1.0 - m) + m * c * c;
    const double rf = carlson_rf(c * c, delta, 1.0);
    IncompletePair out{s * rf, 0.0};
    if (want_e) {
        out.E = out.F - (m / 3.0) * s * s * s * carlson_rd(c * c, delta, 1.0);
    }
    return out;
}

} // namespace

EllipticParameter::EllipticParameter(double m) : m_(m) {
    if (!(m >= 0.0 && m <= 1.0)) {
        throw DomainError("elliptic parameter m=" + std::to_string(m) + " outside [0, 1]");
    }
}

double carlson_rf(double x, double y, double z) {
    const int zeros = (x == 0.0) + (y == 0.0) + (z == 0.0);
    if (x < 0.0 || y < 0.0 || z < 0.0 || zeros > 1) {
        throw DomainError("carlson_rf: arguments must be nonnegative with at most one zero");
    }
    const double x0 = x, y0 = y;
    const double a0 = (x + y + z) / 3.0;
    double q = std::pow(3.0 * kEps, -1.0 / 6.0) *
               std::max({std::abs(a0 - x), std::abs(a0 - y), std::abs(a0 - z)});
    double a = a0;
    double fac = 1.0;
    for (int it = 0; it < 64 && q * fac >= std::abs(a); ++it) {
        const double sx = std::sqrt(x), sy = std::sqrt(y), sz = std::sqrt(z);
        const double lam = sx * sy + sy * sz + sz * sx;
        x = 0.25 * (x + lam);
        y = 0.25 * (y + lam);
        z = 0.25 * (z + lam);
        a = 0.25 * (a + lam);
        fac *= 0.25;
    }
    const double X = (a0 - x0) * fac / a;
    const double Y = (a0 - y0) * fac / a;
    const double Z = -(X + Y);
    const double e2 = X * Y - Z * Z;
    const double e3 = X * Y * Z;
    return (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0) / std::sqrt(a);
}

double carlson_rd(double x, double y, double z) {
    if (x < 0.0 || y < 0.0 || z <= 0.0 || x + y == 0.0) {
        throw DomainError("carlson_rd: requires x, y >= 0, x + y > 0, z > 0");
    }
    const double x0 = x, y0 = y;
    const double a0 = (x + y + 3.0 * z) / 5.0;
    double q = std::pow(0.25 * kEps, -1.0 / 6.0) *
               std::max({std::abs(a0 - x), std::abs(a0 - y), std::abs(a0 - z)});
    double a = a0;
    double fac = 1.0;
    double sum = 0.0;
    for (int it = 0; it < 64 && q * fac >= std::abs(a); ++it) {
        const double sx = std::sqrt(x), sy = std::sqrt(y), sz = std::sqrt(z);
        const double lam = sx * sy + sy * sz + sz * sx;
        sum += fac / (sz * (z + lam));
        x = 0.25 * (x + lam);
        y = 0.25 * (y + lam);
        z = 0.25 * (z + lam);
        a = 0.25 * (a + lam);
        fac *= 0.25;
    }
    const double X = (a0 - x0) * fac / a;
    const double Y = (a0 - y0) * fac / a;
    const double Z = -(X + Y) / 3.0;
    const double xy = X * Y;
    const double z2 = Z * Z;
    const double e2 = xy - 6.0 * z2;
    const double e3 = (3.0 * xy - 8.0 * z2) * Z;
    const double e4 = 3.0 * (xy - z2) * z2;
    const double e5 = xy * z2 * Z;
    const double series = 1.0 - 3.0 * e2 / 14.0 + e3 / 6.0 + 9.0 * e2 * e2 / 88.0 - 3.0 * e4 / 22.0 -
                          9.0 * e2 * e3 / 52.0 + 3.0 * e5 / 26.0;
    return fac * series / (a * std::sqrt(a)) + 3.0 * sum;
}

EllipticValue comp_K_with_error(EllipticParameter m) {
    require_k_domain(m, "comp_K");
    const AgmResult r = agm(m);
    const double k = kPi / (2.0 * r.a);
    return {k, 8.0 * kEps * k};
}

double comp_K(EllipticParameter m) { return comp_K_with_error(m).value; }

EllipticValue comp_E_with_error(EllipticParameter m) {
    if (m.value() == 1.0) return {1.0, 0.0};
    if (m.value() == 0.0) return {kPi / 2.0, kEps};
    const AgmResult r = agm(m);
    const double k = kPi / (2.0 * r.a);
    const double e = k * (1.0 - r.csum);
    return {e, 16.0 * kEps * k};
}

double comp_E(EllipticParameter m) { return comp_E_with_error(m).value; }

EllipticValue ellint_F_with_error(double x, EllipticParameter m) {
    require_k_domain(m, "ellint_F");
    const Reduced r = reduce_half_period(x);
    const double principal = incomplete_principal(r.y, m, false).F;
    if (r.j == 0.0) {
        return {principal, 8.0 * kEps * std::max(1.0, std::abs(principal))};
    }
    const EllipticValue k = comp_K_with_error(m);
    const double value = 2.0 * r.j * k.value + principal;
    return {value, 2.0 * std::abs(r.j) * k.est_abs_error + 8.0 * kEps * std::abs(value)};
}

double ellint_F(double x, EllipticParameter m) { return ellint_F_with_error(x, m).value; }

EllipticValue ellint_E_inc_with_error(double x, EllipticParameter m) {
    if (m.value() >= 1.0) throw DomainError("ellint_E_inc: requires m < 1");
    const Reduced r = reduce_half_period(x);
    const double principal = incomplete_principal(r.y, m, true).E;
    if (r.j == 0.0) {
        return {principal, 8.0 * kEps * std::max(1.0, std::abs(principal))};
    }
    const EllipticValue e = comp_E_with_error(m);
    const double value = 2.0 * r.j * e.value + principal;
    return {value, 2.0 * std::abs(r.j) * e.est_abs_error + 8.0 * kEps * std::abs(value)};
}

double ellint_E_inc(double x, EllipticParameter m) { return ellint_E_inc_with_error(x, m).value; }

double am(double x, EllipticParameter m) {
    require_k_domain(m, "am");
    if (m.value() == 0.0) return x;
    if (x < 0.0) return -am(-x, m);
    if (x == 0.0) return 0.0;
    const double k = comp_K(m);
    // am(x + 2K) = am(x) + pi: solve on [-K, K] only.
    const double j = std::nearbyint(x / (2.0 * k));
    const double y = x - 2.0 * j * k;

    double lo = -kPi / 2.0, hi = kPi / 2.0;
    double phi = std::clamp(y * (kPi / (2.0 * k)), lo, hi);
    bool converged = false;
    for (int it = 0; it < 50; ++it) {
        const double f = ellint_F(phi, m) - y;
        if (f > 0.0) hi = phi; else lo = phi;
        const double s = std::sin(phi);
        const double step = f * std::sqrt(1.0 - m * s * s);
        const double next = phi - step;
        if (!(next > lo && next < hi)) {
            phi = 0.5 * (lo + hi);
            continue;
        }
        phi = next;
        if (std::abs(step) <= 4.0 * kEps * std::max(1.0, std::abs(phi))) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        // Bisection fallback; F is strictly increasing on the bracket.
        for (int it = 0; it < 200 && hi - lo > 2.0 * kEps; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (ellint_F(mid, m) > y) hi = mid; else lo = mid;
        }
        phi = 0.5 * (lo + hi);
    }
    return phi + j * kPi;
}

JacobiTriple jacobi(double x, EllipticParameter m) {
    const double mv = m.value();
    if (mv == 0.0) return {std::sin(x), std::cos(x), 1.0};
    if (mv == 1.0) {
        const double sech = 1.0 / std::cosh(x);
        return {std::tanh(x), sech, sech};
    }
    // Descending Landen transformation (AGM form).
    constexpr int kMaxLevels = 32;
    double a[kMaxLevels + 1];
    double c[kMaxLevels + 1];
    a[0] = 1.0;
    c[0] = std::sqrt(mv);
    double g = std::sqrt(1.0 - mv);
    int n = 0;
    while (n < kMaxLevels && std::abs(c[n]) > kEps * a[n]) {
        a[n + 1] = 0.5 * (a[n] + g);
        c[n + 1] = 0.5 * (a[n] - g);
        g = std::sqrt(a[n] * g);
        ++n;
    }
    double phi = std::ldexp(a[n] * x, n);
    for (int level = n; level >= 1; --level) {
        phi = 0.5 * (phi + std::asin(c[level] / a[level] * std::sin(phi)));
    }
    const double s = std::sin(phi);
    const double cc = std::cos(phi);
    // dn^2 = (1 - m) + m cn^2 has no cancellation, unlike 1 - m sn^2.
    const double d = std::sqrt((1.0 - mv) + mv * cc * cc);
    return {s, cc, d};
}

double sn(double x, EllipticParameter m) { return jacobi(x, m).sn; }
double cn(double x, EllipticParameter m) { return jacobi(x, m).cn; }
double dn(double x, EllipticParameter m) { return jacobi(x, m).dn; }

double dK_dm(EllipticParameter m) {
    require_open_unit(m, "dK_dm");
    require_k_domain(m, "dK_dm");
    const double mv = m.value();
    return (comp_E(m) - (1.0 - mv) * comp_K(m)) / (2.0 * mv * (1.0 - mv));
}

double dE_dm(EllipticParameter m) {
    require_open_unit(m, "dE_dm");
    require_k_domain(m, "dE_dm");
    return (comp_E(m) - comp_K(m)) / (2.0 * m.value());
}

double dF_dm(double x, EllipticParameter m) {
    require_open_unit(m, "dF_dm");
    const double mv = m.value();
    const double s = std::sin(x), c = std::cos(x);
    return ellint_E_inc(x, m) / (2.0 * mv * (1.0 - mv)) - ellint_F(x, m) / (2.0 * mv) -
           s * c / (2.0 * (1.0 - mv) * std::sqrt(1.0 - mv * s * s));
}

double dE_inc_dm(double x, EllipticParameter m) {
    require_open_unit(m, "dE_inc_dm");
    return (ellint_E_inc(x, m) - ellint_F(x, m)) / (2.0 * m.value());
}

} // namespace elastica::elliptic
