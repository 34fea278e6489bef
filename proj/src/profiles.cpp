#include "elastica/profiles.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "elastica/elliptic.hpp"
#include "elastica/errors.hpp"
#include "elastica/io.hpp"

namespace elastica::profiles {

namespace el = elastica::elliptic;

namespace {

double argument(const CurvatureProfile& p, double s) { return p.A * s / (2.0 * std::sqrt(p.w)) + p.s0; }

} // namespace

void validate(const CurvatureProfile& p) {
    const bool ok = std::isfinite(p.m) && std::isfinite(p.w) && std::isfinite(p.A) &&
                    std::isfinite(p.s0) && p.m >= 0.0 && p.m <= p.w && p.w <= 1.0 && p.w > 0.0 &&
                    p.A > 0.0;
    if (!ok) throw DomainError("curvature profile requires 0 <= m <= w <= 1, w > 0, A > 0");
}

CurvatureProfile make_profile(double m, double w, double A, double s0) {
    CurvatureProfile p{m, w, A, s0};
    validate(p);
    return p;
}

double profile_lambda(const CurvatureProfile& p) {
    return p.A * p.A / (2.0 * p.w) * (3.0 * p.w - p.m - 1.0);
}

double profile_c(const CurvatureProfile& p) {
    const double a3 = p.A * p.A * p.A;
    const double four_c_sq = a3 * a3 / (p.w * p.w) * (1.0 - p.w) * (p.w - p.m);
    return 0.5 * std::sqrt(std::max(0.0, four_c_sq));
}

CubicRoots profile_roots(const CurvatureProfile& p) {
    const double a2 = p.A * p.A;
    return {a2 * (1.0 - 1.0 / p.w), a2 * (1.0 - p.m / p.w), a2};
}

double profile_a(const CurvatureProfile& p) {
    const CubicRoots r = profile_roots(p);
    return -(r.alpha1 * r.alpha2 + r.alpha2 * r.alpha3 + r.alpha3 * r.alpha1) / 4.0;
}

double profile_period(const CurvatureProfile& p) {
    if (p.m == 0.0 || p.m == 1.0) return std::numeric_limits<double>::infinity();
    return 4.0 * el::comp_K(p.m) * std::sqrt(p.w) / p.A;
}

double kappa_sq(const CurvatureProfile& p, double s) {
    if (p.m == 0.0) return p.A * p.A;
    const double snv = el::sn(argument(p, s), p.m);
    return p.A * p.A * (1.0 - p.m / p.w * snv * snv);
}

double kappa_sq_derivative(const CurvatureProfile& p, double s) {
    if (p.m == 0.0) return 0.0;
    const auto t = el::jacobi(argument(p, s), p.m);
    return -p.A * p.A * p.A * p.m * t.sn * t.cn * t.dn / (p.w * std::sqrt(p.w));
}

double kappa(const CurvatureProfile& p, double s) { return std::sqrt(std::max(0.0, kappa_sq(p, s))); }

double kappa_derivative(const CurvatureProfile& p, double s) {
    const double k = kappa(p, s);
    if (k == 0.0) throw DomainError("kappa_derivative: curvature vanishes");
    return kappa_sq_derivative(p, s) / (2.0 * k);
}

double torsion(const CurvatureProfile& p, double s) {
    const double c = profile_c(p);
    if (c == 0.0) throw DomainError("torsion undefined for planar profile (c = 0)");
    return c / kappa_sq(p, s);
}

double signed_planar_curvature(const CurvatureProfile& p, int sign, double s) {
    if (profile_c(p) != 0.0) throw DomainError("signed curvature requires a planar profile");
    const double x = argument(p, s);
    if (p.w == p.m) return sign * p.A * el::cn(x, p.m);
    return sign * p.A * el::dn(x, p.m);
}

CubicOdeSolution::CubicOdeSolution(double alpha1, double alpha2, double alpha3, double s0)
    : a1_(alpha1), a2_(alpha2), a3_(alpha3), s0_(s0) {
    if (!(alpha1 <= 0.0 && 0.0 <= alpha2 && alpha2 < alpha3)) {
        throw DomainError("solve_cubic_ode requires alpha1 <= 0 <= alpha2 < alpha3");
    }
    mu_ = (alpha3 - alpha2) / (alpha3 - alpha1);
    freq_ = 0.5 * std::sqrt(alpha3 - alpha1);
}

CubicOdeSolution CubicOdeSolution::constant(double value) {
    CubicOdeSolution out;
    out.a3_ = value;
    out.constant_ = true;
    return out;
}

double CubicOdeSolution::operator()(double s) const {
    if (constant_) return a3_;
    const double snv = el::sn(freq_ * s + s0_, mu_);
    return a3_ - (a3_ - a2_) * snv * snv;
}

double CubicOdeSolution::derivative(double s) const {
    if (constant_) return 0.0;
    const auto t = el::jacobi(freq_ * s + s0_, mu_);
    return -2.0 * (a3_ - a2_) * freq_ * t.sn * t.cn * t.dn;
}

CubicOdeSolution solve_cubic_ode(double alpha1, double alpha2, double alpha3, double s0) {
    return CubicOdeSolution(alpha1, alpha2, alpha3, s0);
}

void validate(const PlanarCurvatureFamily& f) {
    if (f.sign != 1 && f.sign != -1) throw DomainError("curvature sign must be +1 or -1");
    if (!std::isfinite(f.beta)) throw DomainError("phase must be finite");
    if (f.tag == PlanarFamily::linear) return;
    if (!(f.A > 0.0) || !std::isfinite(f.A)) throw DomainError("amplitude A must be positive");
    if ((f.tag == PlanarFamily::wavelike || f.tag == PlanarFamily::orbitlike) &&
        !(f.m > 0.0 && f.m < 1.0)) {
        throw DomainError("wavelike/orbitlike family requires m in (0, 1)");
    }
}

double family_frequency(const PlanarCurvatureFamily& f) {
    switch (f.tag) {
    case PlanarFamily::wavelike: return f.A / (2.0 * std::sqrt(f.m));
    case PlanarFamily::borderline:
    case PlanarFamily::orbitlike: return f.A / 2.0;
    case PlanarFamily::circular:
    case PlanarFamily::linear: return 0.0;
    }
    return 0.0;
}

double planar_lambda(const PlanarCurvatureFamily& f) {
    const double a2 = f.A * f.A;
    switch (f.tag) {
    case PlanarFamily::wavelike: return a2 * (2.0 * f.m - 1.0) / (2.0 * f.m);
    case PlanarFamily::borderline: return a2 / 2.0;
    case PlanarFamily::orbitlike: return a2 * (2.0 - f.m) / 2.0;
    case PlanarFamily::circular: return a2;
    case PlanarFamily::linear: return 0.0; // any multiplier works
    }
    return 0.0;
}

double planar_k(const PlanarCurvatureFamily& f, double s) {
    const double x = family_frequency(f) * s + f.beta;
    switch (f.tag) {
    case PlanarFamily::linear: return 0.0;
    case PlanarFamily::wavelike: return f.sign * f.A * el::cn(x, f.m);
    case PlanarFamily::borderline: return f.sign * f.A / std::cosh(x);
    case PlanarFamily::orbitlike: return f.sign * f.A * el::dn(x, f.m);
    case PlanarFamily::circular: return f.sign * f.A;
    }
    return 0.0;
}

double planar_k_derivative(const PlanarCurvatureFamily& f, double s) {
    const double alpha = family_frequency(f);
    const double x = alpha * s + f.beta;
    switch (f.tag) {
    case PlanarFamily::wavelike: {
        const auto t = el::jacobi(x, f.m);
        return -f.sign * f.A * alpha * t.sn * t.dn;
    }
    case PlanarFamily::borderline: return -f.sign * f.A * alpha * std::tanh(x) / std::cosh(x);
    case PlanarFamily::orbitlike: {
        const auto t = el::jacobi(x, f.m);
        return -f.sign * f.A * alpha * f.m * t.sn * t.cn;
    }
    case PlanarFamily::linear:
    case PlanarFamily::circular: return 0.0;
    }
    return 0.0;
}

std::string to_string(PlanarFamily tag) {
    switch (tag) {
    case PlanarFamily::linear: return "linear";
    case PlanarFamily::wavelike: return "wavelike";
    case PlanarFamily::borderline: return "borderline";
    case PlanarFamily::orbitlike: return "orbitlike";
    case PlanarFamily::circular: return "circular";
    }
    return "unknown";
}

PlanarFamily parse_family(std::string_view name) {
    for (auto tag : {PlanarFamily::linear, PlanarFamily::wavelike, PlanarFamily::borderline,
                     PlanarFamily::orbitlike, PlanarFamily::circular}) {
        if (name == to_string(tag)) return tag;
    }
    throw std::invalid_argument("unknown family '" + std::string(name) + "'");
}

double residual_planar(const ScalarFunction& k, double lambda, double s, double h) {
    const double k0 = k(s);
    const double kss = (k(s + h) - 2.0 * k0 + k(s - h)) / (h * h);
    return 2.0 * kss + k0 * k0 * k0 - lambda * k0;
}

double residual_spatial(const ScalarFunction& k, double lambda, double c, double s, double h) {
    const double k0 = k(s);
    if (!(std::abs(k0) > 0.0)) throw DomainError("residual_spatial: curvature must be nonzero");
    return residual_planar(k, lambda, s, h) - 2.0 * c * c / (k0 * k0 * k0);
}

std::string format_profile_record(const ProfileRecord& rec) {
    const auto& p = rec.profile;
    return "m=" + io::format_double(p.m) + "\nw=" + io::format_double(p.w) +
           "\nA=" + io::format_double(p.A) + "\ns0=" + io::format_double(p.s0) +
           "\nsign=" + std::to_string(rec.sign) + "\n";
}

ProfileRecord parse_profile_record(std::string_view text) {
    const auto kv = io::parse_key_values(text);
    ProfileRecord rec;
    rec.profile = make_profile(io::get_double(kv, "m"), io::get_double(kv, "w"),
                               io::get_double(kv, "A"), io::get_double(kv, "s0", 0.0));
    rec.sign = static_cast<int>(io::get_int(kv, "sign", 1));
    if (rec.sign != 1 && rec.sign != -1) throw DomainError("sign must be +1 or -1");
    return rec;
}

} // namespace elastica::profiles
