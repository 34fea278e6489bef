#include "elastica/curves.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <Eigen/Geometry>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>
#include <json.hpp>
#include <unsupported/Eigen/LevenbergMarquardt>
#include <unsupported/Eigen/NumericalDiff>

#include "elastica/elliptic.hpp"
#include "elastica/errors.hpp"

namespace elastica::curves {

namespace el = elastica::elliptic;
using profiles::PlanarFamily;

namespace {

constexpr double kPi = std::numbers::pi;

// Canonical curve, tangent angle and curvature before the similarity.
Eigen::Vector2d canonical_point(PlanarFamily f, double m, double s) {
    switch (f) {
    case PlanarFamily::linear: return {s, 0.0};
    case PlanarFamily::circular: return {std::sin(s), -std::cos(s)};
    case PlanarFamily::borderline: return {2.0 * std::tanh(s) - s, -2.0 / std::cosh(s)};
    case PlanarFamily::wavelike: {
        const double e = el::ellint_E_inc(el::am(s, m), m);
        return {2.0 * e - s, -2.0 * std::sqrt(m) * el::cn(s, m)};
    }
    case PlanarFamily::orbitlike: {
        const double e = el::ellint_E_inc(el::am(s, m), m);
        return {(2.0 * e + (m - 2.0) * s) / m, -2.0 * el::dn(s, m) / m};
    }
    }
    return {0.0, 0.0};
}

double canonical_theta(PlanarFamily f, double m, double s) {
    switch (f) {
    case PlanarFamily::linear: return 0.0;
    case PlanarFamily::circular: return s;
    case PlanarFamily::borderline: return 2.0 * std::asin(std::tanh(s));
    case PlanarFamily::wavelike: return 2.0 * std::asin(std::clamp(std::sqrt(m) * el::sn(s, m), -1.0, 1.0));
    case PlanarFamily::orbitlike: return 2.0 * el::am(s, m);
    }
    return 0.0;
}

double canonical_k(PlanarFamily f, double m, double s) {
    switch (f) {
    case PlanarFamily::linear: return 0.0;
    case PlanarFamily::circular: return 1.0;
    case PlanarFamily::borderline: return 2.0 / std::cosh(s);
    case PlanarFamily::wavelike: return 2.0 * std::sqrt(m) * el::cn(s, m);
    case PlanarFamily::orbitlike: return 2.0 * el::dn(s, m);
    }
    return 0.0;
}

double canonical_dk(PlanarFamily f, double m, double s) {
    switch (f) {
    case PlanarFamily::linear:
    case PlanarFamily::circular: return 0.0;
    case PlanarFamily::borderline: return -2.0 * std::tanh(s) / std::cosh(s);
    case PlanarFamily::wavelike: {
        const auto t = el::jacobi(s, m);
        return -2.0 * std::sqrt(m) * t.sn * t.dn;
    }
    case PlanarFamily::orbitlike: {
        const auto t = el::jacobi(s, m);
        return -2.0 * m * t.sn * t.cn;
    }
    }
    return 0.0;
}

// Orthonormal frame (a, b_perp, a x b_perp) spanned by two independent unit vectors.
Eigen::Matrix3d pair_frame(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
    Eigen::Matrix3d f;
    f.col(0) = a.normalized();
    f.col(1) = (b - b.dot(f.col(0)) * f.col(0)).normalized();
    f.col(2) = f.col(0).cross(f.col(1));
    return f;
}

} // namespace

Eigen::Vector2d Similarity::apply(const Eigen::Vector2d& p) const {
    const Eigen::Vector2d q(p[0], reflect ? -p[1] : p[1]);
    return scale * (Eigen::Rotation2Dd(rotation) * q) + translation;
}

void validate(const PlanarElastica& e) {
    if (!(e.similarity.scale > 0.0) || !std::isfinite(e.similarity.scale)) {
        throw DomainError("similarity scale must be positive");
    }
    if ((e.family == PlanarFamily::wavelike || e.family == PlanarFamily::orbitlike) && !(e.m > 0.0 && e.m < 1.0)) {
        throw DomainError("wavelike/orbitlike elastica requires m in (0, 1)");
    }
}

Eigen::Vector2d eval_planar(const PlanarElastica& e, double s) {
    return e.similarity.apply(canonical_point(e.family, e.m, s + e.s0));
}

double eval_theta(const PlanarElastica& e, double s) {
    const double th = canonical_theta(e.family, e.m, s + e.s0);
    return (e.similarity.reflect ? -th : th) + e.similarity.rotation;
}

double eval_k(const PlanarElastica& e, double s) {
    const double k = canonical_k(e.family, e.m, s + e.s0) / e.similarity.scale;
    return e.similarity.reflect ? -k : k;
}

double eval_dk(const PlanarElastica& e, double s) {
    const double scale = e.similarity.scale;
    const double dk = canonical_dk(e.family, e.m, s + e.s0) / (scale * scale);
    return e.similarity.reflect ? -dk : dk;
}

DiscreteCurve sample_planar(const PlanarElastica& e, double s_begin, double s_end, int n, Eigen::VectorXd* k) {
    validate(e);
    if (n < 2) throw DomainError("sample_planar needs n >= 2");
    if (!(s_end > s_begin)) throw DomainError("sample_planar needs s_end > s_begin");
    Eigen::MatrixXd v(2, n + 1);
    if (k) k->resize(n + 1);
    for (int j = 0; j <= n; ++j) {
        const double s = s_begin + (s_end - s_begin) * j / n;
        v.col(j) = eval_planar(e, s);
        if (k) (*k)[j] = eval_k(e, s);
    }
    return DiscreteCurve(std::move(v), false);
}

double figure_eight_modulus() {
    static const double mstar = [] {
        auto f = [](double m) { return 2.0 * el::comp_E(m) - el::comp_K(m); };
        const auto [lo, hi] = boost::math::tools::bisect(f, 0.5, 0.99, boost::math::tools::eps_tolerance<double>());
        return std::abs(f(lo)) < std::abs(f(hi)) ? lo : hi;
    }();
    return mstar;
}

double varpi_star() {
    static const double value = [] {
        const double m = figure_eight_modulus();
        const double e = el::comp_E(m);
        return 32.0 * (2.0 * m - 1.0) * e * e;
    }();
    return value;
}

double leaf_spread_angle() { return 2.0 * kPi - 4.0 * std::asin(std::sqrt(figure_eight_modulus())); }

double leaf_length() { return 2.0 * el::comp_K(figure_eight_modulus()); }

PlanarElastica leaf() {
    PlanarElastica e;
    e.family = PlanarFamily::wavelike;
    e.m = figure_eight_modulus();
    e.s0 = -el::comp_K(e.m);
    return e;
}

DiscreteCurve build_leaf(int n) {
    if (n < 2) throw DomainError("build_leaf needs N >= 2");
    return sample_planar(leaf(), 0.0, leaf_length(), n);
}

bool check_closure(PlanarFamily family, double m, double tol) {
    if (!(m > 0.0 && m < 1.0)) throw DomainError("check_closure requires m in (0, 1)");
    switch (family) {
    case PlanarFamily::wavelike: return std::abs(2.0 * el::comp_E(m) - el::comp_K(m)) < tol;
    case PlanarFamily::orbitlike: return false;
    default: throw DomainError("check_closure applies to wavelike and orbitlike families");
    }
}

namespace {

Eigen::Vector3d from_angles(double polar, double azimuth) {
    return {std::sin(polar) * std::cos(azimuth), std::sin(polar) * std::sin(azimuth), std::cos(polar)};
}

double chain_error(const std::vector<Eigen::Vector3d>& u, double psi) {
    double worst = 0.0;
    const int r = static_cast<int>(u.size());
    for (int i = 0; i < r; ++i) {
        const Eigen::Vector3d& a = u[i];
        const Eigen::Vector3d& b = u[(i + 1) % r];
        worst = std::max(worst, std::abs(std::atan2(a.cross(b).norm(), a.dot(b)) - psi));
    }
    return worst;
}

// Residuals <u_i, u_{i+1}> - cos psi in spherical angles (polar_i, azimuth_i).
struct ChainFunctor : Eigen::DenseFunctor<double> {
    int r;
    double cpsi;
    ChainFunctor(int r_, double psi) : Eigen::DenseFunctor<double>(2 * r_, r_), r(r_), cpsi(std::cos(psi)) {}
    int operator()(const Eigen::VectorXd& x, Eigen::VectorXd& fvec) const {
        for (int i = 0; i < r; ++i) {
            const int j = (i + 1) % r;
            fvec[i] = from_angles(x[2 * i], x[2 * i + 1]).dot(from_angles(x[2 * j], x[2 * j + 1])) - cpsi;
        }
        return 0;
    }
};

} // namespace

std::optional<std::vector<Eigen::Vector3d>> spherical_chain(int r, double psi) {
    if (r < 2) throw DomainError("spherical_chain needs r >= 2");
    if (!(psi > 0.0 && psi < kPi)) throw DomainError("spherical_chain needs psi in (0, pi)");
    constexpr double kTol = 1e-9;
    if (r == 2) {
        return std::vector<Eigen::Vector3d>{{std::cos(psi / 2), -std::sin(psi / 2), 0.0},
                                            {std::cos(psi / 2), std::sin(psi / 2), 0.0}};
    }
    // Cones: u_i at polar angle alpha and azimuth 2 pi k i / r.
    for (int k = r / 2; k >= 1; --k) {
        const double cb = std::cos(2.0 * kPi * k / r);
        const double c2 = (std::cos(psi) - cb) / (1.0 - cb);
        if (c2 < 0.0 || c2 > 1.0) continue;
        const double alpha = std::acos(std::sqrt(c2));
        std::vector<Eigen::Vector3d> u;
        for (int i = 0; i < r; ++i) u.push_back(from_angles(alpha, 2.0 * kPi * k * i / r));
        if (chain_error(u, psi) <= kTol) return u;
    }
    // General least squares from deterministic random starts.
    ChainFunctor f(r, psi);
    Eigen::NumericalDiff<ChainFunctor> nd(f);
    std::mt19937_64 rng(0x5eed);
    std::uniform_real_distribution<double> unif(0.0, 2.0 * kPi);
    for (int attempt = 0; attempt < 16; ++attempt) {
        Eigen::VectorXd x(2 * r);
        for (int i = 0; i < 2 * r; ++i) x[i] = unif(rng);
        Eigen::LevenbergMarquardt<Eigen::NumericalDiff<ChainFunctor>> lm(nd);
        lm.setXtol(1e-15);
        lm.setFtol(1e-15);
        lm.setMaxfev(4000);
        lm.minimize(x);
        std::vector<Eigen::Vector3d> u;
        for (int i = 0; i < r; ++i) u.push_back(from_angles(x[2 * i], x[2 * i + 1]));
        if (chain_error(u, psi) <= kTol) return u;
    }
    return std::nullopt;
}

LeafedElastica build_leafed(int r, int dim) {
    if (r < 2) throw DomainError("leafed elastica needs r >= 2");
    if (dim != 2 && dim != 3) throw DomainError("leafed elastica needs dim 2 or 3");
    const double half = 2.0 * std::asin(std::sqrt(figure_eight_modulus()));
    const Eigen::Vector2d t0(std::cos(-half), std::sin(-half));
    const Eigen::Vector2d t1(std::cos(half), std::sin(half));

    LeafedElastica le;
    le.r = r;
    le.dim = dim;
    if (dim == 2) {
        if (r % 2 != 0) throw Infeasible("infeasible: planar odd r");
        // The figure-eight: the leaf followed by its mirror image across the line
        // through the junction orthogonal to the leaf's axis, repeated r/2 times.
        const Eigen::Matrix2d mirror = Eigen::Vector2d(1.0, -1.0).asDiagonal();
        for (int i = 0; i < r; ++i) {
            const Eigen::Matrix2d R = i % 2 == 0 ? Eigen::Matrix2d::Identity() : mirror;
            le.motions.push_back({R, Eigen::Vector2d::Zero()});
            le.chain.push_back(R * t0);
        }
        return le;
    }
    const auto chain = spherical_chain(r, leaf_spread_angle());
    if (!chain) throw Infeasible("infeasible: no tangent chain for r = " + std::to_string(r));
    const Eigen::Matrix3d canonical = pair_frame({t0[0], t0[1], 0.0}, {t1[0], t1[1], 0.0});
    for (int i = 0; i < r; ++i) {
        const Eigen::Matrix3d target = pair_frame((*chain)[i], (*chain)[(i + 1) % r]);
        le.motions.push_back({target * canonical.transpose(), Eigen::Vector3d::Zero()});
        le.chain.push_back((*chain)[i]);
    }
    return le;
}

DiscreteCurve sample_leafed(const LeafedElastica& le, int n_per_leaf) {
    if (n_per_leaf < 2) throw DomainError("sample_leafed needs at least 2 samples per leaf");
    const DiscreteCurve base = build_leaf(n_per_leaf);
    Eigen::MatrixXd canonical = Eigen::MatrixXd::Zero(le.dim, n_per_leaf);
    canonical.topRows(2) = base.vertices().leftCols(n_per_leaf);
    Eigen::MatrixXd v(le.dim, le.r * n_per_leaf);
    for (int i = 0; i < le.r; ++i) {
        v.middleCols(i * n_per_leaf, n_per_leaf) = le.motions[i].rotation * canonical;
    }
    return DiscreteCurve(std::move(v), true);
}

DiscreteCurve FrenetCurve::curve() const {
    Eigen::MatrixXd v(3, static_cast<Eigen::Index>(frames.size()));
    for (std::size_t i = 0; i < frames.size(); ++i) v.col(static_cast<Eigen::Index>(i)) = frames[i].position;
    return DiscreteCurve(std::move(v), false);
}

namespace {

using State = Eigen::Matrix<double, 12, 1>;

State pack(const Frame& f) {
    State x;
    x << f.position, f.T, f.N, f.B;
    return x;
}

Frame unpack(const State& x) {
    Frame f;
    f.position = x.segment<3>(0);
    f.T = x.segment<3>(3);
    f.N = x.segment<3>(6);
    f.B = x.segment<3>(9);
    return f;
}

void orthonormalize(Frame& f) {
    f.T.normalize();
    f.N = (f.N - f.N.dot(f.T) * f.T).normalized();
    f.B = f.T.cross(f.N);
}

} // namespace

FrenetCurve integrate_frenet(const ScalarFunction& k, const ScalarFunction& t, const Frame& frame0, double s0,
                             double s1, double h) {
    if (!(h > 0.0)) throw DomainError("integrate_frenet needs h > 0");
    if (!(s1 > s0)) throw DomainError("integrate_frenet needs s1 > s0");
    constexpr double kTol = 1e-10;
    const bool orthonormal = std::abs(frame0.T.norm() - 1.0) < kTol && std::abs(frame0.N.norm() - 1.0) < kTol &&
                             std::abs(frame0.T.dot(frame0.N)) < kTol &&
                             (frame0.T.cross(frame0.N) - frame0.B).norm() < kTol;
    if (!orthonormal) throw DomainError("initial frame must be right-handed orthonormal");

    auto rhs = [&](double s, const State& x) {
        const double kv = k(s), tv = t(s);
        State d;
        d.segment<3>(0) = x.segment<3>(3);
        d.segment<3>(3) = kv * x.segment<3>(6);
        d.segment<3>(6) = -kv * x.segment<3>(3) + tv * x.segment<3>(9);
        d.segment<3>(9) = -tv * x.segment<3>(6);
        return d;
    };

    const int steps = static_cast<int>(std::ceil((s1 - s0) / h - 1e-9));
    const double he = (s1 - s0) / steps;
    FrenetCurve out;
    out.s.resize(steps + 1);
    out.frames.reserve(steps + 1);
    out.s[0] = s0;
    out.frames.push_back(frame0);
    State x = pack(frame0);
    for (int i = 0; i < steps; ++i) {
        const double s = s0 + i * he;
        const State k1 = rhs(s, x);
        const State k2 = rhs(s + he / 2, x + he / 2 * k1);
        const State k3 = rhs(s + he / 2, x + he / 2 * k2);
        const State k4 = rhs(s + he, x + he * k3);
        x += he / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
        Frame f = unpack(x);
        orthonormalize(f);
        x = pack(f);
        out.s[i + 1] = s0 + (i + 1) * he;
        out.frames.push_back(f);
    }
    return out;
}

FrenetCurve reconstruct_spatial(const profiles::CurvatureProfile& p, const Frame& frame0, double s0, double s1,
                                double h) {
    profiles::validate(p);
    if (profiles::profile_c(p) == 0.0) {
        return integrate_frenet([&](double s) { return profiles::signed_planar_curvature(p, 1, s); },
                                [](double) { return 0.0; }, frame0, s0, s1, h);
    }
    return integrate_frenet([&](double s) { return profiles::kappa(p, s); },
                            [&](double s) { return profiles::torsion(p, s); }, frame0, s0, s1, h);
}

std::string to_string(ClosedKind kind) {
    switch (kind) {
    case ClosedKind::circle: return "circle";
    case ClosedKind::figure_eight: return "figure_eight";
    case ClosedKind::not_elastica: return "not_elastica";
    }
    return "unknown";
}

Classification classify_closed(const DiscreteCurve& c, double tol) {
    if (!c.closed()) throw DomainError("classify_closed requires a closed curve");
    if (c.dim() != 2) throw DomainError("classify_closed requires a planar (2-dimensional) curve");
    const Eigen::VectorXd k = discrete::signed_curvature(c);
    const Eigen::VectorXd s = discrete::vertex_arclength(c);
    const double total = discrete::length(c);
    const double kmax = k.cwiseAbs().maxCoeff();
    const int n = c.size();
    auto rms = [&](const Eigen::VectorXd& fit) { return std::sqrt((k - fit).squaredNorm() / n) / kmax; };

    Classification best;
    best.residual = std::numeric_limits<double>::infinity();
    if (kmax == 0.0) return best;

    // Constant curvature.
    {
        const double mean = k.mean();
        const int fold = static_cast<int>(std::lround(std::abs(discrete::signed_turning_angles(c).sum()) / (2 * kPi)));
        const double res = rms(Eigen::VectorXd::Constant(n, mean));
        if (fold >= 1 && res < best.residual) best = {ClosedKind::circle, fold, res, 1.0 / std::abs(mean)};
    }

    // Figure-eight: k(s) = (2 sqrt(m*) / L) cn(s / L + beta, m*), fold = total / (4 K L).
    {
        const double m = figure_eight_modulus();
        const double K = el::comp_K(m);
        const double scale0 = 2.0 * std::sqrt(m) / kmax;
        const int fold = static_cast<int>(std::lround(total / (4.0 * K * scale0)));
        if (fold >= 1) {
            const double scale = total / (4.0 * K * fold);
            const double amp = 2.0 * std::sqrt(m) / scale;
            auto misfit = [&](double beta) {
                Eigen::VectorXd fit(n);
                for (int i = 0; i < n; ++i) fit[i] = amp * el::cn(s[i] / scale + beta, m);
                return rms(fit);
            };
            constexpr int kGrid = 128;
            const double period = 4.0 * K;
            int arg = 0;
            double val = misfit(0.0);
            for (int j = 1; j < kGrid; ++j) {
                const double v = misfit(period * j / kGrid);
                if (v < val) {
                    val = v;
                    arg = j;
                }
            }
            const auto [beta, res] = boost::math::tools::brent_find_minima(
                misfit, period * (arg - 1) / kGrid, period * (arg + 1) / kGrid, 40);
            (void)beta;
            if (res < best.residual) best = {ClosedKind::figure_eight, fold, res, scale};
        }
    }
    if (best.residual > tol) {
        best.kind = ClosedKind::not_elastica;
        best.fold = 0;
    }
    return best;
}

std::string format_json(const Classification& c) {
    nlohmann::ordered_json j;
    j["kind"] = to_string(c.kind);
    j["fold"] = c.fold;
    j["residual"] = c.residual;
    j["scale"] = c.scale;
    return j.dump();
}

} // namespace elastica::curves
