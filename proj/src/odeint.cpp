#include "elastica/odeint.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "elastica/errors.hpp"

namespace elastica::odeint {

namespace {

// Stacked (gamma, d1, d2, d3).
Eigen::VectorXd pack(const ElasticaState& s) {
    const int n = s.dim();
    Eigen::VectorXd x(4 * n);
    x << s.gamma, s.d1, s.d2, s.d3;
    return x;
}

ElasticaState unpack(const Eigen::VectorXd& x, int n) {
    return {x.segment(0, n), x.segment(n, n), x.segment(2 * n, n), x.segment(3 * n, n)};
}

Eigen::VectorXd rhs(const Eigen::VectorXd& x, int n, double lambda) {
    const auto d1 = x.segment(n, n);
    const auto d2 = x.segment(2 * n, n);
    const auto d3 = x.segment(3 * n, n);
    Eigen::VectorXd out(4 * n);
    out.segment(0, n) = d1;
    out.segment(n, n) = d2;
    out.segment(2 * n, n) = d3;
    out.segment(3 * n, n) = -(6.0 * d2.dot(d3) * d1 + (3.0 * d2.squaredNorm() - lambda) * d2) / 2.0;
    return out;
}

Eigen::VectorXd rk4_step(const Eigen::VectorXd& x, int n, double lambda, double h) {
    const Eigen::VectorXd k1 = rhs(x, n, lambda);
    const Eigen::VectorXd k2 = rhs(x + h / 2 * k1, n, lambda);
    const Eigen::VectorXd k3 = rhs(x + h / 2 * k2, n, lambda);
    const Eigen::VectorXd k4 = rhs(x + h * k3, n, lambda);
    return x + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
}

} // namespace

Trajectory integrate_elastica(const ElasticaState& s0, double lambda, double s_end, double h,
                              const IntegrateOptions& opts) {
    const int n = s0.dim();
    if (n < 2 || s0.d1.size() != n || s0.d2.size() != n || s0.d3.size() != n) {
        throw DomainError("elastica state components must share one dimension >= 2");
    }
    if (std::abs(s0.d1.norm() - 1.0) > 1e-9 || std::abs(s0.d1.dot(s0.d2)) > 1e-9) {
        throw DomainError("initial state must satisfy |d1| = 1 and <d1, d2> = 0");
    }
    if (!(h > 0.0) || !(s_end > 0.0)) throw DomainError("integrate_elastica needs h > 0 and s_end > 0");
    if (!std::isfinite(lambda)) throw DomainError("lambda must be finite");

    const int steps = static_cast<int>(std::ceil(s_end / h - 1e-9));
    Trajectory t;
    t.h = s_end / steps;
    t.lambda = lambda;
    t.states.reserve(steps + 1);
    t.states.push_back(s0);
    Eigen::VectorXd x = pack(s0);
    for (int i = 0; i < steps; ++i) {
        const Eigen::VectorXd full = rk4_step(x, n, lambda, t.h);
        const Eigen::VectorXd half = rk4_step(rk4_step(x, n, lambda, t.h / 2), n, lambda, t.h / 2);
        const double err = (full - half).cwiseAbs().maxCoeff() * 16.0 / 15.0;
        if (err > opts.max_local_error) {
            throw std::runtime_error("integrate_elastica: local error estimate " + std::to_string(err) +
                                     " exceeds limit at s = " + std::to_string(i * t.h) + "; reduce h");
        }
        x = full;
        t.states.push_back(unpack(x, n));
    }
    return t;
}

std::vector<double> monitor_det(const Trajectory& t) {
    std::vector<double> out;
    out.reserve(t.states.size());
    for (const ElasticaState& s : t.states) {
        if (s.dim() != 3) throw DomainError("monitor_det requires a 3-dimensional trajectory");
        Eigen::Matrix3d m;
        m << s.d1, s.d2, s.d3;
        out.push_back(m.determinant());
    }
    return out;
}

int dimension_of_span(const ElasticaState& s, double tol) {
    Eigen::MatrixXd m(s.dim(), 3);
    m << s.d1, s.d2, s.d3;
    const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues();
    if (sv[0] == 0.0) return 0;
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) rank += sv[i] > tol * sv[0] ? 1 : 0;
    return rank;
}

double planarity_drift(const Trajectory& t) {
    if (t.states.empty()) throw DomainError("planarity_drift: empty trajectory");
    const ElasticaState& first = t.states.front();
    if (dimension_of_span(first) > 2) throw DomainError("planarity_drift: initial span is 3-dimensional");
    if (first.dim() == 2) return 0.0;
    if (first.dim() != 3) throw DomainError("planarity_drift supports 2- and 3-dimensional trajectories");
    Eigen::Matrix3d m;
    m << first.d1, first.d2, first.d3;
    const Eigen::Vector3d normal = Eigen::JacobiSVD<Eigen::Matrix3d>(m, Eigen::ComputeFullU).matrixU().col(2);
    double drift = 0.0;
    for (const ElasticaState& s : t.states) drift = std::max(drift, std::abs((s.gamma - first.gamma).dot(normal)));
    return drift;
}

std::vector<double> energy_law(const Trajectory& t, double a, double c) {
    std::vector<double> out;
    out.reserve(t.states.size());
    for (const ElasticaState& s : t.states) {
        const double u = s.d2.squaredNorm();
        const double du = 2.0 * s.d2.dot(s.d3);
        out.push_back(du * du + u * u * u - 2.0 * t.lambda * u * u - 4.0 * a * u + 4.0 * c * c);
    }
    return out;
}

ElasticaState planar_state(const curves::PlanarElastica& e, double s) {
    curves::validate(e);
    if (e.similarity.scale != 1.0) throw DomainError("planar_state needs a unit-speed (scale 1) elastica");
    const double th = curves::eval_theta(e, s);
    const double k = curves::eval_k(e, s);
    const double dk = curves::eval_dk(e, s);
    const Eigen::Vector2d T(std::cos(th), std::sin(th));
    const Eigen::Vector2d N(-std::sin(th), std::cos(th));
    return {curves::eval_planar(e, s), T, k * N, dk * N - k * k * T};
}

ElasticaState profile_state(const profiles::CurvatureProfile& p, double s, const curves::Frame& f) {
    profiles::validate(p);
    const double k = profiles::kappa(p, s);
    const double dk = profiles::kappa_derivative(p, s);
    const double t = profiles::profile_c(p) == 0.0 ? 0.0 : profiles::torsion(p, s);
    return {f.position, f.T, k * f.N, dk * f.N - k * k * f.T + k * t * f.B};
}

ElasticaState helix_state(double k, double t) {
    const Eigen::Vector3d T = Eigen::Vector3d::UnitX(), N = Eigen::Vector3d::UnitY(), B = Eigen::Vector3d::UnitZ();
    return {Eigen::Vector3d::Zero(), T, k * N, -k * k * T + k * t * B};
}

ElasticaState embed3(const ElasticaState& s, const Eigen::Matrix3d& rotation) {
    if (s.dim() != 2) throw DomainError("embed3 expects a planar state");
    auto lift = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd { return rotation * Eigen::Vector3d(v[0], v[1], 0.0); };
    return {lift(s.gamma), lift(s.d1), lift(s.d2), lift(s.d3)};
}

} // namespace elastica::odeint
