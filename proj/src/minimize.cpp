#include "elastica/minimize.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <random>
#include <thread>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <boost/math/tools/roots.hpp>
#include <json.hpp>

#include "elastica/curves.hpp"
#include "elastica/errors.hpp"

namespace elastica::minimize {

namespace {

constexpr double kPi = std::numbers::pi;

double cross_norm(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    if (a.size() == 2) return std::abs(a[0] * b[1] - a[1] * b[0]);
    return Eigen::Vector3d(a).cross(Eigen::Vector3d(b)).norm();
}

// Bending energy of the polyline X and, when g is given, its gradient.
double energy(const Eigen::MatrixXd& X, bool closed, Eigen::MatrixXd* g) {
    const int n = static_cast<int>(X.cols());
    if (g) g->setZero(X.rows(), n);
    double B = 0.0;
    const int first = closed ? 0 : 1;
    const int last = closed ? n - 1 : n - 2;
    for (int i = first; i <= last; ++i) {
        const int p = (i + n - 1) % n, q = (i + 1) % n;
        const Eigen::VectorXd a = X.col(i) - X.col(p);
        const Eigen::VectorXd b = X.col(q) - X.col(i);
        const double la = a.norm(), lb = b.norm();
        const double D = la + lb;
        const double th = std::atan2(cross_norm(a, b), a.dot(b));
        B += 2.0 * th * th / D;
        if (!g) continue;
        const Eigen::VectorXd ua = a / la, ub = b / lb;
        const double c = ua.dot(ub);
        const double s = std::sin(th);
        const double f = th < 1e-8 ? 1.0 : th / s;
        // theta * dtheta/da and theta * dtheta/db
        const Eigen::VectorXd tda = -f * (ub - c * ua) / la;
        const Eigen::VectorXd tdb = -f * (ua - c * ub) / lb;
        const Eigen::VectorXd dTa = 4.0 / D * tda - 2.0 * th * th / (D * D) * ua;
        const Eigen::VectorXd dTb = 4.0 / D * tdb - 2.0 * th * th / (D * D) * ub;
        g->col(p) -= dTa;
        g->col(i) += dTa - dTb;
        g->col(q) += dTb;
    }
    return B;
}

// Open polyline with vertices f0..f1 free and edges e0..e1 held at length ell.
struct Setup {
    Eigen::MatrixXd X;
    double ell = 0.0;
    int f0 = 0, f1 = 0;
    int e0 = 0, e1 = 0;

    int dim() const { return static_cast<int>(X.rows()); }
    int nvar() const { return dim() * (f1 - f0 + 1); }
    int ncon() const { return e1 - e0 + 1; }
    bool free(int i) const { return i >= f0 && i <= f1; }
    int index(int i) const { return dim() * (i - f0); }

    Eigen::VectorXd get() const {
        Eigen::VectorXd v(nvar());
        for (int i = f0; i <= f1; ++i) v.segment(index(i), dim()) = X.col(i);
        return v;
    }
    void set(const Eigen::VectorXd& v) {
        for (int i = f0; i <= f1; ++i) X.col(i) = v.segment(index(i), dim());
    }
    Eigen::VectorXd restrict(const Eigen::MatrixXd& g) const {
        Eigen::VectorXd v(nvar());
        for (int i = f0; i <= f1; ++i) v.segment(index(i), dim()) = g.col(i);
        return v;
    }
    Eigen::VectorXd constraints() const {
        Eigen::VectorXd c(ncon());
        for (int j = e0; j <= e1; ++j) c[j - e0] = (X.col(j + 1) - X.col(j)).squaredNorm() - ell * ell;
        return c;
    }
    Eigen::MatrixXd jacobian() const {
        Eigen::MatrixXd J = Eigen::MatrixXd::Zero(ncon(), nvar());
        for (int j = e0; j <= e1; ++j) {
            const Eigen::VectorXd e = X.col(j + 1) - X.col(j);
            if (free(j + 1)) J.block(j - e0, index(j + 1), 1, dim()) = 2.0 * e.transpose();
            if (free(j)) J.block(j - e0, index(j), 1, dim()) = -2.0 * e.transpose();
        }
        return J;
    }
    double max_residual() const {
        double worst = 0.0;
        for (int j = 0; j + 1 < X.cols(); ++j) {
            worst = std::max(worst, std::abs((X.col(j + 1) - X.col(j)).norm() - ell) / ell);
        }
        return worst;
    }

    // Minimum-norm Gauss-Newton steps back onto the constraint set, damped so
    // the residual decreases.
    bool project() {
        const double target = 1e-13 * ell * ell;
        Eigen::VectorXd c = constraints();
        double r = c.squaredNorm();
        for (int it = 0; it < 100; ++it) {
            if (!std::isfinite(r)) return false;
            if (c.cwiseAbs().maxCoeff() < target) return true;
            const Eigen::MatrixXd J = jacobian();
            const Eigen::LDLT<Eigen::MatrixXd> ldlt(J * J.transpose());
            if (ldlt.info() != Eigen::Success) return false;
            const Eigen::VectorXd x0 = get();
            const Eigen::VectorXd step = J.transpose() * ldlt.solve(-c);
            bool improved = false;
            for (double t = 1.0; t > 1e-3 && !improved; t /= 2) {
                set(x0 + t * step);
                const Eigen::VectorXd ct = constraints();
                const double rt = ct.squaredNorm();
                if (rt < r) {
                    c = ct;
                    r = rt;
                    improved = true;
                }
            }
            if (!improved) {
                set(x0);
                return false;
            }
        }
        return false;
    }
};

Eigen::MatrixXd fd_hessian(Setup& S) {
    const int nv = S.nvar();
    const double h = 1e-5 * S.ell;
    Eigen::MatrixXd H(nv, nv);
    Eigen::MatrixXd gp, gm;
    for (int k = 0; k < nv; ++k) {
        const int i = S.f0 + k / S.dim(), d = k % S.dim();
        const double x = S.X(d, i);
        S.X(d, i) = x + h;
        energy(S.X, false, &gp);
        S.X(d, i) = x - h;
        energy(S.X, false, &gm);
        S.X(d, i) = x;
        H.col(k) = S.restrict(gp - gm) / (2.0 * h);
    }
    return (H + H.transpose()) / 2.0;
}

// Orthonormal basis of the null space of J (full row rank assumed).
Eigen::MatrixXd null_space(const Eigen::MatrixXd& J) {
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(J.transpose());
    const Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(J.cols(), J.cols());
    return Q.rightCols(J.cols() - J.rows());
}

MinimizeResult finish(const Setup& S, double L0) {
    MinimizeResult r(DiscreteCurve(S.X, false));
    r.B = discrete::bending_energy(r.curve);
    r.Bbar = r.B * L0;
    r.lambda_est = estimate_multiplier(r.curve);
    r.max_constraint_residual = S.max_residual();
    return r;
}

// Starts from the feasible curve in S and walks the displacement in by
// continuation, projecting after each increment; stops early if a projection fails.
MinimizeResult run(Setup S, const Eigen::MatrixXd& displacement, double L0, const MinimizeOptions& opts) {
    const int N = static_cast<int>(S.X.cols()) - 1;
    const double tol = opts.tol > 0.0 ? opts.tol : 1e-8 * N;
    if (!S.project()) throw std::runtime_error("minimize: could not project the initial curve onto the constraints");
    const int increments = 16;
    for (int k = 0; k < increments; ++k) {
        const Eigen::MatrixXd X0 = S.X;
        S.X += displacement / increments;
        if (!S.project()) {
            S.X = X0;
            break;
        }
    }

    int escapes = 0;
    int it = 0;
    bool converged = false;
    double gn = 0.0;
    Eigen::MatrixXd gfull;
    for (;; ++it) {
        const double B = energy(S.X, false, &gfull);
        const Eigen::VectorXd g = S.restrict(gfull);
        const Eigen::MatrixXd J = S.jacobian();
        const Eigen::MatrixXd Z = null_space(J);
        const Eigen::VectorXd rg = Z.transpose() * g;
        gn = rg.norm();
        if (opts.log) opts.log({it, B, gn, S.max_residual()});

        // Hessian of the Lagrangian B - mu . c on the tangent space.
        Eigen::MatrixXd W = fd_hessian(S);
        const Eigen::VectorXd mu = (J * J.transpose()).ldlt().solve(J * g);
        for (int j = S.e0; j <= S.e1; ++j) {
            const double w = 2.0 * mu[j - S.e0];
            for (int d = 0; d < S.dim(); ++d) {
                if (S.free(j)) W(S.index(j) + d, S.index(j) + d) -= w;
                if (S.free(j + 1)) W(S.index(j + 1) + d, S.index(j + 1) + d) -= w;
                if (S.free(j) && S.free(j + 1)) {
                    W(S.index(j) + d, S.index(j + 1) + d) += w;
                    W(S.index(j + 1) + d, S.index(j) + d) += w;
                }
            }
        }
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Z.transpose() * W * Z);
        const Eigen::VectorXd ev = eig.eigenvalues();
        const double emax = ev.cwiseAbs().maxCoeff();

        if (gn < tol) {
            // A stationary point with a descent direction is a saddle: push off it once.
            if (ev[0] < -1e-8 * emax && escapes == 0) {
                ++escapes;
                const Eigen::VectorXd dir = Z * eig.eigenvectors().col(0);
                const Eigen::VectorXd x0 = S.get();
                S.set(x0 + 1e-2 * S.ell * dir / dir.cwiseAbs().maxCoeff());
                if (!S.project()) S.set(x0);
                continue;
            }
            converged = true;
            break;
        }
        if (it >= opts.max_iters) break;

        const Eigen::VectorXd lam = ev.cwiseAbs().cwiseMax(1e-10 * emax);
        const Eigen::VectorXd newton =
            -Z * (eig.eigenvectors() * (eig.eigenvectors().transpose() * rg).cwiseQuotient(lam));
        const Eigen::VectorXd x0 = S.get();
        bool accepted = false;
        for (const Eigen::VectorXd& d : {newton, Eigen::VectorXd(-Z * rg)}) {
            const double slope = g.dot(d);
            if (!(slope < 0.0)) continue;
            double alpha = std::min(1.0, 0.5 * S.ell / d.cwiseAbs().maxCoeff());
            for (int k = 0; k < 50 && !accepted; ++k, alpha /= 2) {
                S.set(x0 + alpha * d);
                if (S.project() && energy(S.X, false, nullptr) <= B + 1e-4 * alpha * slope + 8e-16 * B) {
                    accepted = true;
                }
            }
            if (accepted) break;
            S.set(x0);
        }
        if (!accepted) {
            S.set(x0);
            break;
        }
    }
    MinimizeResult r = finish(S, L0);
    r.grad_norm = gn;
    r.iterations = it;
    r.converged = converged;
    r.saddle_escapes = escapes;
    return r;
}

void check_point(const Eigen::VectorXd& p, int dim, const char* name) {
    if (p.size() != dim) throw DomainError(std::string("minimize: ") + name + " has the wrong dimension");
    if (!p.allFinite()) throw DomainError(std::string("minimize: ") + name + " is not finite");
}

// Unit vectors completing u to an orthonormal set.
std::vector<Eigen::VectorXd> normals(const Eigen::VectorXd& u) {
    if (u.size() == 2) return {Eigen::Vector2d(-u[1], u[0])};
    const Eigen::Vector3d u3(u);
    Eigen::Index k;
    u3.cwiseAbs().minCoeff(&k);
    const Eigen::Vector3d n1 = u3.cross(Eigen::Vector3d::Unit(k)).normalized();
    return {n1, u3.cross(n1)};
}

struct Start {
    Eigen::MatrixXd arc;          // feasible
    Eigen::MatrixXd displacement; // random low-mode bend, zero at both ends
};

// count chords of length ell from a to b along a circular arc, and a random
// low-mode normal displacement of its interior vertices. The arc bends so that
// it leaves a on the side of `heading` when one is given.
Start initial_arc(const Eigen::VectorXd& a, const Eigen::VectorXd& b, int count, double ell,
                            double amplitude, unsigned long long seed, const Eigen::VectorXd* heading = nullptr) {
    const int n = static_cast<int>(a.size());
    const double d = (b - a).norm();
    Eigen::VectorXd u = Eigen::VectorXd::Unit(n, 0);
    if (d > 0.0) u = (b - a) / d;
    std::vector<Eigen::VectorXd> nu = normals(u);
    if (heading) {
        const Eigen::VectorXd side = *heading - heading->dot(u) * u;
        if (side.norm() > 1e-12) nu[0] = -side.normalized();
        if (nu.size() == 2) nu[1] = Eigen::Vector3d(u).cross(Eigen::Vector3d(nu[0]));
    }
    const double target = d / ell; // sin(beta) / sin(beta / count)
    double beta = kPi;
    if (d > 0.0) {
        auto f = [&](double x) { return std::sin(x) / std::sin(x / count) - target; };
        boost::math::tools::eps_tolerance<double> tolerance(50);
        const auto [lo, hi] = boost::math::tools::bisect(f, 1e-12, kPi, tolerance);
        beta = (lo + hi) / 2;
    }
    const double R = ell / (2.0 * std::sin(beta / count));
    const Eigen::VectorXd center = (a + b) / 2 + R * std::cos(beta) * nu[0];

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<Eigen::VectorXd> coeffs;
    for (const Eigen::VectorXd& v : nu) {
        for (int k = 1; k <= 3; ++k) coeffs.push_back(amplitude / k * normal(rng) * v);
    }
    Start st{Eigen::MatrixXd(n, count + 1), Eigen::MatrixXd::Zero(n, count + 1)};
    for (int i = 0; i <= count; ++i) {
        const double angle = -beta + 2.0 * beta * i / count;
        st.arc.col(i) = center + R * (std::sin(angle) * u - std::cos(angle) * nu[0]);
        const double t = static_cast<double>(i) / count;
        for (std::size_t j = 0; j < coeffs.size(); ++j) {
            st.displacement.col(i) += std::sin(kPi * static_cast<double>(j % 3 + 1) * t) * coeffs[j];
        }
    }
    st.arc.col(0) = a;
    st.arc.col(count) = b;
    st.displacement.col(0).setZero();
    st.displacement.col(count).setZero();
    return st;
}

void check_common(int dim, double L0, int N) {
    if (dim != 2 && dim != 3) throw DomainError("minimize: points must be 2- or 3-dimensional");
    if (!(L0 > 0.0) || !std::isfinite(L0)) throw DomainError("minimize: L0 must be positive");
    if (N < 8) throw DomainError("minimize: N must be at least 8");
}

} // namespace

Eigen::MatrixXd energy_gradient(const DiscreteCurve& c) {
    Eigen::MatrixXd g;
    energy(c.vertices(), c.closed(), &g);
    return g;
}

MinimizeResult minimize_pinned(const PinnedProblem& p, const MinimizeOptions& opts) {
    const int dim = static_cast<int>(p.P0.size());
    check_common(dim, p.L0, p.N);
    check_point(p.P1, dim, "P1");
    check_point(p.P0, dim, "P0");
    if ((p.P1 - p.P0).norm() >= p.L0) throw DomainError("minimize: pinned problem needs |P0 - P1| < L0");
    Setup S;
    S.ell = p.L0 / p.N;
    const Start st = initial_arc(p.P0, p.P1, p.N, S.ell, opts.perturbation * p.L0, opts.seed);
    S.X = st.arc;
    S.f0 = 1;
    S.f1 = p.N - 1;
    S.e0 = 0;
    S.e1 = p.N - 1;
    return run(std::move(S), st.displacement, p.L0, opts);
}

MinimizeResult minimize_clamped(const ClampedProblem& p, const MinimizeOptions& opts) {
    const int dim = static_cast<int>(p.P0.size());
    check_common(dim, p.L0, p.N);
    check_point(p.P1, dim, "P1");
    check_point(p.V0, dim, "V0");
    check_point(p.V1, dim, "V1");
    if (std::abs(p.V0.norm() - 1.0) > 1e-9 || std::abs(p.V1.norm() - 1.0) > 1e-9) {
        throw DomainError("minimize: V0 and V1 must be unit vectors");
    }
    const double ell = p.L0 / p.N;
    const Eigen::VectorXd a = p.P0 + ell * p.V0;
    const Eigen::VectorXd b = p.P1 - ell * p.V1;
    const double inner = (p.N - 2) * ell;
    const double d = (b - a).norm();
    const double chord = (p.P1 - p.P0).norm();
    if (std::abs(chord - p.L0) <= 1e-12 * p.L0) {
        const Eigen::VectorXd u = (p.P1 - p.P0) / chord;
        if ((p.V0 - u).norm() > 1e-9 || (p.V1 - u).norm() > 1e-9) {
            throw DomainError("minimize: taut clamped data needs V0 = V1 = (P1 - P0) / |P1 - P0|");
        }
        Eigen::MatrixXd X(dim, p.N + 1);
        for (int i = 0; i <= p.N; ++i) X.col(i) = p.P0 + (i * ell) * u;
        Setup S;
        S.X = X;
        S.ell = ell;
        MinimizeResult r = finish(S, p.L0);
        r.converged = true;
        return r;
    }
    if (d >= inner) throw DomainError("minimize: no curve of length L0 meets the clamped data");
    Setup S;
    S.ell = ell;
    S.X.resize(dim, p.N + 1);
    S.X.col(0) = p.P0;
    S.X.col(p.N) = p.P1;
    const Start st = initial_arc(a, b, p.N - 2, ell, opts.perturbation * p.L0, opts.seed, &p.V0);
    S.X.middleCols(1, p.N - 1) = st.arc;
    Eigen::MatrixXd displacement = Eigen::MatrixXd::Zero(dim, p.N + 1);
    displacement.middleCols(1, p.N - 1) = st.displacement;
    S.f0 = 2;
    S.f1 = p.N - 2;
    S.e0 = 1;
    S.e1 = p.N - 2;
    return run(std::move(S), displacement, p.L0, opts);
}

std::optional<double> estimate_multiplier(const DiscreteCurve& c) {
    const int n = c.size();
    const bool closed = c.closed();
    if ((closed ? n : n - 2) < 16) throw DomainError("estimate_multiplier needs at least 16 interior vertices");
    const Eigen::VectorXd k = c.dim() == 2 ? discrete::signed_curvature(c) : discrete::curvature(c);
    const Eigen::VectorXd l = discrete::edge_lengths(c);
    double num = 0.0, den = 0.0;
    const int first = closed ? 0 : 2;
    const int last = closed ? n - 1 : n - 3;
    for (int i = first; i <= last; ++i) {
        const int p = (i + n - 1) % n, q = (i + 1) % n;
        const double hl = l[p], hr = l[i];
        const double kss = 2.0 * (hl * k[q] - (hl + hr) * k[i] + hr * k[p]) / (hl * hr * (hl + hr));
        num += k[i] * (2.0 * kss + k[i] * k[i] * k[i]);
        den += k[i] * k[i];
    }
    const double kmax = k.cwiseAbs().maxCoeff();
    if (!(den > 0.0) || kmax * discrete::length(c) < 1e-12) return std::nullopt;
    return num / den;
}

double aligned_hausdorff(const DiscreteCurve& a, const DiscreteCurve& b) {
    if (a.dim() != b.dim() || a.size() != b.size()) {
        throw DomainError("aligned_hausdorff needs curves of equal dimension and vertex count");
    }
    const Eigen::MatrixXd A = a.vertices().colwise() - a.vertices().rowwise().mean();
    double best = std::numeric_limits<double>::infinity();
    for (bool reverse : {false, true}) {
        Eigen::MatrixXd Bv = b.vertices().colwise() - b.vertices().rowwise().mean();
        if (reverse) Bv = Bv.rowwise().reverse().eval();
        const Eigen::JacobiSVD<Eigen::MatrixXd> svd(A * Bv.transpose(), Eigen::ComputeFullU | Eigen::ComputeFullV);
        const Eigen::MatrixXd Bt = svd.matrixU() * svd.matrixV().transpose() * Bv;
        double h = 0.0;
        for (int i = 0; i < A.cols(); ++i) {
            h = std::max(h, (Bt.colwise() - A.col(i)).colwise().norm().minCoeff());
            h = std::max(h, (A.colwise() - Bt.col(i)).colwise().norm().minCoeff());
        }
        best = std::min(best, h);
    }
    return best;
}

LeafMinimalityReport verify_leaf_minimality(int N, int seeds, int jobs, int dim) {
    if (seeds < 1) throw DomainError("verify_leaf_minimality needs at least one seed");
    if (N < 100) throw DomainError("verify_leaf_minimality needs N >= 100");
    if (dim != 2 && dim != 3) throw DomainError("verify_leaf_minimality: dim must be 2 or 3");
    PinnedProblem p{Eigen::VectorXd::Zero(dim), Eigen::VectorXd::Zero(dim), 1.0, N};
    std::vector<std::optional<MinimizeResult>> slots(seeds);
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int i = next++; i < seeds; i = next++) {
            MinimizeOptions o;
            o.seed = static_cast<unsigned long long>(i + 1);
            slots[i] = minimize_pinned(p, o);
        }
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < std::clamp(jobs, 1, seeds); ++t) pool.emplace_back(worker);
    worker();
    for (std::thread& t : pool) t.join();

    LeafMinimalityReport r;
    r.N = N;
    for (auto& s : slots) r.runs.push_back(std::move(*s));
    std::vector<double> bb;
    r.all_converged = true;
    for (const MinimizeResult& m : r.runs) {
        bb.push_back(m.Bbar);
        r.all_converged = r.all_converged && m.converged;
    }
    std::sort(bb.begin(), bb.end());
    r.min_Bbar = bb.front();
    r.median_Bbar = bb.size() % 2 ? bb[bb.size() / 2] : (bb[bb.size() / 2 - 1] + bb[bb.size() / 2]) / 2;
    r.deviation = (r.min_Bbar - curves::varpi_star()) / curves::varpi_star();
    r.pass = std::abs(r.deviation) <= 0.01;
    for (std::size_t i = 0; i < r.runs.size(); ++i) {
        for (std::size_t j = i + 1; j < r.runs.size(); ++j) {
            if (!r.runs[i].converged || !r.runs[j].converged) continue;
            r.max_hausdorff = std::max(r.max_hausdorff, aligned_hausdorff(r.runs[i].curve, r.runs[j].curve));
        }
    }
    return r;
}

std::string format_json(const IterationRecord& r) {
    nlohmann::ordered_json j;
    j["iteration"] = r.iteration;
    j["B"] = r.B;
    j["grad_norm"] = r.grad_norm;
    j["max_constraint_residual"] = r.max_constraint_residual;
    return j.dump();
}

std::string format_json(const MinimizeResult& r) {
    nlohmann::ordered_json j;
    j["N"] = r.curve.edge_count();
    j["B"] = r.B;
    j["Bbar"] = r.Bbar;
    j["lambda_est"] = r.lambda_est ? nlohmann::ordered_json(*r.lambda_est) : nlohmann::ordered_json(nullptr);
    j["grad_norm"] = r.grad_norm;
    j["iterations"] = r.iterations;
    j["converged"] = r.converged;
    j["saddle_escapes"] = r.saddle_escapes;
    j["max_constraint_residual"] = r.max_constraint_residual;
    return j.dump();
}

} // namespace elastica::minimize
