#pragma once

// Planar elasticae in closed form, the figure-eight and its leaf, leafed
// elasticae through a single point, Frenet reconstruction and classification of
// closed planar elasticae.
//
// Unit-curvature-scale parametrizations (arclength s, parameter m):
//   wavelike   (2E(am s) - s,                -2 sqrt(m) cn s)   theta = 2 asin(sqrt(m) sn s)
//   borderline (2 tanh s - s,                -2 sech s)         theta = 2 asin(tanh s)
//   orbitlike  ((2E(am s) + (m - 2) s) / m,  -2 dn s / m)       theta = 2 am s
//   circular   (sin s, -cos s)                                  theta = s
//   linear     (s, 0)                                           theta = 0
// The figure-eight is the wavelike curve at the root m* of 2E(m) = K(m); the
// leaf is its half s in [-K, K], starting and ending at the origin.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "elastica/discrete.hpp"
#include "elastica/profiles.hpp"

namespace elastica::curves {

// x -> scale * Rot(rotation) * Refl * x + translation, Refl = diag(1, -1) when
// reflect is set.
struct Similarity {
    double rotation = 0.0;
    Eigen::Vector2d translation = Eigen::Vector2d::Zero();
    double scale = 1.0;
    bool reflect = false;

    Eigen::Vector2d apply(const Eigen::Vector2d& p) const;
};

struct PlanarElastica {
    profiles::PlanarFamily family = profiles::PlanarFamily::circular;
    double m = 0.5; // used by wavelike and orbitlike
    Similarity similarity;
    double s0 = 0.0;
};

// Throws DomainError for m outside (0, 1) on the elliptic families or a
// non-positive scale.
void validate(const PlanarElastica& e);

// Phi(gamma(s + s0)); arclength of the image is scale * s.
Eigen::Vector2d eval_planar(const PlanarElastica& e, double s);
// Tangent angle and signed curvature of the image at the same parameter.
double eval_theta(const PlanarElastica& e, double s);
double eval_k(const PlanarElastica& e, double s);
// Derivative of eval_k with respect to the image's arclength.
double eval_dk(const PlanarElastica& e, double s);

// Curve sampled at n + 1 equally spaced parameters on [s_begin, s_end]; the
// result is open. Signed curvature at each sample is returned in k when given.
DiscreteCurve sample_planar(const PlanarElastica& e, double s_begin, double s_end, int n,
                            Eigen::VectorXd* k = nullptr);

// Root of 2E(m) - K(m) in (0, 1), computed once.
double figure_eight_modulus();
// 32 (2 m* - 1) E(m*)^2, the normalized energy of the leaf.
double varpi_star();
// Angle between the leaf's start and end tangents, 2 pi - 4 asin(sqrt(m*)).
double leaf_spread_angle();
// 2 K(m*)
double leaf_length();

// The leaf as a planar elastica on [0, 2K(m*)].
PlanarElastica leaf();
// N + 1 arclength-uniform samples of the leaf, open curve from and to the origin.
DiscreteCurve build_leaf(int n);

// True when the closed-form curve of the family closes up after one period of
// its curvature: wavelike iff |2E(m) - K(m)| < tol, orbitlike never.
bool check_closure(profiles::PlanarFamily family, double m, double tol = 1e-10);

struct RigidMotion {
    Eigen::MatrixXd rotation;    // orthogonal, det +-1
    Eigen::VectorXd translation; // zero for leafed elasticae

    Eigen::VectorXd apply(const Eigen::VectorXd& p) const { return rotation * p + translation; }
};

// r unit vectors in R^3 with consecutive (cyclic) angles equal to psi, within
// 1e-9. Returns nullopt when no such chain is found.
std::optional<std::vector<Eigen::Vector3d>> spherical_chain(int r, double psi);

struct LeafedElastica {
    int r = 0;
    int dim = 0;
    std::vector<RigidMotion> motions;  // leaf i is motions[i] applied to the canonical leaf
    std::vector<Eigen::VectorXd> chain; // start tangent of leaf i
};

// Throws Infeasible for planar odd r or when the tangent chain cannot be built;
// DomainError for r < 2 or dim not in {2, 3}.
LeafedElastica build_leafed(int r, int dim);
// Closed curve with n_per_leaf vertices per leaf (leaf endpoints shared).
DiscreteCurve sample_leafed(const LeafedElastica& le, int n_per_leaf);

struct Frame {
    Eigen::Vector3d position = Eigen::Vector3d::Zero();
    Eigen::Vector3d T = Eigen::Vector3d::UnitX();
    Eigen::Vector3d N = Eigen::Vector3d::UnitY();
    Eigen::Vector3d B = Eigen::Vector3d::UnitZ();
};

using ScalarFunction = std::function<double(double)>;

struct FrenetCurve {
    Eigen::VectorXd s;
    std::vector<Frame> frames;

    DiscreteCurve curve() const; // open curve through the frame positions
};

// Classical RK4 on gamma' = T, T' = k N, N' = -k T + t B, B' = -t N with the
// frame re-orthonormalized after every step. The step is h shrunk to divide
// s1 - s0 evenly. Throws DomainError when frame0 is not a right-handed
// orthonormal frame (1e-10) or h <= 0.
FrenetCurve integrate_frenet(const ScalarFunction& k, const ScalarFunction& t, const Frame& frame0,
                             double s0, double s1, double h);
// Frenet integration with k = |kappa| and t = c / |kappa|^2 of the profile, or
// the signed planar curvature with frozen binormal when c = 0.
FrenetCurve reconstruct_spatial(const profiles::CurvatureProfile& p, const Frame& frame0, double s0,
                                double s1, double h);

enum class ClosedKind { circle, figure_eight, not_elastica };

struct Classification {
    ClosedKind kind = ClosedKind::not_elastica;
    int fold = 0;
    double residual = 0.0; // RMS curvature misfit relative to max |k|
    double scale = 0.0;    // circle radius, or dilation of the unit figure-eight
};

std::string to_string(ClosedKind kind);
// Fits the discrete signed curvature to a constant and to the figure-eight
// profile. Throws DomainError for open or non-planar curves.
Classification classify_closed(const DiscreteCurve& c, double tol = 1e-3);
std::string format_json(const Classification& c);

} // namespace elastica::curves
