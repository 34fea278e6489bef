#pragma once

// Initial-value integration of the elastica equation in position form,
//   2 g'''' + 6 <g'', g'''> g' + 3 |g''|^2 g'' - lambda g'' = 0,
// as a first-order system in (g, g', g'', g''') with classical RK4, plus the
// quantities it conserves.

#include <vector>

#include <Eigen/Core>

#include "elastica/curves.hpp"
#include "elastica/profiles.hpp"

namespace elastica::odeint {

struct ElasticaState {
    Eigen::VectorXd gamma;
    Eigen::VectorXd d1;
    Eigen::VectorXd d2;
    Eigen::VectorXd d3;

    int dim() const { return static_cast<int>(gamma.size()); }
};

struct Trajectory {
    double h = 0.0;
    double lambda = 0.0;
    std::vector<ElasticaState> states; // states[i] at arclength i * h
};

struct IntegrateOptions {
    // Largest accepted local error, estimated by comparing one step with two
    // half steps.
    double max_local_error = 1e-6;
};

// Fixed-step RK4 from arclength 0 to s_end; the step is h shrunk to divide
// s_end evenly. Throws DomainError for a malformed initial state (mismatched
// sizes, | |d1| - 1 | > 1e-9 or <d1, d2> != 0 to 1e-9) or non-positive h/s_end,
// and std::runtime_error when the local error estimate exceeds the limit.
Trajectory integrate_elastica(const ElasticaState& s0, double lambda, double s_end, double h,
                              const IntegrateOptions& opts = {});

// det(d1, d2, d3) per state; DomainError unless 3-dimensional.
std::vector<double> monitor_det(const Trajectory& t);

// Numerical rank of [d1 d2 d3]; singular values below tol * sigma_max are dropped.
int dimension_of_span(const ElasticaState& s, double tol = 1e-8);

// Largest distance of trajectory positions from the initial osculating plane
// (any containing plane for a line). DomainError when the initial span has rank 3.
double planarity_drift(const Trajectory& t);

// Per-state value of (u')^2 + u^3 - 2 lambda u^2 - 4 a u + 4 c^2 with u = |d2|^2;
// zero along exact solutions with first-integral constants (a, c).
std::vector<double> energy_law(const Trajectory& t, double a, double c);

// Unit-speed state of a planar closed-form elastica at parameter s (2-dimensional).
ElasticaState planar_state(const curves::PlanarElastica& e, double s);
// Spatial state at s of the curve with the profile's curvature and torsion, in the
// Frenet frame given (position, T, N, B).
ElasticaState profile_state(const profiles::CurvatureProfile& p, double s, const curves::Frame& frame);
// Helix with constant curvature k and torsion t; an elastica for lambda = k^2 - 2 t^2.
ElasticaState helix_state(double k, double t);
// Embeds a planar state in R^3 (z = 0) and applies x -> R x.
ElasticaState embed3(const ElasticaState& s, const Eigen::Matrix3d& rotation);

} // namespace elastica::odeint
