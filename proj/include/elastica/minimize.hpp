#pragma once

// Fixed-length minimization of the discrete bending energy.
//
// The length constraint is imposed edge by edge: a curve of length L0 with N
// edges keeps every edge at L0 / N. Pinned problems fix both endpoints;
// clamped problems also fix the first and last edge directions. Iterates stay
// on the constraint set: each trial step is pulled back by minimum-norm
// Gauss-Newton projection, then accepted by an Armijo backtracking search.
// Search directions are Newton steps on the constraint tangent space.

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "elastica/discrete.hpp"

namespace elastica::minimize {

struct PinnedProblem {
    Eigen::VectorXd P0;
    Eigen::VectorXd P1;
    double L0 = 1.0;
    int N = 200;
};

struct ClampedProblem {
    Eigen::VectorXd P0;
    Eigen::VectorXd P1;
    Eigen::VectorXd V0;
    Eigen::VectorXd V1;
    double L0 = 1.0;
    int N = 200;
};

struct IterationRecord {
    int iteration = 0;
    double B = 0.0;
    double grad_norm = 0.0;
    double max_constraint_residual = 0.0; // max relative edge-length error
};

struct MinimizeOptions {
    double tol = 0.0; // projected-gradient tolerance; 0 means 1e-8 * N
    int max_iters = 500;
    unsigned long long seed = 1;
    double perturbation = 0.05; // amplitude of the random initial bend, in units of L0
    std::function<void(const IterationRecord&)> log;
};

struct MinimizeResult {
    explicit MinimizeResult(DiscreteCurve c) : curve(std::move(c)) {}

    DiscreteCurve curve;
    double B = 0.0;
    double Bbar = 0.0;
    std::optional<double> lambda_est;
    double grad_norm = 0.0;
    int iterations = 0;
    bool converged = false;
    int saddle_escapes = 0;
    double max_constraint_residual = 0.0;
};

// Exact gradient of discrete::bending_energy, one column per vertex.
Eigen::MatrixXd energy_gradient(const DiscreteCurve& c);

// Throws DomainError for N < 8, non-positive L0, mismatched dimensions or
// |P0 - P1| >= L0.
MinimizeResult minimize_pinned(const PinnedProblem& p, const MinimizeOptions& opts = {});
// Throws DomainError additionally for non-unit V0/V1 or data no curve of
// length L0 can meet. The taut collinear case returns the straight segment.
MinimizeResult minimize_clamped(const ClampedProblem& p, const MinimizeOptions& opts = {});

// Least-squares lambda in 2 k_ss + k^3 - lambda k = 0 over the interior
// samples (signed curvature for planar curves, |kappa| otherwise). Returns
// nullopt when the curvature vanishes. Throws DomainError with fewer than 16
// interior vertices.
std::optional<double> estimate_multiplier(const DiscreteCurve& c);

// Largest vertex-to-vertex distance between a and the best orthogonal
// (reflections allowed) alignment of b about their centroids, over both
// traversal directions of b. Curves must have equal vertex counts.
double aligned_hausdorff(const DiscreteCurve& a, const DiscreteCurve& b);

struct LeafMinimalityReport {
    int N = 0;
    std::vector<MinimizeResult> runs;
    double min_Bbar = 0.0;
    double median_Bbar = 0.0;
    double deviation = 0.0;     // (min_Bbar - varpi*) / varpi*
    double max_hausdorff = 0.0; // over converged pairs
    bool all_converged = false;
    bool pass = false;          // min_Bbar within 1% of varpi*
};

// minimize_pinned(P0 = P1 = 0, L0 = 1, N) from `seeds` random starts (seed
// values 1..seeds), run on up to `jobs` threads. Throws DomainError for N < 100
// or seeds < 1.
LeafMinimalityReport verify_leaf_minimality(int N, int seeds, int jobs = 1, int dim = 2);

std::string format_json(const IterationRecord& r);
std::string format_json(const MinimizeResult& r);

} // namespace elastica::minimize
