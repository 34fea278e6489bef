#pragma once

// Discrete curves and their energies.
//
// Turning angle theta_i at vertex i is the angle between the incoming and
// outgoing edges. Curvature lives on the dual edge:
//   kappa_i = 2 theta_i / (l_{i-1} + l_i),   B = sum_i kappa_i^2 (l_{i-1} + l_i) / 2.
// Endpoints of open curves carry no curvature.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace elastica {

class DiscreteCurve {
public:
    // vertices: one column per vertex, 2 or 3 rows. Throws DomainError on
    // fewer than 3 vertices, non-finite entries, or zero-length edges.
    DiscreteCurve(Eigen::MatrixXd vertices, bool closed);

    static DiscreteCurve from_points(const std::vector<Eigen::VectorXd>& points, bool closed);

    int dim() const { return static_cast<int>(v_.rows()); }
    int size() const { return static_cast<int>(v_.cols()); }
    int edge_count() const { return closed_ ? size() : size() - 1; }
    bool closed() const { return closed_; }

    const Eigen::MatrixXd& vertices() const { return v_; }
    Eigen::VectorXd vertex(int i) const { return v_.col(i); }
    // Edge i runs from vertex i to vertex i+1 (mod size for closed curves).
    Eigen::VectorXd edge(int i) const;

    DiscreteCurve scaled(double factor) const;
    // x -> R x + t
    DiscreteCurve transformed(const Eigen::MatrixXd& rotation, const Eigen::VectorXd& translation) const;
    // Same points embedded in R^3 (z = 0) when 2-dimensional.
    DiscreteCurve embedded3() const;

private:
    Eigen::MatrixXd v_;
    bool closed_;
};

namespace discrete {

Eigen::VectorXd edge_lengths(const DiscreteCurve& c);
// Arclength of each vertex measured from vertex 0 along the polyline.
Eigen::VectorXd vertex_arclength(const DiscreteCurve& c);
// Unsigned turning angles in [0, pi]; zero at open endpoints.
Eigen::VectorXd turning_angles(const DiscreteCurve& c);
// Signed turning angles (counterclockwise positive); 2-dimensional curves only.
Eigen::VectorXd signed_turning_angles(const DiscreteCurve& c);
Eigen::VectorXd curvature(const DiscreteCurve& c);
Eigen::VectorXd signed_curvature(const DiscreteCurve& c);

double length(const DiscreteCurve& c);
double bending_energy(const DiscreteCurve& c);
double total_curvature(const DiscreteCurve& c);

struct EnergyReport {
    double length = 0.0;
    double bending = 0.0;
    double normalized = 0.0;
    double total_curvature = 0.0;
};

EnergyReport normalized_energy(const DiscreteCurve& c);
std::string format_text(const EnergyReport& r);
std::string format_json(const EnergyReport& r);

struct FenchelReport {
    double normalized = 0.0;
    double total_curvature = 0.0;
    bool pass = false;
};

// Bbar >= TC^2 >= 4 pi^2 for closed curves. tol is absolute.
FenchelReport fenchel_floor_check(const DiscreteCurve& c, double tol = 1e-9);

// Vertices at equal arclength along the input polyline: N for closed curves
// (starting at vertex 0), N + 1 for open curves (both endpoints kept).
DiscreteCurve resample_arclength(const DiscreteCurve& c, int n);

struct MultiplicityReport {
    Eigen::VectorXd point;
    int r = 1;
    std::vector<double> witnesses; // arclength of one vertex per visit
};

// Default clustering radius 1e-3 L.
double default_multiplicity_eps(const DiscreteCurve& c);
MultiplicityReport detect_multiplicity(const DiscreteCurve& c, double eps);

struct LiYauReport {
    int r = 1;
    double normalized = 0.0;
    double bound = 0.0;     // varpi* r^2, or 4 pi^2 when r < 2
    bool applicable = true; // false when r < 2 (Fenchel floor reported instead)
    bool satisfied = false;
    double slack = 0.0;
    Eigen::VectorXd point;
};

LiYauReport liyau_check(const DiscreteCurve& c, double eps, double tol_disc = 0.01);
std::string format_json(const LiYauReport& r);

// Curvature at each end of an open curve extrapolated linearly from the first
// two interior vertices.
std::pair<double, double> endpoint_curvature(const DiscreteCurve& c);

} // namespace discrete
} // namespace elastica
