#include "elastica/discrete.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_map>

#include <Eigen/Geometry>
#include <json.hpp>

#include "elastica/curves.hpp"
#include "elastica/errors.hpp"

namespace elastica {

DiscreteCurve::DiscreteCurve(Eigen::MatrixXd vertices, bool closed) : v_(std::move(vertices)), closed_(closed) {
    if (v_.rows() != 2 && v_.rows() != 3) throw DomainError("curve vertices must be 2- or 3-dimensional");
    if (v_.cols() < 3) throw DomainError("curve needs at least 3 vertices");
    if (!v_.allFinite()) throw DomainError("curve has non-finite coordinates");
    for (int i = 0; i < edge_count(); ++i) {
        if (!(edge(i).norm() > 0.0)) {
            throw DomainError("curve has a zero-length edge at vertex " + std::to_string(i));
        }
    }
}

DiscreteCurve DiscreteCurve::from_points(const std::vector<Eigen::VectorXd>& points, bool closed) {
    if (points.empty()) throw DomainError("curve needs at least 3 vertices");
    Eigen::MatrixXd v(points.front().size(), static_cast<Eigen::Index>(points.size()));
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i].size() != v.rows()) throw DomainError("mixed point dimensions");
        v.col(static_cast<Eigen::Index>(i)) = points[i];
    }
    return DiscreteCurve(std::move(v), closed);
}

Eigen::VectorXd DiscreteCurve::edge(int i) const { return v_.col((i + 1) % size()) - v_.col(i); }

DiscreteCurve DiscreteCurve::scaled(double factor) const { return DiscreteCurve(v_ * factor, closed_); }

DiscreteCurve DiscreteCurve::transformed(const Eigen::MatrixXd& rotation, const Eigen::VectorXd& translation) const {
    Eigen::MatrixXd out = rotation * v_;
    out.colwise() += translation;
    return DiscreteCurve(std::move(out), closed_);
}

DiscreteCurve DiscreteCurve::embedded3() const {
    if (dim() == 3) return *this;
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(3, v_.cols());
    out.topRows(2) = v_;
    return DiscreteCurve(std::move(out), closed_);
}

namespace discrete {

namespace {

constexpr double kPi = std::numbers::pi;

// Angle between consecutive edges a and b.
double angle_between(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    double cross = 0.0;
    if (a.size() == 2) {
        cross = std::abs(a[0] * b[1] - a[1] * b[0]);
    } else {
        cross = Eigen::Vector3d(a[0], a[1], a[2]).cross(Eigen::Vector3d(b[0], b[1], b[2])).norm();
    }
    return std::atan2(cross, a.dot(b));
}

void require_closed(const DiscreteCurve& c, const char* op) {
    if (!c.closed()) throw DomainError(std::string(op) + " requires a closed curve");
}

// Range of vertices carrying curvature.
std::pair<int, int> interior(const DiscreteCurve& c) {
    return c.closed() ? std::pair{0, c.size()} : std::pair{1, c.size() - 1};
}

} // namespace

Eigen::VectorXd edge_lengths(const DiscreteCurve& c) {
    Eigen::VectorXd out(c.edge_count());
    for (int i = 0; i < c.edge_count(); ++i) out[i] = c.edge(i).norm();
    return out;
}

Eigen::VectorXd vertex_arclength(const DiscreteCurve& c) {
    Eigen::VectorXd s(c.size());
    s[0] = 0.0;
    for (int i = 1; i < c.size(); ++i) s[i] = s[i - 1] + c.edge(i - 1).norm();
    return s;
}

Eigen::VectorXd turning_angles(const DiscreteCurve& c) {
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(c.size());
    const auto [lo, hi] = interior(c);
    const int n = c.size();
    for (int i = lo; i < hi; ++i) theta[i] = angle_between(c.edge((i - 1 + n) % n), c.edge(i));
    return theta;
}

Eigen::VectorXd signed_turning_angles(const DiscreteCurve& c) {
    if (c.dim() != 2) throw DomainError("signed turning angles need a planar curve");
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(c.size());
    const auto [lo, hi] = interior(c);
    const int n = c.size();
    for (int i = lo; i < hi; ++i) {
        const Eigen::VectorXd a = c.edge((i - 1 + n) % n), b = c.edge(i);
        theta[i] = std::atan2(a[0] * b[1] - a[1] * b[0], a.dot(b));
    }
    return theta;
}

namespace {

Eigen::VectorXd to_curvature(const DiscreteCurve& c, const Eigen::VectorXd& theta) {
    const Eigen::VectorXd len = edge_lengths(c);
    Eigen::VectorXd k = Eigen::VectorXd::Zero(c.size());
    const auto [lo, hi] = interior(c);
    const int ne = c.edge_count();
    for (int i = lo; i < hi; ++i) k[i] = 2.0 * theta[i] / (len[(i - 1 + ne) % ne] + len[i % ne]);
    return k;
}

} // namespace

Eigen::VectorXd curvature(const DiscreteCurve& c) { return to_curvature(c, turning_angles(c)); }
Eigen::VectorXd signed_curvature(const DiscreteCurve& c) { return to_curvature(c, signed_turning_angles(c)); }

double length(const DiscreteCurve& c) { return edge_lengths(c).sum(); }

double bending_energy(const DiscreteCurve& c) {
    const Eigen::VectorXd theta = turning_angles(c);
    const Eigen::VectorXd len = edge_lengths(c);
    const auto [lo, hi] = interior(c);
    const int ne = c.edge_count();
    double b = 0.0;
    for (int i = lo; i < hi; ++i) b += 2.0 * theta[i] * theta[i] / (len[(i - 1 + ne) % ne] + len[i % ne]);
    return b;
}

double total_curvature(const DiscreteCurve& c) { return turning_angles(c).sum(); }

EnergyReport normalized_energy(const DiscreteCurve& c) {
    EnergyReport r;
    r.length = length(c);
    r.bending = bending_energy(c);
    r.normalized = r.length * r.bending;
    r.total_curvature = total_curvature(c);
    return r;
}

std::string format_text(const EnergyReport& r) {
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "length           %.15g\nbending          %.15g\nnormalized       %.15g\n"
                  "total_curvature  %.15g\n",
                  r.length, r.bending, r.normalized, r.total_curvature);
    return buf;
}

std::string format_json(const EnergyReport& r) {
    nlohmann::ordered_json j;
    j["length"] = r.length;
    j["bending"] = r.bending;
    j["Bbar"] = r.normalized;
    j["total_curvature"] = r.total_curvature;
    return j.dump();
}

FenchelReport fenchel_floor_check(const DiscreteCurve& c, double tol) {
    require_closed(c, "fenchel_floor_check");
    const EnergyReport e = normalized_energy(c);
    FenchelReport out;
    out.normalized = e.normalized;
    out.total_curvature = e.total_curvature;
    out.pass = e.normalized >= e.total_curvature * e.total_curvature - tol &&
               e.total_curvature >= 2.0 * kPi - tol;
    return out;
}

DiscreteCurve resample_arclength(const DiscreteCurve& c, int n) {
    if (n < 3) throw DomainError("resample_arclength needs N >= 3");
    const Eigen::VectorXd len = edge_lengths(c);
    const double total = len.sum();
    const int count = c.closed() ? n : n + 1;
    Eigen::MatrixXd out(c.dim(), count);
    int edge = 0;
    double edge_start = 0.0;
    for (int j = 0; j < count; ++j) {
        const double target = total * j / n;
        while (edge < c.edge_count() - 1 && edge_start + len[edge] < target) {
            edge_start += len[edge];
            ++edge;
        }
        const double t = std::clamp((target - edge_start) / len[edge], 0.0, 1.0);
        out.col(j) = (1.0 - t) * c.vertex(edge) + t * c.vertex((edge + 1) % c.size());
    }
    if (!c.closed()) out.col(count - 1) = c.vertex(c.size() - 1);
    return DiscreteCurve(std::move(out), c.closed());
}

double default_multiplicity_eps(const DiscreteCurve& c) { return 1e-3 * length(c); }

MultiplicityReport detect_multiplicity(const DiscreteCurve& c, double eps) {
    if (!(eps > 0.0)) throw DomainError("multiplicity eps must be positive");
    const int n = c.size();
    const int d = c.dim();
    const Eigen::VectorXd s = vertex_arclength(c);
    const double total = length(c);

    // Greedy clustering: each vertex joins the nearest seed within eps,
    // otherwise it seeds a new cluster. Seeds are bucketed on an eps grid.
    struct Key {
        long x, y, z;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const {
            return std::hash<long>()(k.x * 73856093L ^ k.y * 19349663L ^ k.z * 83492791L);
        }
    };
    auto key_of = [&](const Eigen::VectorXd& p) {
        return Key{static_cast<long>(std::floor(p[0] / eps)), static_cast<long>(std::floor(p[1] / eps)),
                   d == 3 ? static_cast<long>(std::floor(p[2] / eps)) : 0L};
    };
    std::unordered_map<Key, std::vector<int>, KeyHash> grid;
    std::vector<int> seeds;                // vertex index of each seed
    std::vector<std::vector<int>> members; // per cluster
    for (int i = 0; i < n; ++i) {
        const Eigen::VectorXd p = c.vertex(i);
        const Key k = key_of(p);
        int best = -1;
        double best_dist = eps;
        for (long dx = -1; dx <= 1; ++dx)
            for (long dy = -1; dy <= 1; ++dy)
                for (long dz = (d == 3 ? -1 : 0); dz <= (d == 3 ? 1 : 0); ++dz) {
                    const auto it = grid.find(Key{k.x + dx, k.y + dy, k.z + dz});
                    if (it == grid.end()) continue;
                    for (int cl : it->second) {
                        const double dist = (c.vertex(seeds[cl]) - p).norm();
                        if (dist <= best_dist) {
                            best_dist = dist;
                            best = cl;
                        }
                    }
                }
        if (best < 0) {
            best = static_cast<int>(seeds.size());
            seeds.push_back(i);
            members.emplace_back();
            grid[k].push_back(best);
        }
        members[best].push_back(i);
    }

    MultiplicityReport report;
    report.point = c.vertex(0);
    report.r = 0;
    const double gap = 3.0 * eps;
    for (const auto& cluster : members) {
        // Split members into visits by arclength gaps (indices are increasing).
        std::vector<std::vector<int>> visits;
        for (std::size_t j = 0; j < cluster.size(); ++j) {
            if (j == 0 || s[cluster[j]] - s[cluster[j - 1]] > gap) visits.emplace_back();
            visits.back().push_back(cluster[j]);
        }
        if (c.closed() && visits.size() > 1 &&
            s[visits.front().front()] + total - s[visits.back().back()] <= gap) {
            visits.front().insert(visits.front().end(), visits.back().begin(), visits.back().end());
            visits.pop_back();
        }
        const int r = static_cast<int>(visits.size());
        if (r <= report.r) continue;
        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(d);
        for (int i : cluster) centroid += c.vertex(i);
        centroid /= static_cast<double>(cluster.size());
        report.r = r;
        report.point = centroid;
        report.witnesses.clear();
        for (const auto& visit : visits) {
            int nearest = visit.front();
            for (int i : visit) {
                if ((c.vertex(i) - centroid).norm() < (c.vertex(nearest) - centroid).norm()) nearest = i;
            }
            report.witnesses.push_back(s[nearest]);
        }
    }
    return report;
}

LiYauReport liyau_check(const DiscreteCurve& c, double eps, double tol_disc) {
    require_closed(c, "liyau_check");
    const MultiplicityReport mult = detect_multiplicity(c, eps);
    LiYauReport out;
    out.r = mult.r;
    out.point = mult.point;
    out.normalized = normalized_energy(c).normalized;
    if (mult.r >= 2) {
        out.bound = curves::varpi_star() * mult.r * mult.r;
        out.satisfied = out.normalized >= out.bound * (1.0 - tol_disc);
    } else {
        const FenchelReport f = fenchel_floor_check(c);
        out.applicable = false;
        out.bound = 4.0 * kPi * kPi;
        out.satisfied = f.pass && out.normalized >= out.bound * (1.0 - tol_disc);
    }
    out.slack = out.normalized - out.bound;
    return out;
}

std::string format_json(const LiYauReport& r) {
    nlohmann::ordered_json j;
    j["r"] = r.r;
    j["Bbar"] = r.normalized;
    j["bound"] = r.bound;
    j["bound_kind"] = r.applicable ? "liyau" : "fenchel";
    j["satisfied"] = r.satisfied;
    j["slack"] = r.slack;
    j["point"] = std::vector<double>(r.point.data(), r.point.data() + r.point.size());
    return j.dump();
}

std::pair<double, double> endpoint_curvature(const DiscreteCurve& c) {
    if (c.closed()) throw DomainError("endpoint_curvature requires an open curve");
    if (c.size() < 5) throw DomainError("endpoint_curvature needs at least 5 vertices");
    const Eigen::VectorXd k = c.dim() == 2 ? signed_curvature(c) : curvature(c);
    const Eigen::VectorXd s = vertex_arclength(c);
    const int n = c.size();
    auto extrapolate = [](double s0, double s1, double k1, double s2, double k2) {
        return k1 + (k1 - k2) * (s1 - s0) / (s2 - s1);
    };
    const double head = extrapolate(s[0], s[1], k[1], s[2], k[2]);
    const double tail = extrapolate(s[n - 1], s[n - 2], k[n - 2], s[n - 3], k[n - 3]);
    return {std::abs(head), std::abs(tail)};
}

} // namespace discrete
} // namespace elastica
