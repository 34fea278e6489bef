#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "elastica/curves.hpp"
#include "elastica/elliptic.hpp"
#include "elastica/errors.hpp"
#include "elastica/io.hpp"
#include "elastica/minimize.hpp"
#include "elastica/odeint.hpp"
#include "elastica/profiles.hpp"

namespace elastica::cli {

namespace {

using Json = nlohmann::ordered_json;
using Columns = std::vector<std::pair<std::string, Eigen::VectorXd>>;

constexpr double kPi = std::numbers::pi;

struct Globals {
    std::string out;
    std::string format;
    std::optional<unsigned long long> seed;
    int jobs = 1;
    bool quiet = false;
};

// Where a subcommand writes: --out when given, the caller's stream otherwise.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : os_(&fallback) {
        if (!path.empty() && path != "-") {
            file_.open(path, std::ios::binary);
            if (!file_) throw std::invalid_argument("cannot open output file " + path);
            os_ = &file_;
        }
    }
    std::ostream& stream() { return *os_; }

private:
    std::ofstream file_;
    std::ostream* os_;
};

std::string slurp(const std::string& path, std::istream& in) {
    if (path.empty() || path == "-") {
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }
    return io::read_file(path);
}

DiscreteCurve load_curve(const std::string& path, std::istream& in) {
    std::istringstream ss(slurp(path, in));
    return read_csv(ss);
}

// Open polylines whose ends meet (within 1e-6 L) are read as closed curves.
DiscreteCurve require_closed(const DiscreteCurve& c) {
    if (c.closed()) return c;
    const double gap = (c.vertex(0) - c.vertex(c.size() - 1)).norm();
    if (gap <= 1e-6 * discrete::length(c) && c.size() > 3) {
        return DiscreteCurve(c.vertices().leftCols(c.size() - 1), true);
    }
    throw std::invalid_argument("input is an open curve; a closed curve is required");
}

Eigen::VectorXd signed_or_unsigned_curvature(const DiscreteCurve& c) {
    return c.dim() == 2 ? discrete::signed_curvature(c) : discrete::curvature(c);
}

Json curve_json(const DiscreteCurve& c, const Eigen::VectorXd& s, const Columns& extra) {
    Json j;
    j["closed"] = c.closed();
    Json cols = Json::array({"s", "x", "y"});
    if (c.dim() == 3) cols.push_back("z");
    for (const auto& [name, v] : extra) cols.push_back(name);
    j["columns"] = cols;
    Json rows = Json::array();
    for (int i = 0; i < c.size(); ++i) {
        Json row = Json::array({s[i]});
        for (int d = 0; d < c.dim(); ++d) row.push_back(c.vertices()(d, i));
        for (const auto& [name, v] : extra) row.push_back(v[i]);
        rows.push_back(row);
    }
    j["rows"] = rows;
    return j;
}

void emit_curve(const Globals& g, std::ostream& out, const DiscreteCurve& c, const Eigen::VectorXd& s,
                const Columns& extra) {
    Sink sink(g.out, out);
    if (g.format == "svg") {
        write_svg(sink.stream(), c);
    } else if (g.format == "json") {
        sink.stream() << curve_json(c, s, extra).dump() << "\n";
    } else {
        write_csv(sink.stream(), c, s, extra);
    }
}

void emit_json(const Globals& g, std::ostream& out, const std::string& json) {
    if (g.format == "svg" || g.format == "csv") throw std::invalid_argument("this subcommand writes JSON only");
    Sink sink(g.out, out);
    sink.stream() << json << "\n";
}

std::string fixed15(double v) { return io::format_double(v, 15); }

// --- subcommands -------------------------------------------------------------

struct SampleOpts {
    std::string family;
    std::string m = "0.5"; // a number, or "mstar" for the figure-eight parameter
    int N = 1024;
    double periods = 1.0;
    std::vector<double> range;
    std::string profile;
};

int cmd_sample(const SampleOpts& o, const Globals& g, Json& cfg, std::ostream& out, std::ostream& err) {
    if (o.profile.empty() == o.family.empty()) throw std::invalid_argument("sample needs exactly one of --family, --profile");
    if (!(o.periods > 0.0)) throw std::invalid_argument("--periods must be positive");
    if (!o.profile.empty()) {
        const profiles::ProfileRecord rec = profiles::parse_profile_record(io::read_file(o.profile));
        const double len = o.periods * profiles::profile_period(rec.profile);
        cfg["profile_record"] = profiles::format_profile_record(rec);
        cfg["range"] = {0.0, len};
        if (!g.quiet) err << cfg.dump() << "\n";
        const curves::FrenetCurve fc = curves::reconstruct_spatial(rec.profile, curves::Frame{}, 0.0, len, len / o.N);
        Eigen::VectorXd k(fc.s.size());
        for (Eigen::Index i = 0; i < k.size(); ++i) k[i] = profiles::kappa(rec.profile, fc.s[i]);
        emit_curve(g, out, fc.curve(), fc.s, {{"k", k}});
        return kOk;
    }
    curves::PlanarElastica e;
    e.family = profiles::parse_family(o.family);
    e.m = o.m == "mstar" ? curves::figure_eight_modulus() : io::parse_double(o.m);
    cfg["m"] = e.m;
    curves::validate(e);
    double a = 0.0, b = 0.0;
    switch (e.family) {
    case profiles::PlanarFamily::wavelike: b = o.periods * 4 * elliptic::comp_K(e.m); break;
    case profiles::PlanarFamily::orbitlike: b = o.periods * 2 * elliptic::comp_K(e.m); break;
    case profiles::PlanarFamily::circular: b = o.periods * 2 * kPi; break;
    case profiles::PlanarFamily::borderline: a = -5.0 * o.periods, b = 5.0 * o.periods; break;
    case profiles::PlanarFamily::linear: b = o.periods; break;
    }
    if (!o.range.empty()) {
        if (o.range.size() != 2 || !(o.range[1] > o.range[0])) throw std::invalid_argument("--range needs a < b");
        a = o.range[0];
        b = o.range[1];
    }
    cfg["range"] = {a, b};
    if (!g.quiet) err << cfg.dump() << "\n";
    Eigen::VectorXd k;
    const DiscreteCurve c = curves::sample_planar(e, a, b, o.N, &k);
    emit_curve(g, out, c, Eigen::VectorXd::LinSpaced(o.N + 1, a, b), {{"k", k}});
    return kOk;
}

int cmd_constants(const Globals& g, std::ostream& out) {
    const double m = curves::figure_eight_modulus();
    const double K = elliptic::comp_K(m), E = elliptic::comp_E(m);
    if (g.format == "csv" || g.format == "svg") throw std::invalid_argument("constants writes JSON only");
    Sink sink(g.out, out);
    sink.stream() << "{\"m_star\":" << fixed15(m) << ",\"varpi_star\":" << fixed15(curves::varpi_star())
                  << ",\"psi\":" << fixed15(curves::leaf_spread_angle()) << ",\"K_mstar\":" << fixed15(K)
                  << ",\"E_mstar\":" << fixed15(E) << ",\"four_pi_sq\":" << fixed15(4 * kPi * kPi) << "}\n";
    return kOk;
}

int cmd_energy(const std::string& input, const Globals& g, std::istream& in, std::ostream& out) {
    const discrete::EnergyReport r = discrete::normalized_energy(load_curve(input, in));
    if (g.format == "csv") {
        Sink sink(g.out, out);
        sink.stream() << "length,bending,Bbar,total_curvature\n"
                      << io::format_double(r.length) << "," << io::format_double(r.bending) << ","
                      << io::format_double(r.normalized) << "," << io::format_double(r.total_curvature) << "\n";
    } else {
        emit_json(g, out, discrete::format_json(r));
    }
    return kOk;
}

int cmd_liyau(const std::string& input, double eps, double tol, const Globals& g, Json& cfg, std::istream& in,
              std::ostream& out, std::ostream& err) {
    const DiscreteCurve c = require_closed(load_curve(input, in));
    const double e = eps > 0.0 ? eps : discrete::default_multiplicity_eps(c);
    cfg["eps"] = e;
    if (!g.quiet) err << cfg.dump() << "\n";
    const discrete::LiYauReport r = discrete::liyau_check(c, e, tol);
    emit_json(g, out, discrete::format_json(r));
    return r.satisfied ? kOk : kNotSatisfied;
}

int cmd_classify(const std::string& input, double tol, const Globals& g, std::istream& in, std::ostream& out) {
    const DiscreteCurve c = require_closed(load_curve(input, in));
    emit_json(g, out, curves::format_json(curves::classify_closed(c, tol)));
    return kOk;
}

int cmd_leafed(int r, int dim, int N, const Globals& g, std::ostream& out) {
    const curves::LeafedElastica le = curves::build_leafed(r, dim);
    const DiscreteCurve c = curves::sample_leafed(le, N);
    emit_curve(g, out, c, discrete::vertex_arclength(c), {{"k", signed_or_unsigned_curvature(c)}});
    return kOk;
}

int cmd_minimize(const std::string& path, int seeds, const std::string& log_path, const Globals& g, Json& cfg,
                 std::ostream& out, std::ostream& err) {
    const io::KeyValues kv = io::parse_key_values(io::read_file(path));
    for (const auto& [key, value] : kv) {
        static const std::vector<std::string> known{"P0", "P1", "V0", "V1", "L0", "N", "tol", "max_iters", "seed"};
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw std::invalid_argument("unknown problem key: " + key);
        }
    }
    const Eigen::VectorXd P0 = io::get_vector(kv, "P0"), P1 = io::get_vector(kv, "P1");
    const double L0 = io::get_double(kv, "L0");
    const int N = static_cast<int>(io::get_int(kv, "N", 200));
    const bool clamped = kv.count("V0") || kv.count("V1");
    if (clamped && !(kv.count("V0") && kv.count("V1"))) throw std::invalid_argument("clamped problems need V0 and V1");
    minimize::MinimizeOptions base;
    base.tol = io::get_double(kv, "tol", 0.0);
    base.max_iters = static_cast<int>(io::get_int(kv, "max_iters", 500));
    const unsigned long long seed0 =
        g.seed ? *g.seed : static_cast<unsigned long long>(io::get_int(kv, "seed", 1));
    if (seeds < 1) throw std::invalid_argument("--seeds must be positive");

    cfg["problem"] = {{"kind", clamped ? "clamped" : "pinned"}, {"P0", std::vector<double>(P0.begin(), P0.end())},
                      {"P1", std::vector<double>(P1.begin(), P1.end())}, {"L0", L0}, {"N", N},
                      {"tol", base.tol > 0.0 ? base.tol : 1e-8 * N}, {"max_iters", base.max_iters}, {"seed", seed0}};
    if (clamped) {
        const Eigen::VectorXd V0 = io::get_vector(kv, "V0"), V1 = io::get_vector(kv, "V1");
        cfg["problem"]["V0"] = std::vector<double>(V0.begin(), V0.end());
        cfg["problem"]["V1"] = std::vector<double>(V1.begin(), V1.end());
    }
    if (!g.quiet) err << cfg.dump() << "\n";

    std::vector<std::optional<minimize::MinimizeResult>> results(seeds);
    std::vector<std::vector<minimize::IterationRecord>> logs(seeds);
    std::vector<std::string> errors(seeds);
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int i = next++; i < seeds; i = next++) {
            minimize::MinimizeOptions o = base;
            o.seed = seed0 + static_cast<unsigned long long>(i);
            o.log = [&logs, i](const minimize::IterationRecord& r) { logs[i].push_back(r); };
            try {
                if (clamped) {
                    results[i] = minimize::minimize_clamped(
                        {P0, P1, io::get_vector(kv, "V0"), io::get_vector(kv, "V1"), L0, N}, o);
                } else {
                    results[i] = minimize::minimize_pinned({P0, P1, L0, N}, o);
                }
            } catch (const DomainError& e) {
                errors[i] = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < std::clamp(g.jobs, 1, seeds); ++t) pool.emplace_back(worker);
    worker();
    for (std::thread& t : pool) t.join();
    for (const std::string& e : errors) {
        if (!e.empty()) throw DomainError(e);
    }

    // JSON-lines log, in seed order.
    std::ostringstream log;
    for (int i = 0; i < seeds; ++i) {
        for (const minimize::IterationRecord& r : logs[i]) {
            Json j = Json::parse(minimize::format_json(r));
            j["seed"] = seed0 + static_cast<unsigned long long>(i);
            log << j.dump() << "\n";
        }
    }
    if (!log_path.empty()) {
        Sink sink(log_path, err);
        sink.stream() << log.str();
    } else if (!g.quiet) {
        err << log.str();
    }

    int best = 0;
    for (int i = 1; i < seeds; ++i) {
        if (results[i]->converged > results[best]->converged ||
            (results[i]->converged == results[best]->converged && results[i]->Bbar < results[best]->Bbar)) {
            best = i;
        }
    }
    const minimize::MinimizeResult& r = *results[best];
    Json summary = Json::parse(minimize::format_json(r));
    summary["seed"] = seed0 + static_cast<unsigned long long>(best);
    if (!g.quiet) err << summary.dump() << "\n";
    if (g.format == "json") {
        Sink sink(g.out, out);
        sink.stream() << summary.dump() << "\n";
    } else {
        emit_curve(g, out, r.curve, discrete::vertex_arclength(r.curve),
                   {{"k", signed_or_unsigned_curvature(r.curve)}});
    }
    return kOk;
}

int cmd_integrate(const std::string& path, const Globals& g, Json& cfg, std::istream& in, std::ostream& out,
                  std::ostream& err) {
    const io::KeyValues kv = io::parse_key_values(slurp(path, in));
    odeint::ElasticaState s;
    double lambda = 0.0;
    if (kv.count("m")) {
        const profiles::CurvatureProfile p = profiles::make_profile(
            io::get_double(kv, "m"), io::get_double(kv, "w"), io::get_double(kv, "A"), io::get_double(kv, "s0", 0.0));
        s = odeint::profile_state(p, 0.0, curves::Frame{});
        lambda = io::get_double(kv, "lambda", profiles::profile_lambda(p));
    } else {
        s = {io::get_vector(kv, "gamma"), io::get_vector(kv, "d1"), io::get_vector(kv, "d2"), io::get_vector(kv, "d3")};
        lambda = io::get_double(kv, "lambda");
    }
    if (s.dim() == 2) s = odeint::embed3(s, Eigen::Matrix3d::Identity());
    if (s.dim() != 3) throw std::invalid_argument("integrate supports 2- and 3-dimensional states");
    const double s_end = io::get_double(kv, "s_end");
    const double h = io::get_double(kv, "h", 1e-3);
    odeint::IntegrateOptions o;
    o.max_local_error = io::get_double(kv, "max_local_error", o.max_local_error);
    cfg["lambda"] = lambda;
    cfg["s_end"] = s_end;
    cfg["h"] = h;
    if (!g.quiet) err << cfg.dump() << "\n";

    odeint::Trajectory t;
    try {
        t = odeint::integrate_elastica(s, lambda, s_end, h, o);
    } catch (const std::runtime_error& e) {
        throw std::invalid_argument(e.what()); // step too large for the requested accuracy
    }
    const std::vector<double> det = odeint::monitor_det(t);
    const int n = static_cast<int>(t.states.size());
    Eigen::MatrixXd x(3, n);
    Eigen::VectorXd sv(n), k(n), dv(n);
    for (int i = 0; i < n; ++i) {
        x.col(i) = t.states[i].gamma;
        sv[i] = i * t.h;
        k[i] = t.states[i].d2.norm();
        dv[i] = det[i];
    }
    emit_curve(g, out, DiscreteCurve(x, false), sv, {{"k", k}, {"det", dv}});
    return kOk;
}

} // namespace

void write_csv(std::ostream& os, const DiscreteCurve& c, const Eigen::VectorXd& s, const Columns& extra) {
    os << "# closed=" << (c.closed() ? 1 : 0) << "\n";
    os << "s,x,y" << (c.dim() == 3 ? ",z" : "");
    for (const auto& [name, v] : extra) os << "," << name;
    os << "\n";
    for (int i = 0; i < c.size(); ++i) {
        os << io::format_double(s[i]);
        for (int d = 0; d < c.dim(); ++d) os << "," << io::format_double(c.vertices()(d, i));
        for (const auto& [name, v] : extra) os << "," << io::format_double(v[i]);
        os << "\n";
    }
}

DiscreteCurve read_csv(std::istream& is) {
    std::string line;
    bool closed = false;
    std::vector<std::string> header;
    std::vector<Eigen::VectorXd> points;
    int dim = 0;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            const std::string tag = "# closed=";
            if (line.rfind(tag, 0) == 0) {
                const std::string v = line.substr(tag.size());
                if (v != "0" && v != "1") throw std::invalid_argument("bad closed flag: " + line);
                closed = v == "1";
            }
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
        if (header.empty()) {
            header = cells;
            if (header.size() < 3 || header[0] != "s" || header[1] != "x" || header[2] != "y") {
                throw std::invalid_argument("CSV header must start with s,x,y");
            }
            dim = header.size() > 3 && header[3] == "z" ? 3 : 2;
            continue;
        }
        if (cells.size() != header.size()) throw std::invalid_argument("CSV row has the wrong number of columns");
        Eigen::VectorXd p(dim);
        for (int d = 0; d < dim; ++d) p[d] = io::parse_double(cells[1 + d]);
        points.push_back(p);
    }
    if (header.empty()) throw std::invalid_argument("CSV input is empty");
    try {
        return DiscreteCurve::from_points(points, closed);
    } catch (const DomainError& e) {
        throw std::invalid_argument(std::string("invalid curve in CSV: ") + e.what());
    }
}

void write_svg(std::ostream& os, const DiscreteCurve& c) {
    const Eigen::MatrixXd xy = c.vertices().topRows(2);
    const Eigen::Vector2d lo = xy.rowwise().minCoeff(), hi = xy.rowwise().maxCoeff();
    const double extent = std::max((hi - lo).maxCoeff(), 1e-300);
    const double pad = 0.02;
    const Eigen::Vector2d offset = (Eigen::Vector2d::Ones() - (hi - lo) / extent) / 2;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << -pad << " " << -pad << " " << 1 + 2 * pad << " "
       << 1 + 2 * pad << "\" width=\"512\" height=\"512\">\n";
    os << "<" << (c.closed() ? "polygon" : "polyline") << " fill=\"none\" stroke=\"black\" stroke-width=\"0.004\" points=\"";
    for (int i = 0; i < c.size(); ++i) {
        const Eigen::Vector2d q = (xy.col(i) - lo) / extent + offset;
        os << (i ? " " : "") << io::format_double(q[0], 6) << "," << io::format_double(1.0 - q[1], 6);
    }
    os << "\"/>\n</svg>\n";
}

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"Euler elastica toolkit", "elastica"};
    app.require_subcommand(1, 1);
    Globals g;
    app.add_option("--out", g.out, "Output path (default stdout)");
    app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json", "svg"}));
    app.add_option("--seed", g.seed, "Random seed");
    app.add_option("--jobs", g.jobs, "Worker threads")->check(CLI::PositiveNumber);
    app.add_flag("--quiet", g.quiet, "Do not echo the resolved configuration");

    std::function<int()> action;
    Json cfg;
    auto sub = [&](const char* name, const char* help) {
        CLI::App* s = app.add_subcommand(name, help);
        s->fallthrough();
        return s;
    };

    sub("constants", "Print the figure-eight constants")->callback([&] {
        cfg = {{"subcommand", "constants"}};
        action = [&] { return cmd_constants(g, out); };
    });

    SampleOpts so;
    CLI::App* sample = sub("sample", "Sample a closed-form planar elastica or a curvature profile");
    sample->add_option("--family", so.family, "wavelike|borderline|orbitlike|circular|linear");
    sample->add_option("--m", so.m, "Elliptic parameter, or mstar");
    sample->add_option("--N", so.N, "Number of segments")->check(CLI::Range(2, 100000000));
    sample->add_option("--periods", so.periods, "Curvature periods to sample");
    sample->add_option("--range", so.range, "Explicit parameter range a,b")->delimiter(',')->expected(2);
    sample->add_option("--profile", so.profile, "Profile record file (m, w, A, s0, sign)");
    sample->callback([&] {
        cfg = {{"subcommand", "sample"}, {"family", so.family}, {"m", so.m}, {"N", so.N}, {"periods", so.periods},
               {"profile", so.profile}};
        action = [&] { return cmd_sample(so, g, cfg, out, err); };
    });

    std::string input;
    double eps = 0.0, tol = 0.01;
    CLI::App* energy = sub("energy", "Length, bending energy, Bbar and total curvature of a curve");
    energy->add_option("input", input, "Curve CSV (default stdin)");
    energy->callback([&] {
        cfg = {{"subcommand", "energy"}, {"input", input}};
        action = [&] { return cmd_energy(input, g, in, out); };
    });

    CLI::App* liyau = sub("liyau", "Check Bbar >= varpi* r^2 on a closed curve");
    liyau->add_option("input", input, "Closed curve CSV (default stdin)");
    liyau->add_option("--eps", eps, "Multiplicity clustering radius (default 1e-3 L)");
    liyau->add_option("--tol", tol, "Relative slack allowed for discretization");
    liyau->callback([&] {
        cfg = {{"subcommand", "liyau"}, {"input", input}, {"tol", tol}};
        action = [&] { return cmd_liyau(input, eps, tol, g, cfg, in, out, err); };
    });

    double ctol = 1e-3;
    CLI::App* classify = sub("classify", "Identify a closed planar elastica");
    classify->add_option("input", input, "Closed planar curve CSV (default stdin)");
    classify->add_option("--tol", ctol, "Largest accepted relative curvature misfit");
    classify->callback([&] {
        cfg = {{"subcommand", "classify"}, {"input", input}, {"tol", ctol}};
        action = [&] { return cmd_classify(input, ctol, g, in, out); };
    });

    int r = 2, dim = 2, n_leaf = 1024;
    CLI::App* leafed = sub("leafed", "Build an r-leafed elastica through the origin");
    leafed->add_option("--r", r, "Number of leaves")->required();
    leafed->add_option("--dim", dim, "Ambient dimension (2 or 3)");
    leafed->add_option("--N", n_leaf, "Segments per leaf")->check(CLI::Range(8, 100000000));
    leafed->callback([&] {
        cfg = {{"subcommand", "leafed"}, {"r", r}, {"dim", dim}, {"N", n_leaf}};
        action = [&] { return cmd_leafed(r, dim, n_leaf, g, out); };
    });

    std::string problem, log_path;
    int seeds = 1;
    CLI::App* mini = sub("minimize", "Minimize bending energy for a pinned or clamped problem");
    mini->add_option("problem", problem, "Problem file (P0, P1, [V0, V1,] L0, N, tol, max_iters, seed)")->required();
    mini->add_option("--seeds", seeds, "Number of consecutive seeds to run; the lowest energy wins");
    mini->add_option("--log", log_path, "JSON-lines convergence log path (default stderr)");
    mini->callback([&] {
        cfg = {{"subcommand", "minimize"}, {"problem_file", problem}, {"seeds", seeds}, {"jobs", g.jobs},
               {"log", log_path}};
        action = [&] { return cmd_minimize(problem, seeds, log_path, g, cfg, out, err); };
    });

    std::string ic;
    CLI::App* integ = sub("integrate", "Integrate the elastica equation from an initial-condition file");
    integ->add_option("ic", ic, "IC file: gamma, d1, d2, d3, lambda or m, w, A[, s0]; s_end, h");
    integ->callback([&] {
        cfg = {{"subcommand", "integrate"}, {"ic", ic}};
        action = [&] { return cmd_integrate(ic, g, cfg, in, out, err); };
    });

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInputError;
    }
    if (!action) return kInputError;

    cfg["format"] = g.format.empty() ? "default" : g.format;
    cfg["out"] = g.out;
    if (g.seed) cfg["seed"] = *g.seed;
    try {
        // Subcommands that resolve more settings from their inputs echo the configuration themselves.
        const std::string name = cfg["subcommand"].get<std::string>();
        if (name == "constants" || name == "energy" || name == "classify" || name == "leafed") {
            if (!g.quiet) err << cfg.dump() << "\n";
        }
        return action();
    } catch (const Infeasible& e) {
        err << e.what() << "\n";
        return kInfeasible;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kInternalError;
    }
}

} // namespace elastica::cli
