#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "elastica/curves.hpp"
#include "elastica/io.hpp"
#include "oracles.hpp"

using namespace elastica;
using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run(std::vector<std::string> args, const std::string& stdin_text = "") {
    std::istringstream in(stdin_text);
    std::ostringstream out, err;
    const int code = cli::run(args, in, out, err);
    return {code, out.str(), err.str()};
}

DiscreteCurve parse(const std::string& csv) {
    std::istringstream ss(csv);
    return cli::read_csv(ss);
}

class TempDir {
public:
    TempDir() {
        path_ = std::filesystem::temp_directory_path() /
                ("elastica_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
                 ::testing::UnitTest::GetInstance()->current_test_info()->name());
        std::filesystem::create_directories(path_);
    }
    ~TempDir() { std::filesystem::remove_all(path_); }
    std::string file(const std::string& name, const std::string& content = "") const {
        const std::string p = (path_ / name).string();
        if (!content.empty()) std::ofstream(p) << content;
        return p;
    }

private:
    std::filesystem::path path_;
};

} // namespace

TEST(CliTest, Constants) {
    const Outcome r = run({"constants", "--quiet"});
    ASSERT_EQ(r.code, 0);
    EXPECT_TRUE(r.err.empty());
    const json j = json::parse(r.out);
    EXPECT_EQ(std::floor(j["varpi_star"].get<double>() * 1000) / 1000, 28.109);
    EXPECT_NEAR(j["four_pi_sq"].get<double>(), 4 * kPi * kPi, 1e-13);
    EXPECT_NEAR(j["m_star"].get<double>(), oracle::kMStar, 1e-14);
    EXPECT_NEAR(2 * j["E_mstar"].get<double>() - j["K_mstar"].get<double>(), 0.0, 1e-13);
    EXPECT_NEAR(j["psi"].get<double>(), oracle::kPsi, 1e-14);
    // Fifteen significant digits.
    EXPECT_NE(r.out.find("\"varpi_star\":28.1099024353304"), std::string::npos);
}

TEST(CliTest, EchoesResolvedConfig) {
    const Outcome r = run({"leafed", "--r", "2", "--N", "16", "--seed", "7"});
    ASSERT_EQ(r.code, 0);
    const json cfg = json::parse(r.err.substr(0, r.err.find('\n')));
    EXPECT_EQ(cfg["subcommand"], "leafed");
    EXPECT_EQ(cfg["r"], 2);
    EXPECT_EQ(cfg["dim"], 2);
    EXPECT_EQ(cfg["N"], 16);
    EXPECT_EQ(cfg["seed"], 7);
}

TEST(CliTest, SampleFigureEightCloses) {
    const Outcome exact = run({"sample", "--family", "wavelike", "--m", "mstar", "--N", "4096", "--quiet"});
    ASSERT_EQ(exact.code, 0);
    const DiscreteCurve c = parse(exact.out);
    EXPECT_FALSE(c.closed());
    EXPECT_EQ(c.size(), 4097);
    EXPECT_LT((c.vertex(0) - c.vertex(4096)).norm(), 1e-12);

    // With m rounded to six digits the gap is 4 |2E(m) - K(m)|, not zero.
    const double m = 0.826115;
    const Outcome rounded = run({"sample", "--family", "wavelike", "--m", "0.826115", "--N", "4096", "--quiet"});
    const DiscreteCurve cr = parse(rounded.out);
    const double gap = (cr.vertex(0) - cr.vertex(4096)).norm();
    EXPECT_NEAR(gap, 4 * std::abs(2 * oracle::E_quad(m) - oracle::K_quad(m)), 1e-10);
    const double extent = (cr.vertices().rowwise().maxCoeff() - cr.vertices().rowwise().minCoeff()).maxCoeff();
    EXPECT_LT(gap / extent, 2e-6);
}

TEST(CliTest, SampleBorderlineHasOneLoop) {
    const Outcome r = run({"sample", "--family", "borderline", "--N", "2000", "--quiet"});
    ASSERT_EQ(r.code, 0);
    const DiscreteCurve c = parse(r.out);
    const double turning = discrete::signed_turning_angles(c).sum();
    EXPECT_NEAR(turning, 4 * std::asin(std::tanh(5.0)), 1e-3);
    EXPECT_EQ(discrete::detect_multiplicity(c, discrete::default_multiplicity_eps(c)).r, 2);
}

TEST(CliTest, SampleCircleAndFormats) {
    const Outcome csv = run({"sample", "--family", "circular", "--N", "360", "--quiet"});
    ASSERT_EQ(csv.code, 0);
    EXPECT_EQ(csv.out.substr(0, csv.out.find('\n', csv.out.find('\n') + 1)), "# closed=0\ns,x,y,k");
    const Outcome cls = run({"classify", "--quiet"}, csv.out);
    ASSERT_EQ(cls.code, 0);
    const json j = json::parse(cls.out);
    EXPECT_EQ(j["kind"], "circle");
    EXPECT_EQ(j["fold"], 1);

    const Outcome js = run({"sample", "--family", "circular", "--N", "8", "--quiet", "--format", "json"});
    const json jj = json::parse(js.out);
    EXPECT_EQ(jj["rows"].size(), 9u);
    EXPECT_EQ(jj["columns"], json::parse(R"(["s","x","y","k"])"));

    const Outcome svg = run({"sample", "--family", "circular", "--N", "8", "--quiet", "--format", "svg"});
    EXPECT_EQ(svg.out.rfind("<svg", 0), 0u);
    EXPECT_NE(svg.out.find("<polyline"), std::string::npos);
    EXPECT_NE(svg.out.find("1,0.5"), std::string::npos); // six digits, unit box
}

TEST(CliTest, SampleProfile) {
    TempDir dir;
    const std::string rec = dir.file("p.txt", "m=0.2\nw=0.6\nA=1.5\ns0=0.4\nsign=1\n");
    const Outcome r = run({"sample", "--profile", rec, "--N", "400", "--quiet"});
    ASSERT_EQ(r.code, 0) << r.err;
    const DiscreteCurve c = parse(r.out);
    EXPECT_EQ(c.dim(), 3);
    EXPECT_EQ(c.size(), 401);
}

TEST(CliTest, CsvRoundTripIsExact) {
    const DiscreteCurve leaf = curves::build_leaf(64);
    std::ostringstream os;
    cli::write_csv(os, leaf, discrete::vertex_arclength(leaf));
    EXPECT_EQ(parse(os.str()).vertices(), leaf.vertices());
    EXPECT_THROW(parse("# closed=1\na,b,c\n1,2,3\n"), std::invalid_argument);
    EXPECT_THROW(parse("s,x,y\n0,1,2\n1,2\n"), std::invalid_argument);
    EXPECT_THROW(parse("s,x,y\n0,1,x\n"), std::invalid_argument);
    EXPECT_THROW(parse("# closed=2\ns,x,y\n"), std::invalid_argument);
    EXPECT_THROW(parse(""), std::invalid_argument);
}

TEST(CliTest, PropellerPipeline) {
    const Outcome leafed = run({"leafed", "--r", "3", "--dim", "3", "--N", "4096", "--quiet"});
    ASSERT_EQ(leafed.code, 0);
    EXPECT_EQ(leafed.out.rfind("# closed=1\ns,x,y,z,k\n", 0), 0u);
    const Outcome ly = run({"liyau", "--quiet"}, leafed.out);
    EXPECT_EQ(ly.code, 0);
    const json j = json::parse(ly.out);
    EXPECT_EQ(j["r"], 3);
    EXPECT_TRUE(j["satisfied"].get<bool>());
    EXPECT_NEAR(j["bound"].get<double>(), 9 * oracle::kVarpiStar, 1e-9);
    EXPECT_LT(std::abs(j["slack"].get<double>()) / j["bound"].get<double>(), 0.01);
}

TEST(CliTest, LiyauExitCodes) {
    // A coarsely sampled figure-eight underestimates its energy.
    const Outcome coarse = run({"leafed", "--r", "2", "--N", "8", "--quiet"});
    const Outcome fail = run({"liyau", "--quiet"}, coarse.out);
    EXPECT_EQ(fail.code, 4);
    EXPECT_FALSE(json::parse(fail.out)["satisfied"].get<bool>());

    const Outcome circle = run({"sample", "--family", "circular", "--N", "512", "--quiet"});
    const Outcome ok = run({"liyau", "--quiet"}, circle.out);
    EXPECT_EQ(ok.code, 0);
    EXPECT_EQ(json::parse(ok.out)["bound_kind"], "fenchel");

    const Outcome open = run({"sample", "--family", "wavelike", "--m", "0.5", "--quiet"});
    EXPECT_EQ(run({"liyau", "--quiet"}, open.out).code, 2);
    EXPECT_EQ(run({"liyau", "--quiet"}, "garbage").code, 2);
    EXPECT_EQ(run({"liyau", "/nonexistent/file.csv", "--quiet"}).code, 2);
}

TEST(CliTest, PlanarOddLeafedIsInfeasible) {
    const Outcome r = run({"leafed", "--r", "3", "--dim", "2", "--quiet"});
    EXPECT_EQ(r.code, 3);
    EXPECT_EQ(r.err, "infeasible: planar odd r\n");
    EXPECT_TRUE(r.out.empty());
}

TEST(CliTest, ClassifyTwoFoldCircleAndFigureEight) {
    const Outcome circle = run({"sample", "--family", "circular", "--periods", "2", "--N", "720", "--quiet"});
    const json j = json::parse(run({"classify", "--quiet"}, circle.out).out);
    EXPECT_EQ(j["kind"], "circle");
    EXPECT_EQ(j["fold"], 2);
    const Outcome eight = run({"leafed", "--r", "2", "--N", "512", "--quiet"});
    const json k = json::parse(run({"classify", "--quiet"}, eight.out).out);
    EXPECT_EQ(k["kind"], "figure_eight");
    EXPECT_EQ(k["fold"], 1);
}

TEST(CliTest, Energy) {
    const Outcome sampled = run({"sample", "--family", "circular", "--N", "4096", "--quiet"});
    // Read as an open arc: the turn at the seam vertex is not counted.
    const Outcome open = run({"energy", "--quiet"}, sampled.out);
    ASSERT_EQ(open.code, 0);
    EXPECT_NEAR(json::parse(open.out)["Bbar"].get<double>(), 4 * kPi * kPi * 4095 / 4096, 1e-3);

    const int n = 4096;
    Eigen::MatrixXd X(2, n);
    for (int i = 0; i < n; ++i) X.col(i) << std::cos(2 * kPi * i / n), std::sin(2 * kPi * i / n);
    const DiscreteCurve ring(X, true);
    std::ostringstream os;
    cli::write_csv(os, ring, discrete::vertex_arclength(ring));
    const std::string circle_csv = os.str();
    const Outcome r = run({"energy", "--quiet"}, circle_csv);
    ASSERT_EQ(r.code, 0);
    EXPECT_NEAR(json::parse(r.out)["Bbar"].get<double>(), 4 * kPi * kPi, 1e-4);
    const Outcome c = run({"energy", "--quiet", "--format", "csv"}, circle_csv);
    EXPECT_EQ(c.out.rfind("length,bending,Bbar,total_curvature\n", 0), 0u);
    EXPECT_EQ(run({"energy", "--quiet", "--format", "svg"}, circle_csv).code, 2);
}

TEST(CliTest, MinimizeWritesCurveAndLog) {
    TempDir dir;
    const std::string problem = dir.file("leaf.txt", "# leaf problem\nP0 = 0, 0\nP1 = 0, 0\nL0 = 1\nN = 100\nseed = 3\n");
    const std::string out = dir.file("leaf.csv"), log = dir.file("leaf.jsonl");
    const Outcome r = run({"minimize", problem, "--out", out, "--log", log, "--seeds", "2", "--jobs", "2"});
    ASSERT_EQ(r.code, 0) << r.err;
    const std::string csv = io::read_file(out);
    const DiscreteCurve c = parse(csv);
    EXPECT_EQ(c.size(), 101);
    EXPECT_LT(std::abs(discrete::normalized_energy(c).normalized - oracle::kVarpiStar) / oracle::kVarpiStar, 1e-3);

    std::istringstream lines(io::read_file(log));
    int count = 0;
    for (std::string line; std::getline(lines, line); ++count) {
        const json j = json::parse(line);
        for (const char* key : {"iteration", "B", "grad_norm", "max_constraint_residual", "seed"}) {
            EXPECT_TRUE(j.contains(key));
        }
        EXPECT_TRUE(j["seed"] == 3 || j["seed"] == 4);
    }
    EXPECT_GT(count, 2);

    // Deterministic: same config, byte-identical output; --jobs does not change the result.
    const std::string out2 = dir.file("leaf2.csv");
    ASSERT_EQ(run({"minimize", problem, "--out", out2, "--seeds", "2", "--quiet"}).code, 0);
    EXPECT_EQ(io::read_file(out2), csv);
}

TEST(CliTest, MinimizeClampedAndErrors) {
    TempDir dir;
    const std::string clamped =
        dir.file("c.txt", "P0=0,0\nP1=0.5,0\nV0=1,0\nV1=1,0\nL0=1\nN=60\n");
    const Outcome r = run({"minimize", clamped, "--quiet", "--format", "json"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(json::parse(r.out)["converged"].get<bool>());

    EXPECT_EQ(run({"minimize", dir.file("a.txt", "P0=0,0\nP1=2,0\nL0=1\n"), "--quiet"}).code, 2);
    EXPECT_EQ(run({"minimize", dir.file("b.txt", "P0=0,0\nP1=0.5,0\nV0=1,0\nL0=1\n"), "--quiet"}).code, 2);
    EXPECT_EQ(run({"minimize", dir.file("d.txt", "P0=0,0\nP1=0.5,0\nL0=1\nfoo=1\n"), "--quiet"}).code, 2);
    EXPECT_EQ(run({"minimize", dir.file("e.txt", "P0=0,0\nP1=0.5,0\n"), "--quiet"}).code, 2);
}

TEST(CliTest, Integrate) {
    const std::string ic = "# planar circle\ngamma=0,0\nd1=1,0\nd2=0,1\nd3=-1,0\nlambda=1\ns_end=6.283185307179586\nh=0.01\n";
    const Outcome r = run({"integrate", "--quiet"}, ic);
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out.rfind("# closed=0\ns,x,y,z,k,det\n", 0), 0u);
    const DiscreteCurve c = parse(r.out);
    EXPECT_EQ(c.dim(), 3);
    EXPECT_LT((c.vertex(0) - c.vertex(c.size() - 1)).norm(), 1e-7);

    const Outcome p = run({"integrate", "--quiet", "--format", "json"}, "m=0.2\nw=0.6\nA=1.5\ns0=0.4\ns_end=5\nh=0.01\n");
    ASSERT_EQ(p.code, 0) << p.err;
    const json j = json::parse(p.out);
    const double c0 = j["rows"][0][5].get<double>();
    for (const auto& row : j["rows"]) EXPECT_NEAR(row[5].get<double>(), c0, 1e-6);

    EXPECT_EQ(run({"integrate", "--quiet"}, "gamma=0,0\nd1=1,0\nd2=0,1\nd3=-1,0\nlambda=1\ns_end=60\nh=2\n").code, 2);
    EXPECT_EQ(run({"integrate", "--quiet"}, "gamma=0,0\nd1=2,0\nd2=0,1\nd3=-1,0\nlambda=1\ns_end=6\n").code, 2);
}

TEST(CliTest, UsageErrors) {
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"bogus"}).code, 2);
    EXPECT_EQ(run({"sample", "--family", "wavelike", "--m", "1.5", "--quiet"}).code, 2);
    EXPECT_EQ(run({"sample", "--family", "spiral", "--quiet"}).code, 2);
    EXPECT_EQ(run({"sample", "--quiet"}).code, 2);
    EXPECT_EQ(run({"constants", "--format", "xml"}).code, 2);
    EXPECT_EQ(run({"leafed", "--quiet"}).code, 2);
    EXPECT_EQ(run({"leafed", "--r", "1", "--quiet"}).code, 2);
    EXPECT_EQ(run({"constants", "--jobs", "0"}).code, 2);
    EXPECT_EQ(run({"--help"}).code, 0);
}
