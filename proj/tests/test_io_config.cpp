#include "helpers.hpp"

#include "levyshe/config.hpp"
#include "levyshe/errors.hpp"
#include "levyshe/io.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>

using namespace levyshe;
using nlohmann::json;

namespace {

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "levyshe_tests";
    std::filesystem::create_directories(dir);
    return dir / name;
}

} // namespace

TEST_SUITE("io_config") {

TEST_CASE("doubles round-trip through text") {
    for (double v : {0.1, 1.0 / 3.0, 1e-300, 6.02214076e23, -2.5}) CHECK(std::stod(io::format_double(v)) == v);
    CHECK(io::format_double(kInfinity) == "inf");
}

TEST_CASE("measure descriptors round-trip") {
    const std::vector<json> docs{
        {{"kind", "alpha_stable"}, {"alpha", 1.5}},
        {{"kind", "power_tail"}, {"alpha", 1.2}, {"z_min", 0.1}, {"z_max", "inf"}},
        {{"kind", "atom"}, {"z0", 1.0}, {"mass", 2.0}},
        {{"kind", "mixture"}, {"atoms", {{{"z0", 0.5}, {"mass", 1.0}}, {{"z0", 2.0}, {"mass", 0.5}}}}},
        {{"kind", "exponential_tail"}, {"rate", 1.0}, {"scale", 0.5}},
    };
    for (const auto& d : docs) CHECK(io::measure_to_json(io::measure_from_json(d)) == d);
    CHECK_THROWS_AS((void)io::measure_from_json({{"kind", "atom"}, {"z0", 1.0}, {"mass", 1.0}, {"extra", 1}}), ConfigError);
    CHECK_THROWS_AS((void)io::measure_from_json({{"kind", "gamma"}}), ConfigError);
    CHECK_THROWS_AS((void)io::measure_from_json({{"kind", "alpha_stable"}, {"alpha", 3.0}}), ConfigError);
}

TEST_CASE("atom files round-trip with their sidecar") {
    const auto m = LevyMeasure::alpha_stable(1.5);
    const auto env = sample_environment(m, Window::bridge({0.0, 0.0}, {1.0, -1.0}, 2.0, 4.0), 0.3, 17);
    const auto path = scratch("atoms.csv");
    io::write_atoms(path, env, io::measure_to_json(m));
    const auto f = io::read_atoms(path);
    CHECK(f.env.t == env.t);
    CHECK(f.env.x == env.x);
    CHECK(f.env.z == env.z);
    CHECK(f.env.truncation_a == 0.3);
    CHECK(f.env.seed == 17);
    CHECK(f.env.window.shape == Window::Shape::bridge);
    CHECK(f.env.window.end == env.window.end);
    CHECK(f.metadata["measure"]["kind"] == "alpha_stable");
}

TEST_CASE("atom files without a sidecar and malformed files") {
    const auto path = scratch("bare.csv");
    {
        std::ofstream out(path);
        out << "t,x1,x2,z\n0.1,0.5,0.5,2\n0.3,-1,0,0.7\n";
    }
    std::filesystem::remove(io::sidecar_path(path));
    const auto f = io::read_atoms(path);
    CHECK(f.env.dim() == 2);
    CHECK(f.env.size() == 2);
    CHECK(f.env.truncation_a == 0.7);
    CHECK(f.metadata.is_null());

    const auto bad = scratch("bad.csv");
    {
        std::ofstream out(bad);
        out << "t,x1,z\n0.5,0,1\n0.2,0,1\n";
    }
    std::filesystem::remove(io::sidecar_path(bad));
    CHECK_THROWS_AS((void)io::read_atoms(bad), ConfigError);
    {
        std::ofstream out(bad);
        out << "time,x,z\n";
    }
    CHECK_THROWS_AS((void)io::read_atoms(bad), ConfigError);
}

TEST_CASE("config defaults, overrides and validation") {
    const auto cfg = RunConfig::from_json({{"measure", {{"kind", "atom"}, {"z0", 1.0}, {"mass", 1.0}}},
                                           {"dimension", 2},
                                           {"moments", {{"p", 0.5}}}});
    CHECK(cfg.dimension() == 2);
    CHECK(cfg.beta() == 1.0);
    CHECK(cfg.replicas() == 1000);
    const auto mc = cfg.moment_config();
    CHECK(mc.p == 0.5);
    CHECK(mc.rho_scaled);
    CHECK(cfg.echo()["moments"]["point_to_point"] == false);
    CHECK(cfg.lyapunov_t_grid() == std::vector<double>{2.0, 4.0, 8.0});
    CHECK(cfg.degeneracy_config().window == WindowPolicy::bridge);

    auto c2 = cfg;
    c2.override_seed(77);
    CHECK(c2.seed() == 77);
    CHECK(c2.echo()["seed"] == 77);

    CHECK_THROWS_AS((void)RunConfig::from_json({{"dimension", 1}}), ConfigError);
    CHECK_THROWS_AS((void)RunConfig::from_json({{"measure", {{"kind", "atom"}, {"z0", 1.0}, {"mass", 1.0}}}, {"typo", 1}}),
                    ConfigError);
    CHECK_THROWS_AS(
        (void)RunConfig::from_json({{"measure", {{"kind", "atom"}, {"z0", 1.0}, {"mass", 1.0}}}, {"beta", "high"}}),
        ConfigError);
    CHECK_THROWS_AS((void)RunConfig::from_json(
                        {{"measure", {{"kind", "atom"}, {"z0", 1.0}, {"mass", 1.0}}}, {"box", {{"policy", "round"}}}}),
                    ConfigError);
    CHECK_THROWS_AS((void)RunConfig::load(scratch("missing.json")), ConfigError);
}

TEST_CASE("moment csv") {
    MCEstimate e;
    e.mean = 1.5;
    e.t = 2.0;
    e.n = 10;
    e.seed = 3;
    const auto path = scratch("m.csv");
    io::write_moments_csv(path, {e});
    std::ifstream in(path);
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    CHECK(header == "t,p,beta,n,mean,stderr,median,q05,q95,seed");
    CHECK(row.rfind("2,1,0,10,1.5,", 0) == 0);
}

}
