// levyshe: command-line front end. Every subcommand is a pure function of its
// config, input files and seed; outputs do not depend on --threads.

#include "levyshe/config.hpp"
#include "levyshe/diagnostics.hpp"
#include "levyshe/errors.hpp"
#include "levyshe/io.hpp"
#include "levyshe/moments.hpp"
#include "levyshe/partition.hpp"
#include "levyshe/polymer.hpp"
#include "levyshe/replicas.hpp"
#include "levyshe/sizebias.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <omp.h>

#include <iostream>
#include <optional>
#include <sstream>

using namespace levyshe;
using nlohmann::json;

namespace {

std::vector<double> parse_list(const std::string& text, const std::string& what) {
    std::vector<double> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            std::size_t pos = 0;
            out.push_back(std::stod(item, &pos));
            if (item.find_first_not_of(' ', pos) != std::string::npos) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError("cannot parse '" + item + "' in " + what);
        }
    }
    if (out.empty()) throw ConfigError(what + " is empty");
    return out;
}

void print_json(const json& j) { std::cout << j.dump(2) << '\n'; }

std::filesystem::path companion_csv(const std::filesystem::path& out) {
    auto p = out;
    p.replace_extension(".csv");
    return p;
}

struct Globals {
    int threads = 0;
    std::optional<std::uint64_t> seed;
};

RunConfig load_config(const std::string& path, const Globals& g) {
    RunConfig cfg = RunConfig::load(path);
    if (g.seed) cfg.override_seed(*g.seed);
    return cfg;
}

Disorder disorder_for(const io::AtomFile& f, double beta) {
    Disorder d;
    d.beta = beta;
    if (f.metadata.contains("measure")) {
        const LevyMeasure m = io::measure_from_json(f.metadata.at("measure"));
        d = Disorder::from_measure(m, beta, f.env.truncation_a);
    }
    return d;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stochastic heat equation with Levy noise: partition functions, moments, polymers, diagnostics"};
    app.require_subcommand(1);
    Globals g;
    std::uint64_t seed_value = 0;
    app.add_option("--threads", g.threads, "OpenMP threads (0 = runtime default)")->check(CLI::NonNegativeNumber);
    auto* seed_opt = app.add_option("--seed", seed_value, "Override the master seed");

    // sample-noise
    auto* sample = app.add_subcommand("sample-noise", "Sample a truncated environment to an atom CSV");
    std::string config_path, out_path, atoms_path;
    sample->add_option("--config", config_path)->required()->check(CLI::ExistingFile);
    sample->add_option("--out", out_path)->required();

    // partition
    auto* part = app.add_subcommand("partition", "Evaluate a partition function on an atom file");
    double beta = 1.0, t = 1.0;
    std::string x_text;
    bool free = false, norm = false;
    part->add_option("--atoms", atoms_path)->required()->check(CLI::ExistingFile);
    part->add_option("--beta", beta)->required();
    part->add_option("--t", t)->required();
    auto* x_opt = part->add_option("--x", x_text, "End point x1,...,xd");
    auto* fe_opt = part->add_flag("--free-end", free);
    x_opt->excludes(fe_opt);
    part->add_flag("--normalized", norm, "Multiply by e^{-beta mu t} (needs the measure in the sidecar)");

    // moments
    auto* mom = app.add_subcommand("moments", "Monte Carlo moment of the normalized field");
    double p = 1.0;
    std::size_t replicas = 0;
    std::optional<double> t_override;
    mom->add_option("--config", config_path)->required()->check(CLI::ExistingFile);
    mom->add_option("--p", p)->required();
    mom->add_option("--t", t_override);
    mom->add_option("--replicas", replicas);
    mom->add_option("--out", out_path)->required();

    // lyapunov
    auto* lyap = app.add_subcommand("lyapunov", "Weighted slope of log moments against t");
    std::string t_grid_text;
    lyap->add_option("--config", config_path)->required()->check(CLI::ExistingFile);
    lyap->add_option("--p", p)->required();
    lyap->add_option("--t-grid", t_grid_text);
    lyap->add_option("--replicas", replicas);
    lyap->add_option("--out", out_path)->required();

    // sizebias-check
    auto* sb = app.add_subcommand("sizebias-check", "Both sides of the size-bias identity");
    std::string g_name;
    sb->add_option("--config", config_path)->required()->check(CLI::ExistingFile);
    sb->add_option("--g", g_name, "one | one_body_exp | one_body_count | window_empty");
    sb->add_option("--out", out_path)->required();

    // polymer
    auto* poly = app.add_subcommand("polymer", "Sample polymer paths on a fixed environment");
    std::size_t grid_points = 101, paths = 1;
    poly->add_option("--atoms", atoms_path)->required()->check(CLI::ExistingFile);
    poly->add_option("--beta", beta)->required();
    poly->add_option("--t", t_override, "Horizon (default: the atom window horizon)");
    poly->add_option("--grid-points", grid_points)->check(CLI::PositiveNumber);
    poly->add_option("--paths", paths)->check(CLI::PositiveNumber);
    poly->add_option("--out", out_path)->required();

    // field
    auto* fld = app.add_subcommand("field", "Point-to-point field on a cell-centred grid");
    std::string grid_spec;
    fld->add_option("--atoms", atoms_path)->required()->check(CLI::ExistingFile);
    fld->add_option("--beta", beta)->required();
    fld->add_option("--t", t)->required();
    fld->add_option("--grid-spec", grid_spec, "lo:hi:cells (every axis)")->required();
    fld->add_option("--out", out_path)->required();

    // report
    auto* rep = app.add_subcommand("report", "Run a diagnostic experiment");
    std::string experiment;
    rep->add_option("--experiment", experiment)
        ->required()
        ->check(CLI::IsMember({"intermittency", "degeneracy", "mass-concentration", "truncation", "box"}));
    rep->add_option("--config", config_path)->required()->check(CLI::ExistingFile);
    rep->add_option("--out", out_path)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << json{{"error", "usage_error"}, {"message", e.what()}}.dump() << '\n';
        return 2;
    }
    if (*seed_opt) g.seed = seed_value;
    if (g.threads > 0) omp_set_num_threads(g.threads);

    try {
        if (*sample) {
            const RunConfig cfg = load_config(config_path, g);
            MomentConfig mc = cfg.moment_config();
            const Environment env = sample_environment(cfg.measure(), moment_window(mc), mc.a, cfg.seed(), mc.atom_cap);
            io::write_atoms(out_path, env, io::measure_to_json(cfg.measure()));
            print_json({{"atoms", env.size()}, {"out", out_path}, {"config", cfg.echo()}});
        } else if (*part) {
            const auto f = io::read_atoms(atoms_path);
            const Disorder dis = disorder_for(f, beta);
            const auto w = forward_weights(f.env, beta);
            PartitionValue v;
            if (free || x_text.empty()) {
                v = free_end(w, dis, t);
            } else {
                v = point_to_point(w, dis, t, parse_list(x_text, "--x"));
            }
            if (norm) v = normalized(std::move(v), dis.mu, beta);
            print_json({{"kind", v.kind == PartitionValue::Kind::free_end ? "free_end" : "point_to_point"},
                        {"t", t},
                        {"beta", beta},
                        {"log_Z", v.log_value},
                        {"Z", v.value()},
                        {"log_compensator", v.log_compensator},
                        {"normalized", norm}});
        } else if (*mom) {
            const RunConfig cfg = load_config(config_path, g);
            MomentConfig mc = cfg.moment_config();
            mc.p = p;
            if (t_override) mc.t = *t_override;
            if (replicas > 0) mc.n = replicas;
            const MCEstimate e = mc_moment(cfg.measure(), mc);
            io::write_moments_csv(out_path, {e});
            print_json({{"mean", e.mean}, {"stderr", e.std_error}, {"n", e.n}, {"divergent", e.divergent},
                        {"out", out_path}, {"config", cfg.echo()}});
        } else if (*lyap) {
            const RunConfig cfg = load_config(config_path, g);
            MomentConfig mc = cfg.moment_config();
            mc.p = p;
            const auto grid = t_grid_text.empty() ? cfg.lyapunov_t_grid() : parse_list(t_grid_text, "--t-grid");
            const auto r = lyapunov_estimate(cfg.measure(), mc, grid, replicas > 0 ? replicas : mc.n);
            io::write_moments_csv(out_path, r.per_t);
            print_json({{"gamma_hat", r.gamma_hat}, {"slope_stderr", r.slope_stderr}, {"fitted_points", r.fitted_points},
                        {"used", r.used}, {"out", out_path}, {"config", cfg.echo()}});
        } else if (*sb) {
            const RunConfig cfg = load_config(config_path, g);
            SizeBiasConfig sc = cfg.sizebias_config();
            if (!g_name.empty()) sc.g = functional_from_string(g_name);
            const auto r = sizebias_identity_check(cfg.measure(), sc);
            const json j = {{"lhs", r.lhs},         {"lhs_stderr", r.lhs_stderr}, {"rhs", r.rhs},
                            {"rhs_stderr", r.rhs_stderr}, {"z_score", r.z_score},   {"n", r.n},
                            {"seed", r.seed},       {"g", to_string(sc.g)},       {"config", cfg.echo()}};
            io::write_text(out_path, j.dump(2) + "\n");
            print_json(j);
        } else if (*poly) {
            const auto f = io::read_atoms(atoms_path);
            const double horizon = t_override ? *t_override : f.env.window.horizon;
            if (std::isinf(horizon)) throw ConfigError("polymer needs --t when the atom file has no sidecar");
            const auto w = forward_weights(f.env, beta);
            std::vector<double> grid(grid_points);
            for (std::size_t k = 0; k < grid_points; ++k)
                grid[k] = grid_points == 1 ? horizon : horizon * static_cast<double>(k) / static_cast<double>(grid_points - 1);
            const std::uint64_t master = g.seed.value_or(1);
            const auto sampled = map_replicas(paths, master, [&](std::size_t, std::uint64_t s) {
                Rng rng = make_rng(s);
                return sample_path(w, horizon, grid, rng);
            });
            std::ostringstream out;
            out << "replica,grid_t";
            for (int k = 1; k <= f.env.dim(); ++k) out << ",x" << k;
            out << '\n';
            json pins = json::array();
            for (std::size_t r = 0; r < sampled.size(); ++r) {
                for (std::size_t k = 0; k < grid.size(); ++k) {
                    out << r << ',' << io::format_double(grid[k]);
                    for (double c : sampled[r].at(k)) out << ',' << io::format_double(c);
                    out << '\n';
                }
                pins.push_back({{"replica", r}, {"atoms", sampled[r].pinned.atoms}, {"log_prob", sampled[r].pinned.log_prob}});
            }
            io::write_text(out_path, out.str());
            io::write_text(out_path + ".json", json{{"seed", master}, {"beta", beta}, {"t", horizon}, {"pins", pins}}.dump(2) + "\n");
            print_json({{"paths", paths}, {"out", out_path}});
        } else if (*fld) {
            const auto f = io::read_atoms(atoms_path);
            const auto parts = parse_list([&] {
                std::string s = grid_spec;
                std::replace(s.begin(), s.end(), ':', ',');
                return s;
            }(), "--grid-spec");
            if (parts.size() != 3 || !(parts[1] > parts[0]) || parts[2] < 1)
                throw ConfigError("--grid-spec must be lo:hi:cells");
            Grid grid;
            const auto d = static_cast<std::size_t>(f.env.dim());
            grid.lo.assign(d, parts[0]);
            grid.hi.assign(d, parts[1]);
            grid.cells.assign(d, static_cast<std::size_t>(parts[2]));
            const auto pts = grid.points();
            const Disorder dis = disorder_for(f, beta);
            const auto values = field(forward_weights(f.env, beta), dis, t, pts);
            std::ostringstream out;
            for (std::size_t k = 1; k <= d; ++k) out << (k > 1 ? "," : "") << 'x' << k;
            out << ",log_Z,Z\n";
            for (std::size_t i = 0; i < values.size(); ++i) {
                for (std::size_t k = 0; k < d; ++k) out << io::format_double(pts[i * d + k]) << ',';
                out << io::format_double(values[i].log_value) << ',' << io::format_double(values[i].value()) << '\n';
            }
            io::write_text(out_path, out.str());
            print_json({{"points", values.size()}, {"out", out_path}});
        } else if (*rep) {
            const RunConfig cfg = load_config(config_path, g);
            ExperimentReport r;
            if (experiment == "intermittency") r = intermittency_report(cfg.measure(), cfg.intermittency_config());
            else if (experiment == "degeneracy") r = degeneracy_scan(cfg.measure(), cfg.degeneracy_config());
            else if (experiment == "mass-concentration")
                r = mass_concentration_report(cfg.measure(), cfg.mass_concentration_config());
            else if (experiment == "truncation") r = truncation_convergence(cfg.measure(), cfg.truncation_config());
            else r = box_convergence(cfg.measure(), cfg.box_config());
            r.json["config_echo"] = cfg.echo();
            io::write_text(out_path, r.json.dump(2) + "\n");
            const auto csv = companion_csv(out_path);
            io::write_text(csv, r.csv);
            print_json({{"verdict", r.json["verdict"]}, {"out", out_path}, {"csv", csv.string()}});
        }
    } catch (const Error& e) {
        std::cerr << json{{"error", e.code()}, {"message", e.what()}}.dump() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << json{{"error", "internal_error"}, {"message", e.what()}}.dump() << '\n';
        return 1;
    }
    return 0;
}
