#include "levyshe/io.hpp"

#include "levyshe/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace levyshe::io {

using nlohmann::json;

namespace {

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& what) {
    if (!j.is_object()) throw ConfigError(what + " must be a JSON object");
    for (const auto& [key, _] : j.items())
        if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + what);
}

double number(const json& j, const std::string& key, const std::string& what) {
    if (!j.contains(key)) throw ConfigError(what + " needs '" + key + "'");
    const auto& v = j.at(key);
    if (v.is_number()) return v.get<double>();
    if (v.is_string() && (v.get<std::string>() == "inf" || v.get<std::string>() == "infinity")) return kInfinity;
    throw ConfigError("'" + key + "' in " + what + " must be a number");
}

json number_json(double v) { return std::isinf(v) ? json("inf") : json(v); }

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(line);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

double parse_double(const std::string& s, const std::string& where) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw ConfigError("cannot parse number '" + s + "' in " + where);
    }
    if (pos != s.size() && s.find_first_not_of(" \t\r", pos) != std::string::npos)
        throw ConfigError("trailing characters in number '" + s + "' in " + where);
    return v;
}

} // namespace

std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

LevyMeasure measure_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
        throw ConfigError("measure descriptor needs a string 'kind'");
    const auto kind = j.at("kind").get<std::string>();
    const bool degenerate = j.value("degenerate_experiment", false);
    try {
        if (kind == "alpha_stable") {
            check_keys(j, {"kind", "alpha", "degenerate_experiment"}, "alpha_stable measure");
            return LevyMeasure(AlphaStable{number(j, "alpha", "alpha_stable")}, degenerate);
        }
        if (kind == "power_tail") {
            check_keys(j, {"kind", "alpha", "z_min", "z_max", "degenerate_experiment"}, "power_tail measure");
            return LevyMeasure(PowerTail{number(j, "alpha", "power_tail"), number(j, "z_min", "power_tail"),
                                         number(j, "z_max", "power_tail")},
                               degenerate);
        }
        if (kind == "atom") {
            check_keys(j, {"kind", "z0", "mass", "degenerate_experiment"}, "atom measure");
            return LevyMeasure(AtomJump{number(j, "z0", "atom"), number(j, "mass", "atom")}, degenerate);
        }
        if (kind == "mixture") {
            check_keys(j, {"kind", "atoms", "degenerate_experiment"}, "mixture measure");
            if (!j.contains("atoms") || !j.at("atoms").is_array()) throw ConfigError("mixture needs an 'atoms' array");
            Mixture m;
            for (const auto& a : j.at("atoms")) {
                check_keys(a, {"z0", "mass"}, "mixture atom");
                m.atoms.push_back({number(a, "z0", "mixture atom"), number(a, "mass", "mixture atom")});
            }
            return LevyMeasure(std::move(m), degenerate);
        }
        if (kind == "exponential_tail") {
            check_keys(j, {"kind", "rate", "scale", "degenerate_experiment"}, "exponential_tail measure");
            return LevyMeasure(ExponentialTail{number(j, "rate", "exponential_tail"),
                                               number(j, "scale", "exponential_tail")},
                               degenerate);
        }
    } catch (const DomainError& e) {
        throw ConfigError(std::string("invalid measure: ") + e.what());
    }
    throw ConfigError("unknown measure kind '" + kind + "'");
}

json measure_to_json(const LevyMeasure& measure) {
    json j = std::visit(
        [](const auto& k) -> json {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, AlphaStable>) {
                return {{"kind", "alpha_stable"}, {"alpha", k.alpha}};
            } else if constexpr (std::is_same_v<K, PowerTail>) {
                return {{"kind", "power_tail"}, {"alpha", k.alpha}, {"z_min", k.z_min}, {"z_max", number_json(k.z_max)}};
            } else if constexpr (std::is_same_v<K, AtomJump>) {
                return {{"kind", "atom"}, {"z0", k.z0}, {"mass", k.mass}};
            } else if constexpr (std::is_same_v<K, Mixture>) {
                json atoms = json::array();
                for (const auto& a : k.atoms) atoms.push_back({{"z0", a.z0}, {"mass", a.mass}});
                return {{"kind", "mixture"}, {"atoms", atoms}};
            } else {
                return {{"kind", "exponential_tail"}, {"rate", k.rate}, {"scale", k.scale}};
            }
        },
        measure.kind());
    if (measure.degenerate_experiment()) j["degenerate_experiment"] = true;
    return j;
}

json window_to_json(const Window& w) {
    json j = {{"shape", w.shape == Window::Shape::box ? "box" : "bridge"},
              {"horizon", number_json(w.horizon)},
              {"half_width", number_json(w.half_width)},
              {"center", w.center}};
    if (w.shape == Window::Shape::bridge) j["end"] = w.end;
    return j;
}

Window window_from_json(const json& j) {
    check_keys(j, {"shape", "horizon", "half_width", "center", "end"}, "window");
    const auto shape = j.value("shape", std::string("box"));
    const double horizon = number(j, "horizon", "window");
    const double hw = number(j, "half_width", "window");
    if (!j.contains("center") || !j.at("center").is_array()) throw ConfigError("window needs a 'center' array");
    auto center = j.at("center").get<std::vector<double>>();
    try {
        if (shape == "box") {
            const int d = static_cast<int>(center.size());
            return Window::box(d, horizon, hw, std::move(center));
        }
        if (shape == "bridge") {
            if (!j.contains("end")) throw ConfigError("bridge window needs 'end'");
            return Window::bridge(std::move(center), j.at("end").get<std::vector<double>>(), horizon, hw);
        }
    } catch (const DomainError& e) {
        throw ConfigError(std::string("invalid window: ") + e.what());
    }
    throw ConfigError("unknown window shape '" + shape + "'");
}

std::filesystem::path sidecar_path(const std::filesystem::path& atoms) {
    return std::filesystem::path(atoms.string() + ".json");
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open '" + path.string() + "' for writing");
    out << text;
    if (!out) throw ConfigError("failed writing '" + path.string() + "'");
}

void write_atoms(const std::filesystem::path& path, const Environment& env, const json& measure) {
    std::ostringstream out;
    out << 't';
    for (int k = 1; k <= env.dim(); ++k) out << ",x" << k;
    out << ",z\n";
    for (std::size_t i = 0; i < env.size(); ++i) {
        out << format_double(env.t[i]);
        for (double c : env.position(i)) out << ',' << format_double(c);
        out << ',' << format_double(env.z[i]) << '\n';
    }
    write_text(path, out.str());
    const json meta = {{"measure", measure},
                       {"window", window_to_json(env.window)},
                       {"truncation_a", env.truncation_a},
                       {"seed", env.seed},
                       {"dimension", env.dim()},
                       {"atoms", env.size()}};
    write_text(sidecar_path(path), meta.dump(2) + "\n");
}

AtomFile read_atoms(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open atom file '" + path.string() + "'");
    std::string header;
    if (!std::getline(in, header)) throw ConfigError("atom file '" + path.string() + "' has no header");
    if (!header.empty() && header.back() == '\r') header.pop_back();
    const auto cols = split(header, ',');
    if (cols.size() < 3 || cols.front() != "t" || cols.back() != "z")
        throw ConfigError("atom file header must be t,x1,...,xd,z");
    const int d = static_cast<int>(cols.size()) - 2;
    for (int k = 1; k <= d; ++k)
        if (cols[static_cast<std::size_t>(k)] != "x" + std::to_string(k))
            throw ConfigError("atom file header must be t,x1,...,xd,z");

    AtomFile f;
    const auto side = sidecar_path(path);
    Window window = Window::box(d, kInfinity, kInfinity);
    double a = 0.0;
    std::uint64_t seed = 0;
    if (std::filesystem::exists(side)) {
        std::ifstream s(side);
        try {
            f.metadata = json::parse(s);
        } catch (const json::exception& e) {
            throw ConfigError("cannot parse sidecar '" + side.string() + "': " + e.what());
        }
        window = window_from_json(f.metadata.at("window"));
        a = f.metadata.value("truncation_a", 0.0);
        seed = f.metadata.value("seed", std::uint64_t{0});
        if (window.dim() != d) throw ConfigError("sidecar window dimension does not match the atom file");
    }

    std::vector<double> t, x, z;
    std::string line;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto parts = split(line, ',');
        const std::string where = path.string() + ":" + std::to_string(lineno);
        if (parts.size() != cols.size()) throw ConfigError("wrong column count at " + where);
        t.push_back(parse_double(parts.front(), where));
        for (int k = 1; k <= d; ++k) x.push_back(parse_double(parts[static_cast<std::size_t>(k)], where));
        z.push_back(parse_double(parts.back(), where));
    }
    for (std::size_t i = 1; i < t.size(); ++i)
        if (!(t[i] > t[i - 1])) throw ConfigError("atom times must increase strictly in '" + path.string() + "'");
    f.env = make_environment(window, a, seed, std::move(t), std::move(x), std::move(z));
    if (a == 0.0 && !f.env.z.empty()) f.env.truncation_a = *std::min_element(f.env.z.begin(), f.env.z.end());
    try {
        f.env.validate();
    } catch (const DomainError& e) {
        throw ConfigError(std::string("atom file inconsistent with its metadata: ") + e.what());
    }
    return f;
}

void write_moments_csv(const std::filesystem::path& path, const std::vector<MCEstimate>& rows) {
    std::ostringstream out;
    out << "t,p,beta,n,mean,stderr,median,q05,q95,seed\n";
    for (const auto& r : rows)
        out << format_double(r.t) << ',' << format_double(r.p) << ',' << format_double(r.beta) << ',' << r.n << ','
            << format_double(r.mean) << ',' << format_double(r.std_error) << ',' << format_double(r.median) << ','
            << format_double(r.q05) << ',' << format_double(r.q95) << ',' << r.seed << '\n';
    write_text(path, out.str());
}

} // namespace levyshe::io
