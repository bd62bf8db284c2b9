#pragma once

#include "levyshe/environment.hpp"
#include "levyshe/levy_measure.hpp"
#include "levyshe/moments.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace levyshe::io {

/// Shortest-safe round-trip text for a double (17 significant digits).
[[nodiscard]] std::string format_double(double v);

/// {"kind":"alpha_stable","alpha":1.5} | {"kind":"atom","z0":..,"mass":..} |
/// {"kind":"power_tail","alpha":..,"z_min":..,"z_max":..} | {"kind":"mixture","atoms":[{"z0":..,"mass":..}]} |
/// {"kind":"exponential_tail","rate":..,"scale":..}; optional "degenerate_experiment": bool.
/// Unknown keys are rejected with ConfigError.
[[nodiscard]] LevyMeasure measure_from_json(const nlohmann::json& j);
[[nodiscard]] nlohmann::json measure_to_json(const LevyMeasure& measure);

[[nodiscard]] nlohmann::json window_to_json(const Window& w);
[[nodiscard]] Window window_from_json(const nlohmann::json& j);

/// Sidecar of an atom file: `<atoms path>.json`.
[[nodiscard]] std::filesystem::path sidecar_path(const std::filesystem::path& atoms);

/// CSV `t,x1..xd,z` (ascending t, 17 significant digits) plus the metadata sidecar.
void write_atoms(const std::filesystem::path& path, const Environment& env, const nlohmann::json& measure);

struct AtomFile {
    Environment env;
    nlohmann::json metadata;  // empty when there is no sidecar
};

/// Reads an atom CSV. Window, truncation level and seed come from the sidecar when present;
/// otherwise the window is unbounded and the dimension is taken from the header.
[[nodiscard]] AtomFile read_atoms(const std::filesystem::path& path);

/// `t,p,beta,n,mean,stderr,median,q05,q95,seed`
void write_moments_csv(const std::filesystem::path& path, const std::vector<MCEstimate>& rows);

void write_text(const std::filesystem::path& path, const std::string& text);

} // namespace levyshe::io
