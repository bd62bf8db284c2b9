#pragma once

#include "levyshe/diagnostics.hpp"
#include "levyshe/levy_measure.hpp"
#include "levyshe/moments.hpp"
#include "levyshe/sizebias.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>

namespace levyshe {

/// Validated run configuration.
///
/// Every key has an explicit default (see `RunConfig::defaults()`); unknown keys and
/// type mismatches raise ConfigError. `echo()` returns the fully resolved document.
class RunConfig {
public:
    static RunConfig from_json(const nlohmann::json& j);
    static RunConfig load(const std::filesystem::path& path);
    /// The schema: every field with its default value ("measure" is required and has none).
    static const nlohmann::json& defaults();

    [[nodiscard]] const nlohmann::json& echo() const noexcept { return resolved_; }
    [[nodiscard]] const LevyMeasure& measure() const noexcept { return *measure_; }

    [[nodiscard]] int dimension() const;
    [[nodiscard]] double beta() const;
    [[nodiscard]] double truncation_a() const;
    [[nodiscard]] double horizon() const;
    [[nodiscard]] std::uint64_t seed() const;
    [[nodiscard]] std::size_t replicas() const;

    /// Replaces the seed (CLI --seed); the echo reflects the override.
    void override_seed(std::uint64_t seed);

    [[nodiscard]] MomentConfig moment_config() const;
    [[nodiscard]] SizeBiasConfig sizebias_config() const;
    [[nodiscard]] MassConcentrationConfig mass_concentration_config() const;
    [[nodiscard]] IntermittencyConfig intermittency_config() const;
    [[nodiscard]] DegeneracyConfig degeneracy_config() const;
    [[nodiscard]] TruncationConfig truncation_config() const;
    [[nodiscard]] BoxConfig box_config() const;
    [[nodiscard]] std::vector<double> lyapunov_t_grid() const;

private:
    nlohmann::json resolved_;
    std::optional<LevyMeasure> measure_;
};

} // namespace levyshe
