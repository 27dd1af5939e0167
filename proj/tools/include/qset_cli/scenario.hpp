#pragma once

// Typed view of the configuration tree shared by all commands.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "qset/analysis/pipeline.hpp"
#include "qset/device_model.hpp"
#include "qset/signal.hpp"
#include "qset/substrate.hpp"
#include "qset/thermal.hpp"
#include "qset/tlf.hpp"
#include "qset_cli/config.hpp"

namespace qset::cli {

struct RunConfig {
    double duration = 12.0 * 3600.0;  // s
    double dt = 0.1;                  // s
    std::uint64_t seed = 1;
    std::filesystem::path output_dir = "qset-out";
};

// Bias point used for the transfer gain, the telegraph step and the mean
// current of synthesized traces.
struct OperatingPoint {
    double v_sd = 0.85e-3;  // V
    double t_e = 0.6;       // K
    double gate_charge = 0.0;  // C, resolved
    double current = 0.0;      // A, resolved
    double gain = 0.0;         // A per e, resolved (signed)
};

struct TlfConfig {
    double tau_bar = 150.0;  // s, at t_tlf
    double delta_e_over_kt = 2.1;
    double t_tlf = 0.5;  // K
    double attempt_rate = kDefaultAttemptRate;
    double dq = 0.06;  // e
    double di = 0.0;   // A, resolved: |gain| dq unless configured

    TlfParams params() const;
};

struct RecipeConfig {
    bool telegraph = true;
    double mean_current = 0.0;  // A, resolved
    double drift = 0.0;         // A / sqrt(s)
    double pink = 0.0;          // A^2/Hz at 1 Hz, resolved from the charge noise
    double pink_alpha = 1.0;
    PinkOptions pink_options;
    double white = 0.0;         // A^2/Hz, resolved
    double jump_rate = 0.0;     // 1/s
    JumpAmplitude jump;
    Relaxation relaxation;
};

struct ThermalConfig {
    ThermalParams params;
    double p_set = 0.2e-12;  // W
    double t_ph_min = 0.01;  // K
    double t_ph_max = 0.5;
    int points = 100;
};

struct SubstrateConfig {
    bool enabled = false;
    double power = 0.5e-12;    // W
    double t_boundary = 0.01;  // K
    SubstrateModel model;
    SubstrateOptions options{.check_refinement = true, .refinement_tol = 0.02};
};

// Cryostat and helium-cell conditions.
struct CellConfig {
    bool helium = true;
    double t_mxc = 0.24;  // K
    // Empty cell: the substrate sits above the mixing chamber by
    // resistance * P_SET.
    double empty_cell_resistance = 1.4e12;  // K/W
    double helium_epsilon = 1.056;
    double helium_fill_factor = 0.022 / 0.056;
};

struct Fig3Config {
    double v_sd_min = 0.7e-3;  // V
    double v_sd_max = 1.4e-3;
    int points = 29;
};

struct ScenarioConfig {
    RunConfig run;
    DeviceParams device;
    OperatingPoint operating_point;
    TlfConfig tlf;
    RecipeConfig recipe;
    PipelineOptions analysis;
    ThermalConfig thermal;
    SubstrateConfig substrate;
    CellConfig cell;
    Fig3Config fig3;

    // Every setting, defaults included, as used.
    Json resolved;

    NoiseRecipe noise_recipe() const;
};

struct ParseOptions {
    bool require_run_length = false;  // run.duration_s and run.dt_s must be given
    std::optional<std::uint64_t> seed;                 // --seed
    std::optional<std::filesystem::path> output_dir;  // --out
};

// Throws ConfigError with the key path of the first offending entry.
ScenarioConfig parse_scenario(const Json& root, const ParseOptions& options = {});

}  // namespace qset::cli
