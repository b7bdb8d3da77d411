// Experiment harness: a single JSON config describing the input field, the
// flow, the alternation budgets and the initialization; run directories are
// self-describing (the fully resolved config is written next to the
// results). Identical config + seed gives byte-identical CSV outputs.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cevo/field.hpp"
#include "cevo/flows.hpp"
#include "cevo/levelset.hpp"

namespace cevo {

enum class InputKind { Disks, Blob, Ring, Image };

struct ExperimentConfig {
    InputKind input_kind = InputKind::Disks;
    GridSpec grid{128, 128, 1.0};
    std::string image_path;

    // disks pattern
    std::vector<Disk> disks{{32, 32, 15}, {96, 40, 15}, {64, 96, 15}};
    double ramp_x = 0.002;
    double ramp_y = 0.001;
    double blur_sigma = 2.0;

    // blob pattern (stand-in for the unpublished real image: a blurred
    // non-convex union of disks with an intensity gradient inside)
    std::vector<Disk> blob_disks{{52, 60, 18}, {78, 60, 16}, {64, 82, 14}};
    double blob_interior_ramp_x = 0.004;
    double blob_interior_ramp_y = 0.002;

    // ring field (analytic test input; bypasses the image stage)
    double ring_cx = 64.0;
    double ring_cy = 64.0;
    double ring_r0 = 25.0;
    double ring_sigma = 3.0;

    // GVF extension of the edge-gradient field
    bool gvf_enabled = true;
    double gvf_mu = 0.2;
    double gvf_dt_factor = 0.9;  // of the stability limit h^2/(4 mu)
    int gvf_max_iterations = 2000;
    double gvf_tol = 1e-4;

    FlowSpec flow{FlowKind::ModifiedEquilibrium, RotationSign::CCW, 0.1, true};
    AlternationConfig alternation;
    EvolveParams evolve;

    std::vector<Circle> init_circles;  // empty: derived from the input
    double init_jitter = 0.0;
    std::uint64_t seed = 1;

    std::string output_dir = "out";
    bool frames = false;
};

std::string to_json_string(const ExperimentConfig& cfg);
ExperimentConfig config_from_json_string(const std::string& text);
ExperimentConfig load_config(const std::string& path);
void save_config(const ExperimentConfig& cfg, const std::string& path);

struct PreparedFields {
    ScalarField image;  // intensity I (ring input: I == g)
    ScalarField g;      // edge indicator
    VectorField field;  // flow-driving field (GVF-extended when enabled)
};

// Builds I, g = |grad I| and the driving field from the config.
PreparedFields prepare_fields(const ExperimentConfig& cfg);

// Initialization circles: explicit ones from the config (jittered when
// init_jitter > 0, seeded), else one circle per disk / around the blob /
// around the ring.
std::vector<Circle> resolve_init_circles(const ExperimentConfig& cfg);

struct RunSummary {
    std::string outcome;
    int components_initial = 0;
    int components_final = 0;
    double mean_grad_along_curve = 0.0;  // mean |grad g| on the final curves
    double wallclock_s = 0.0;
};

// Exit codes shared by the harness: 0 success (a vanished curve is a
// recorded result, not a failure), 2 config error, 3 I/O error.
int cmd_gen_pattern(const ExperimentConfig& cfg, std::string* error = nullptr);
int cmd_run(const ExperimentConfig& cfg, RunSummary* summary = nullptr,
            std::string* error = nullptr);
int cmd_analyze(const std::string& curve_csv, const std::string& field_csv,
                const std::string& out_csv, double marginal_tol, std::string* classification,
                std::string* error = nullptr);

}  // namespace cevo
