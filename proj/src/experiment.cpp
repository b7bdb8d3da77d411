#include "cevo/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <stdexcept>

#include <json.hpp>

#include "cevo/io.hpp"
#include "cevo/stability.hpp"

namespace cevo {

namespace {

using nlohmann::json;

std::string kind_name(InputKind k) {
    switch (k) {
        case InputKind::Disks: return "disks";
        case InputKind::Blob: return "blob";
        case InputKind::Ring: return "ring";
        case InputKind::Image: return "image";
    }
    return "disks";
}

InputKind kind_from(const std::string& s) {
    if (s == "disks") return InputKind::Disks;
    if (s == "blob") return InputKind::Blob;
    if (s == "ring") return InputKind::Ring;
    if (s == "image") return InputKind::Image;
    throw std::invalid_argument("unknown input kind: " + s);
}

std::string flow_name(FlowKind k) {
    switch (k) {
        case FlowKind::GradientDescent: return "gradient_descent";
        case FlowKind::Equilibrium: return "equilibrium";
        case FlowKind::ModifiedEquilibrium: return "modified_equilibrium";
    }
    return "gradient_descent";
}

FlowKind flow_from(const std::string& s) {
    if (s == "gradient_descent") return FlowKind::GradientDescent;
    if (s == "equilibrium") return FlowKind::Equilibrium;
    if (s == "modified_equilibrium") return FlowKind::ModifiedEquilibrium;
    throw std::invalid_argument("unknown flow kind: " + s);
}

json disks_to_json(const std::vector<Disk>& ds) {
    json arr = json::array();
    for (const Disk& d : ds) arr.push_back({{"cx", d.cx}, {"cy", d.cy}, {"radius", d.radius}});
    return arr;
}

std::vector<Disk> disks_from_json(const json& arr) {
    std::vector<Disk> out;
    for (const auto& j : arr)
        out.push_back({j.at("cx").get<double>(), j.at("cy").get<double>(),
                       j.at("radius").get<double>()});
    return out;
}

json circles_to_json(const std::vector<Circle>& cs) {
    json arr = json::array();
    for (const Circle& c : cs)
        arr.push_back({{"cx", c.cx}, {"cy", c.cy}, {"radius", c.radius}});
    return arr;
}

std::vector<Circle> circles_from_json(const json& arr) {
    std::vector<Circle> out;
    for (const auto& j : arr)
        out.push_back({j.at("cx").get<double>(), j.at("cy").get<double>(),
                       j.at("radius").get<double>()});
    return out;
}

json config_to_json(const ExperimentConfig& c) {
    return json{
        {"input",
         {{"kind", kind_name(c.input_kind)},
          {"grid", {{"width", c.grid.width}, {"height", c.grid.height}, {"spacing", c.grid.spacing}}},
          {"image_path", c.image_path},
          {"disks", disks_to_json(c.disks)},
          {"ramp", {c.ramp_x, c.ramp_y}},
          {"blur_sigma", c.blur_sigma},
          {"blob_disks", disks_to_json(c.blob_disks)},
          {"blob_interior_ramp", {c.blob_interior_ramp_x, c.blob_interior_ramp_y}},
          {"ring", {{"cx", c.ring_cx}, {"cy", c.ring_cy}, {"r0", c.ring_r0}, {"sigma", c.ring_sigma}}}}},
        {"gvf",
         {{"enabled", c.gvf_enabled},
          {"mu", c.gvf_mu},
          {"dt_factor", c.gvf_dt_factor},
          {"max_iterations", c.gvf_max_iterations},
          {"tol", c.gvf_tol}}},
        {"flow",
         {{"kind", flow_name(c.flow.kind)},
          {"epsilon", c.flow.epsilon},
          {"rotation_sign", c.flow.rotation_sign == RotationSign::CCW ? "ccw" : "cw"},
          {"normalize_field", c.flow.normalize_field}}},
        {"alternation",
         {{"length_window", c.alternation.length_window},
          {"length_rel_tol", c.alternation.length_rel_tol},
          {"max_outer_cycles", c.alternation.max_outer_cycles},
          {"max_steps_per_phase", c.alternation.max_steps_per_phase},
          {"speed_tol", c.alternation.speed_tol}}},
        {"evolve", {{"cfl", c.evolve.cfl}, {"reinit_interval", c.evolve.reinit_interval}}},
        {"init_circles", circles_to_json(c.init_circles)},
        {"init_jitter", c.init_jitter},
        {"seed", c.seed},
        {"output_dir", c.output_dir},
        {"frames", c.frames}};
}

ExperimentConfig config_from(const json& j) {
    ExperimentConfig c;  // defaults, overridden field by field when present
    if (j.contains("input")) {
        const json& in = j["input"];
        if (in.contains("kind")) c.input_kind = kind_from(in["kind"].get<std::string>());
        if (in.contains("grid")) {
            c.grid.width = in["grid"].value("width", c.grid.width);
            c.grid.height = in["grid"].value("height", c.grid.height);
            c.grid.spacing = in["grid"].value("spacing", c.grid.spacing);
        }
        c.image_path = in.value("image_path", c.image_path);
        if (in.contains("disks")) c.disks = disks_from_json(in["disks"]);
        if (in.contains("ramp")) {
            c.ramp_x = in["ramp"][0].get<double>();
            c.ramp_y = in["ramp"][1].get<double>();
        }
        c.blur_sigma = in.value("blur_sigma", c.blur_sigma);
        if (in.contains("blob_disks")) c.blob_disks = disks_from_json(in["blob_disks"]);
        if (in.contains("blob_interior_ramp")) {
            c.blob_interior_ramp_x = in["blob_interior_ramp"][0].get<double>();
            c.blob_interior_ramp_y = in["blob_interior_ramp"][1].get<double>();
        }
        if (in.contains("ring")) {
            c.ring_cx = in["ring"].value("cx", c.ring_cx);
            c.ring_cy = in["ring"].value("cy", c.ring_cy);
            c.ring_r0 = in["ring"].value("r0", c.ring_r0);
            c.ring_sigma = in["ring"].value("sigma", c.ring_sigma);
        }
    }
    if (j.contains("gvf")) {
        const json& g = j["gvf"];
        c.gvf_enabled = g.value("enabled", c.gvf_enabled);
        c.gvf_mu = g.value("mu", c.gvf_mu);
        c.gvf_dt_factor = g.value("dt_factor", c.gvf_dt_factor);
        c.gvf_max_iterations = g.value("max_iterations", c.gvf_max_iterations);
        c.gvf_tol = g.value("tol", c.gvf_tol);
    }
    if (j.contains("flow")) {
        const json& f = j["flow"];
        if (f.contains("kind")) c.flow.kind = flow_from(f["kind"].get<std::string>());
        c.flow.epsilon = f.value("epsilon", c.flow.epsilon);
        if (f.contains("rotation_sign"))
            c.flow.rotation_sign = f["rotation_sign"].get<std::string>() == "cw"
                                       ? RotationSign::CW
                                       : RotationSign::CCW;
        c.flow.normalize_field = f.value("normalize_field", c.flow.normalize_field);
    }
    if (j.contains("alternation")) {
        const json& a = j["alternation"];
        c.alternation.length_window = a.value("length_window", c.alternation.length_window);
        c.alternation.length_rel_tol = a.value("length_rel_tol", c.alternation.length_rel_tol);
        c.alternation.max_outer_cycles =
            a.value("max_outer_cycles", c.alternation.max_outer_cycles);
        c.alternation.max_steps_per_phase =
            a.value("max_steps_per_phase", c.alternation.max_steps_per_phase);
        c.alternation.speed_tol = a.value("speed_tol", c.alternation.speed_tol);
    }
    if (j.contains("evolve")) {
        c.evolve.cfl = j["evolve"].value("cfl", c.evolve.cfl);
        c.evolve.reinit_interval = j["evolve"].value("reinit_interval", c.evolve.reinit_interval);
    }
    if (j.contains("init_circles")) c.init_circles = circles_from_json(j["init_circles"]);
    c.init_jitter = j.value("init_jitter", c.init_jitter);
    c.seed = j.value("seed", c.seed);
    c.output_dir = j.value("output_dir", c.output_dir);
    c.frames = j.value("frames", c.frames);
    return c;
}

}  // namespace

std::string to_json_string(const ExperimentConfig& cfg) {
    return config_to_json(cfg).dump(2) + "\n";
}

ExperimentConfig config_from_json_string(const std::string& text) {
    return config_from(json::parse(text));
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path);
    json j;
    in >> j;
    return config_from(j);
}

void save_config(const ExperimentConfig& cfg, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write config: " + path);
    out << to_json_string(cfg);
}

namespace {

ScalarField make_blob_image(const ExperimentConfig& cfg) {
    const GridSpec& grid = cfg.grid;
    ScalarField img(grid);
    double cx0 = 0.0, cy0 = 0.0;
    for (const Disk& d : cfg.blob_disks) {
        cx0 += d.cx;
        cy0 += d.cy;
    }
    cx0 /= cfg.blob_disks.size();
    cy0 /= cfg.blob_disks.size();
    const double h = grid.spacing;
    for (int j = 0; j < grid.height; ++j) {
        for (int i = 0; i < grid.width; ++i) {
            double x = i * h, y = j * h;
            bool inside = false;
            for (const Disk& d : cfg.blob_disks)
                if (std::hypot(x - d.cx, y - d.cy) <= d.radius) inside = true;
            double v = cfg.ramp_x * x + cfg.ramp_y * y;
            if (inside)
                v += 1.0 + cfg.blob_interior_ramp_x * (x - cx0) +
                     cfg.blob_interior_ramp_y * (y - cy0);
            img.at(i, j) = v;
        }
    }
    return gaussian_smooth(img, cfg.blur_sigma);
}

}  // namespace

PreparedFields prepare_fields(const ExperimentConfig& cfg) {
    PreparedFields out;
    switch (cfg.input_kind) {
        case InputKind::Disks:
            out.image = make_disk_pattern(cfg.grid, cfg.disks, cfg.blur_sigma, cfg.ramp_x,
                                          cfg.ramp_y);
            out.g = gradient_magnitude(out.image);
            break;
        case InputKind::Blob:
            out.image = make_blob_image(cfg);
            out.g = gradient_magnitude(out.image);
            break;
        case InputKind::Ring:
            out.image = make_ring_field(cfg.grid, cfg.ring_cx, cfg.ring_cy, cfg.ring_r0,
                                        cfg.ring_sigma);
            out.g = out.image;  // analytic edge indicator, no image stage
            break;
        case InputKind::Image: {
            ScalarField raw = read_pgm(cfg.image_path);
            out.image = gaussian_smooth(raw, cfg.blur_sigma);
            out.g = gradient_magnitude(out.image);
            break;
        }
    }
    out.field = gradient(out.g);
    if (cfg.gvf_enabled) {
        double h = out.g.grid.spacing;
        double dt = cfg.gvf_dt_factor * h * h / (4.0 * cfg.gvf_mu);
        out.field = gvf_extend(out.field, cfg.gvf_mu, cfg.gvf_max_iterations, dt, cfg.gvf_tol);
    }
    return out;
}

std::vector<Circle> resolve_init_circles(const ExperimentConfig& cfg) {
    std::vector<Circle> circles = cfg.init_circles;
    if (circles.empty()) {
        switch (cfg.input_kind) {
            case InputKind::Disks:
                for (const Disk& d : cfg.disks)
                    circles.push_back({d.cx, d.cy, d.radius + 7.0});
                break;
            case InputKind::Blob: {
                double cx = 0.0, cy = 0.0, reach = 0.0;
                for (const Disk& d : cfg.blob_disks) {
                    cx += d.cx;
                    cy += d.cy;
                }
                cx /= cfg.blob_disks.size();
                cy /= cfg.blob_disks.size();
                for (const Disk& d : cfg.blob_disks)
                    reach = std::max(reach, std::hypot(d.cx - cx, d.cy - cy) + d.radius);
                circles.push_back({cx, cy, reach + 7.0});
                break;
            }
            case InputKind::Ring:
                circles.push_back({cfg.ring_cx, cfg.ring_cy, cfg.ring_r0 + 10.0});
                break;
            case InputKind::Image: {
                ScalarField img = read_pgm(cfg.image_path);
                circles.push_back({0.5 * img.grid.world_width(), 0.5 * img.grid.world_height(),
                                   0.35 * std::min(img.grid.world_width(),
                                                   img.grid.world_height())});
                break;
            }
        }
    }
    if (cfg.init_jitter > 0.0) {
        std::mt19937_64 rng(cfg.seed);
        std::uniform_real_distribution<double> jit(-cfg.init_jitter, cfg.init_jitter);
        for (Circle& c : circles) {
            c.cx += jit(rng);
            c.cy += jit(rng);
        }
    }
    return circles;
}

namespace {

namespace fs = std::filesystem;

void write_snapshot(const ScalarField& background, const std::vector<CurvePolyline>& curves,
                    const fs::path& dir, const std::string& name) {
    write_ppm_overlay(background, curves, (dir / (name + ".ppm")).string());
    int comp = 0;
    for (const auto& c : curves) {
        write_curve_csv(c, (dir / (name + "_c" + std::to_string(comp) + ".csv")).string());
        ++comp;
    }
}

int count_closed(const std::vector<CurvePolyline>& curves) {
    int n = 0;
    for (const auto& c : curves)
        if (c.closed && c.vertices.size() >= 3) ++n;
    return n;
}

}  // namespace

int cmd_gen_pattern(const ExperimentConfig& cfg, std::string* error) {
    try {
        if (!cfg.grid.valid()) {
            if (error) *error = "invalid grid";
            return 2;
        }
        PreparedFields fields = prepare_fields(cfg);
        fs::path dir(cfg.output_dir);
        fs::create_directories(dir);
        save_config(cfg, (dir / "resolved_config.json").string());
        write_pgm(fields.image, (dir / "image.pgm").string(), true);
        write_scalar_csv(fields.g, (dir / "edge_indicator.csv").string());
        write_pgm(fields.g, (dir / "edge_indicator.pgm").string(), true);
        write_vector_csv(fields.field, (dir / "field.csv").string());
        return 0;
    } catch (const std::invalid_argument& e) {
        if (error) *error = e.what();
        return 2;
    } catch (const std::exception& e) {
        if (error) *error = e.what();
        return 3;
    }
}

int cmd_run(const ExperimentConfig& cfg, RunSummary* summary, std::string* error) {
    try {
        if (!cfg.grid.valid() ||
            (cfg.flow.kind == FlowKind::ModifiedEquilibrium && cfg.flow.epsilon < 0.0)) {
            if (error) *error = "invalid config";
            return 2;
        }
        auto t0 = std::chrono::steady_clock::now();
        PreparedFields fields = prepare_fields(cfg);
        std::vector<Circle> circles = resolve_init_circles(cfg);
        if (circles.empty()) {
            if (error) *error = "no initialization circles";
            return 2;
        }
        LevelSetFunction ls0 = init_multi_circle(cfg.grid, circles);

        fs::path dir(cfg.output_dir);
        fs::create_directories(dir);
        save_config(cfg, (dir / "resolved_config.json").string());

        EvolveParams params = cfg.evolve;
        if (cfg.frames) {
            fs::path frames_dir = dir / "frames";
            fs::create_directories(frames_dir);
            const ScalarField* bg = &fields.image;
            int counter = 0;
            params.on_step = [bg, frames_dir, &counter](const LevelSetFunction& ls,
                                                        const std::string&, int) {
                char name[32];
                std::snprintf(name, sizeof(name), "frame_%05d.ppm", counter++);
                write_ppm_overlay(*bg, extract_curves(ls), (frames_dir / name).string());
            };
        }

        GeoSnakesResult res;
        std::vector<ConvergenceRecord> records;
        if (cfg.flow.kind == FlowKind::GradientDescent) {
            // single-phase run, no alternation
            FlowResult fr = run_flow(cfg.flow, fields.field, std::move(ls0), cfg.alternation,
                                     params);
            res.initial_curves = extract_curves(init_multi_circle(cfg.grid, circles));
            res.final_curves = extract_curves(fr.ls);
            res.outcome = fr.record.outcome;
            res.ls = std::move(fr.ls);
            records.push_back(std::move(fr.record));
        } else {
            res = run_geosnakes(fields.field, std::move(ls0), cfg.flow, cfg.alternation,
                                params);
            records = res.records;
        }

        write_records_csv(records, (dir / "record.csv").string());
        write_snapshot(fields.image, res.initial_curves, dir, "snapshot_initialization");
        write_snapshot(fields.image, res.post_first_gd_curves, dir, "snapshot_post_gd");
        write_snapshot(fields.image, res.post_first_ef_curves, dir, "snapshot_post_ef");
        write_snapshot(fields.image, res.final_curves, dir, "snapshot_final");

        ScalarField grad_mag = gradient_magnitude(fields.g);
        RunSummary sum;
        sum.outcome = res.outcome == RunOutcome::Vanished   ? "vanished"
                      : res.outcome == RunOutcome::Converged ? "converged"
                                                             : "budget";
        sum.components_initial = count_closed(res.initial_curves);
        sum.components_final = count_closed(res.final_curves);
        sum.mean_grad_along_curve = mean_along_curves(grad_mag, res.final_curves);
        sum.wallclock_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

        nlohmann::json sj{{"outcome", sum.outcome},
                          {"components_initial", sum.components_initial},
                          {"components_final", sum.components_final},
                          {"mean_grad_along_curve", sum.mean_grad_along_curve},
                          {"wallclock_s", sum.wallclock_s}};
        std::ofstream out((dir / "summary.json").string(), std::ios::binary);
        out << sj.dump() << "\n";

        if (summary) *summary = sum;
        return 0;
    } catch (const std::invalid_argument& e) {
        if (error) *error = e.what();
        return 2;
    } catch (const std::exception& e) {
        if (error) *error = e.what();
        return 3;
    }
}

int cmd_analyze(const std::string& curve_csv, const std::string& field_csv,
                const std::string& out_csv, double marginal_tol, std::string* classification,
                std::string* error) {
    try {
        CurvePolyline curve = read_curve_csv(curve_csv);
        VectorField field = read_vector_csv(field_csv);
        StabilityReport rep = jnn_along_curve(field, curve, marginal_tol);
        if (!out_csv.empty()) write_stability_report_csv(rep, out_csv);
        if (classification) *classification = classification_name(rep.classification);
        return 0;
    } catch (const std::invalid_argument& e) {
        if (error) *error = e.what();
        return 2;
    } catch (const std::exception& e) {
        if (error) *error = e.what();
        return 3;
    }
}

}  // namespace cevo
