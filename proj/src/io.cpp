#include "cevo/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace cevo {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    return in;
}

}  // namespace

void write_pgm(const ScalarField& f, const std::string& path, bool autoscale, bool binary) {
    double lo = 0.0, hi = 1.0;
    if (autoscale) {
        lo = *std::min_element(f.values.begin(), f.values.end());
        hi = *std::max_element(f.values.begin(), f.values.end());
        if (hi <= lo) hi = lo + 1.0;
    }
    auto to_byte = [&](double v) {
        double t = std::clamp((v - lo) / (hi - lo), 0.0, 1.0);
        return static_cast<int>(std::lround(t * 255.0));
    };
    std::ofstream out = open_out(path);
    out << (binary ? "P5" : "P2") << "\n"
        << f.grid.width << " " << f.grid.height << "\n255\n";
    for (int j = 0; j < f.grid.height; ++j) {
        for (int i = 0; i < f.grid.width; ++i) {
            int b = to_byte(f.at(i, j));
            if (binary)
                out.put(static_cast<char>(b));
            else
                out << b << (i + 1 < f.grid.width ? " " : "");
        }
        if (!binary) out << "\n";
    }
}

namespace {

// next whitespace-separated token, skipping '#' comment lines
std::string next_token(std::istream& in) {
    std::string tok;
    for (;;) {
        int c = in.get();
        if (c == EOF) break;
        if (c == '#') {
            std::string dummy;
            std::getline(in, dummy);
            continue;
        }
        if (std::isspace(c)) {
            if (!tok.empty()) break;
            continue;
        }
        tok.push_back(static_cast<char>(c));
    }
    return tok;
}

}  // namespace

ScalarField read_pgm(const std::string& path) {
    std::ifstream in = open_in(path);
    std::string magic = next_token(in);
    if (magic != "P2" && magic != "P5")
        throw std::runtime_error("read_pgm: unsupported magic '" + magic + "' in " + path);
    int w = std::stoi(next_token(in));
    int h = std::stoi(next_token(in));
    int maxval = std::stoi(next_token(in));
    if (w < 3 || h < 3 || maxval <= 0 || maxval > 65535)
        throw std::runtime_error("read_pgm: bad header in " + path);

    ScalarField f(GridSpec{w, h, 1.0});
    if (magic == "P2") {
        for (int k = 0; k < w * h; ++k)
            f.values[k] = std::stod(next_token(in)) / maxval;
    } else {
        // single whitespace after maxval already consumed by next_token
        bool wide = maxval > 255;
        for (int k = 0; k < w * h; ++k) {
            int v;
            if (wide) {
                int hi_byte = in.get(), lo_byte = in.get();
                v = hi_byte * 256 + lo_byte;
            } else {
                v = in.get();
            }
            if (v < 0) throw std::runtime_error("read_pgm: truncated data in " + path);
            f.values[k] = static_cast<double>(v) / maxval;
        }
    }
    return f;
}

void write_scalar_csv(const ScalarField& f, const std::string& path) {
    std::ofstream out = open_out(path);
    for (int j = 0; j < f.grid.height; ++j) {
        for (int i = 0; i < f.grid.width; ++i) {
            out << fmt(f.at(i, j));
            if (i + 1 < f.grid.width) out << ",";
        }
        out << "\n";
    }
}

ScalarField read_scalar_csv(const std::string& path, double spacing) {
    std::ifstream in = open_in(path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(std::move(row));
    }
    if (rows.size() < 3 || rows[0].size() < 3)
        throw std::runtime_error("read_scalar_csv: grid too small in " + path);
    ScalarField f(GridSpec{static_cast<int>(rows[0].size()), static_cast<int>(rows.size()),
                           spacing});
    for (size_t j = 0; j < rows.size(); ++j) {
        if (rows[j].size() != rows[0].size())
            throw std::runtime_error("read_scalar_csv: ragged rows in " + path);
        for (size_t i = 0; i < rows[j].size(); ++i)
            f.at(static_cast<int>(i), static_cast<int>(j)) = rows[j][i];
    }
    return f;
}

void write_vector_csv(const VectorField& f, const std::string& path) {
    std::ofstream out = open_out(path);
    out << "x,y,u,v\n";
    const double h = f.grid.spacing;
    for (int j = 0; j < f.grid.height; ++j)
        for (int i = 0; i < f.grid.width; ++i) {
            Vec2 w = f.at(i, j);
            out << fmt(i * h) << "," << fmt(j * h) << "," << fmt(w.x) << "," << fmt(w.y)
                << "\n";
        }
}

VectorField read_vector_csv(const std::string& path) {
    std::ifstream in = open_in(path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("x,y,u,v", 0) != 0)
        throw std::runtime_error("read_vector_csv: missing x,y,u,v header in " + path);
    std::vector<double> xs, ys, us, vs;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        double vals[4];
        for (int k = 0; k < 4; ++k) {
            if (!std::getline(ss, cell, ','))
                throw std::runtime_error("read_vector_csv: short row in " + path);
            vals[k] = std::stod(cell);
        }
        xs.push_back(vals[0]);
        ys.push_back(vals[1]);
        us.push_back(vals[2]);
        vs.push_back(vals[3]);
    }
    if (xs.empty()) throw std::runtime_error("read_vector_csv: no data in " + path);

    // infer the uniform grid: x runs fastest
    int w = 0;
    while (w < static_cast<int>(xs.size()) && (w == 0 || xs[w] > xs[w - 1])) ++w;
    if (w < 3 || xs.size() % w != 0)
        throw std::runtime_error("read_vector_csv: not a row-major uniform grid in " + path);
    int h = static_cast<int>(xs.size()) / w;
    double spacing = xs[1] - xs[0];
    if (h < 3 || spacing <= 0.0)
        throw std::runtime_error("read_vector_csv: bad grid in " + path);

    VectorField f(GridSpec{w, h, spacing});
    f.u = std::move(us);
    f.v = std::move(vs);
    return f;
}

void write_curve_csv(const CurvePolyline& c, const std::string& path) {
    std::ofstream out = open_out(path);
    out << "index,x,y,nx,ny,tx,ty\n";
    for (size_t k = 0; k < c.vertices.size(); ++k) {
        const Vec2& v = c.vertices[k];
        Vec2 n = k < c.normals.size() ? c.normals[k] : Vec2{};
        Vec2 t = k < c.tangents.size() ? c.tangents[k] : Vec2{};
        out << k << "," << fmt(v.x) << "," << fmt(v.y) << "," << fmt(n.x) << "," << fmt(n.y)
            << "," << fmt(t.x) << "," << fmt(t.y) << "\n";
    }
}

CurvePolyline read_curve_csv(const std::string& path) {
    std::ifstream in = open_in(path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("index,", 0) != 0)
        throw std::runtime_error("read_curve_csv: missing header in " + path);
    CurvePolyline c;
    c.closed = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        double vals[7];
        for (int k = 0; k < 7; ++k) {
            if (!std::getline(ss, cell, ','))
                throw std::runtime_error("read_curve_csv: short row in " + path);
            vals[k] = std::stod(cell);
        }
        c.vertices.push_back({vals[1], vals[2]});
        c.normals.push_back({vals[3], vals[4]});
        c.tangents.push_back({vals[5], vals[6]});
    }
    if (c.vertices.size() < 3) throw std::runtime_error("read_curve_csv: fewer than 3 vertices");
    c.weights.resize(c.vertices.size());
    size_t n = c.vertices.size();
    for (size_t k = 0; k < n; ++k) {
        const Vec2& prev = c.vertices[(k + n - 1) % n];
        const Vec2& next = c.vertices[(k + 1) % n];
        c.weights[k] =
            0.5 * ((c.vertices[k] - prev).norm() + (next - c.vertices[k]).norm());
    }
    return c;
}

void write_records_csv(const std::vector<ConvergenceRecord>& records,
                       const std::string& path) {
    std::ofstream out = open_out(path);
    out << "step,length,area,max_speed,phase,outcome\n";
    for (const auto& r : records) {
        for (size_t k = 0; k < r.step.size(); ++k)
            out << r.step[k] << "," << fmt(r.length[k]) << "," << fmt(r.area[k]) << ","
                << fmt(r.max_speed[k]) << "," << r.phase << "," << outcome_name(r.outcome)
                << "\n";
    }
}

void write_stability_report_csv(const StabilityReport& rep, const std::string& path) {
    nlohmann::json hdr{{"marginal_tol", rep.marginal_tol},
                       {"mean", rep.mean},
                       {"min", rep.min},
                       {"max", rep.max},
                       {"classification", classification_name(rep.classification)},
                       {"clipped", rep.clipped}};
    std::ofstream out = open_out(path);
    out << "# " << hdr.dump() << "\n";
    out << "index,jnn\n";
    for (size_t k = 0; k < rep.samples.size(); ++k)
        out << k << "," << fmt(rep.samples[k]) << "\n";
}

void write_perturbation_trace_csv(const PerturbationTrace& trace, const std::string& path) {
    nlohmann::json hdr{{"fitted_factor", trace.fitted_factor},
                       {"predicted_factor", trace.predicted_factor},
                       {"jnn_mean", trace.jnn_mean}};
    std::ofstream out = open_out(path);
    out << "# " << hdr.dump() << "\n";
    out << "iter,eta,eta_vertex\n";
    for (size_t k = 0; k < trace.eta_norms.size(); ++k)
        out << k << "," << fmt(trace.eta_norms[k]) << "," << fmt(trace.eta_norms_vertex[k])
            << "\n";
}

void write_bound_report_csv(const BoundReport& rep, const std::string& path) {
    nlohmann::json hdr{{"lipschitz_L", rep.lipschitz_L},
                       {"mu", rep.mu},
                       {"truncated", rep.truncated}};
    std::ofstream out = open_out(path);
    out << "# " << hdr.dump() << "\n";
    out << "t,divergence,bound\n";
    for (size_t k = 0; k < rep.times.size(); ++k)
        out << fmt(rep.times[k]) << "," << fmt(rep.divergence[k]) << "," << fmt(rep.bound[k])
            << "\n";
}

void write_ppm_overlay(const ScalarField& background,
                       const std::vector<CurvePolyline>& curves, const std::string& path) {
    const int w = background.grid.width, h = background.grid.height;
    double lo = *std::min_element(background.values.begin(), background.values.end());
    double hi = *std::max_element(background.values.begin(), background.values.end());
    if (hi <= lo) hi = lo + 1.0;

    std::vector<uint8_t> rgb(static_cast<size_t>(w) * h * 3);
    for (int k = 0; k < w * h; ++k) {
        double t = (background.values[k] - lo) / (hi - lo);
        uint8_t b = static_cast<uint8_t>(std::lround(t * 255.0));
        rgb[3 * k] = rgb[3 * k + 1] = rgb[3 * k + 2] = b;
    }
    const double hs = background.grid.spacing;
    auto plot = [&](double x, double y) {
        int i = static_cast<int>(std::lround(x / hs));
        int j = static_cast<int>(std::lround(y / hs));
        if (i < 0 || i >= w || j < 0 || j >= h) return;
        size_t k = (static_cast<size_t>(j) * w + i) * 3;
        rgb[k] = 255;
        rgb[k + 1] = 0;
        rgb[k + 2] = 0;
    };
    for (const auto& c : curves) {
        size_t n = c.vertices.size();
        if (n == 0) continue;
        size_t last = c.closed ? n : n - 1;
        for (size_t s = 0; s < last; ++s) {
            Vec2 a = c.vertices[s], b = c.vertices[(s + 1) % n];
            int steps = std::max(1, static_cast<int>(std::ceil((b - a).norm() / (0.25 * hs))));
            for (int q = 0; q <= steps; ++q) {
                double t = static_cast<double>(q) / steps;
                plot(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y));
            }
        }
    }
    std::ofstream out = open_out(path);
    out << "P6\n" << w << " " << h << "\n255\n";
    out.write(reinterpret_cast<const char*>(rgb.data()), static_cast<std::streamsize>(rgb.size()));
}

}  // namespace cevo
