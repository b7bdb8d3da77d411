// File formats: PGM/PPM images, CSV tables for fields, curves, convergence
// records and analysis reports. All CSV writers print doubles with %.17g so
// repeated runs are byte-identical.
//
// Raster convention: grid row j is written as raster row j (the image
// y-axis points down the file).
#pragma once

#include <string>
#include <vector>

#include "cevo/curve.hpp"
#include "cevo/field.hpp"
#include "cevo/flows.hpp"
#include "cevo/stability.hpp"

namespace cevo {

// Values clamped to [0,1] map linearly to 0..255; autoscale maps
// [min,max] -> [0,1] first. binary selects P5 over P2.
void write_pgm(const ScalarField& f, const std::string& path, bool autoscale = false,
               bool binary = true);

// P2 or P5; pixel values scale to [0,1] by 1/maxval; unit spacing.
ScalarField read_pgm(const std::string& path);

// One row per grid row, full precision.
void write_scalar_csv(const ScalarField& f, const std::string& path);
ScalarField read_scalar_csv(const std::string& path, double spacing = 1.0);

// Columns x,y,u,v, one row per node; the reader infers the grid.
void write_vector_csv(const VectorField& f, const std::string& path);
VectorField read_vector_csv(const std::string& path);

// Columns index,x,y,nx,ny,tx,ty.
void write_curve_csv(const CurvePolyline& c, const std::string& path);
CurvePolyline read_curve_csv(const std::string& path);

// step,length,area,max_speed,phase,outcome; phases appended in order.
void write_records_csv(const std::vector<ConvergenceRecord>& records,
                       const std::string& path);

// One-line JSON parameter header ("# {...}"), then index,jnn.
void write_stability_report_csv(const StabilityReport& rep, const std::string& path);

// Header with the fit results, then iter,eta,eta_vertex.
void write_perturbation_trace_csv(const PerturbationTrace& trace, const std::string& path);

// Header with L and mu, then t,divergence,bound.
void write_bound_report_csv(const BoundReport& rep, const std::string& path);

// Grayscale background with the curves drawn in red.
void write_ppm_overlay(const ScalarField& background,
                       const std::vector<CurvePolyline>& curves, const std::string& path);

}  // namespace cevo
