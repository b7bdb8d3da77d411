// Explicit closed-curve geometry shared by the level-set extractor and the
// marker engine.
//
// Orientation convention, fixed project-wide: vertices run counterclockwise
// (positive shoelace area), so the interior lies on the left of the
// traversal, N is the outward unit normal and T = rot90ccw(N) points along
// the traversal.
#pragma once

#include <vector>

#include "cevo/geometry.hpp"

namespace cevo {

struct CurvePolyline {
    std::vector<Vec2> vertices;
    std::vector<Vec2> normals;   // unit, outward
    std::vector<Vec2> tangents;  // unit, = rot90ccw(normal)
    std::vector<double> weights; // per-vertex arc-length weight
    bool closed = true;

    size_t size() const { return vertices.size(); }
};

// Segment-sum length; closed curves include the wrap segment.
// Throws std::invalid_argument for curves with fewer than 3 vertices.
double curve_length(const CurvePolyline& c);

// Signed shoelace area, positive for the CCW orientation above.
// Same 3-vertex precondition.
double enclosed_area(const CurvePolyline& c);

// Symmetric Hausdorff distance between the curves' images
// (vertex-to-segment refinement on both sides).
double hausdorff(const CurvePolyline& a, const CurvePolyline& b);

// Hausdorff between unions of curves (multi-component zero sets).
double hausdorff(const std::vector<CurvePolyline>& a, const std::vector<CurvePolyline>& b);

double point_to_curve_distance(const Vec2& p, const CurvePolyline& c);

bool point_in_polygon(const Vec2& p, const CurvePolyline& c);

// Tangents from central differences of neighboring vertices,
// N = rot90cw(T); recomputes arc weights. Curve must be CCW.
void rebuild_frames(CurvePolyline& c);

// Flip vertex order so the shoelace area is positive (CCW).
void orient_ccw(CurvePolyline& c);

// Arc-length uniform resampling of a closed curve to roughly
// `target_spacing`; vertex count >= 3. Frames rebuilt.
CurvePolyline resample_closed(const CurvePolyline& c, double target_spacing);

// Regular n-gon on a circle, exact analytic frames. Test/init helper.
CurvePolyline make_circle_polyline(double cx, double cy, double radius, int n);

// Axis-aligned ellipse, frames from vertex differences.
CurvePolyline make_ellipse_polyline(double cx, double cy, double a, double b, int n);

// True when any two non-adjacent segments intersect.
bool self_intersects(const CurvePolyline& c);

}  // namespace cevo
