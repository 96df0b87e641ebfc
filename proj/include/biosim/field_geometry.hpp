#pragma once

#include <string>
#include <vector>

#include "biosim/grid.hpp"

namespace biosim {

/// Field extent and sub-region edge lengths, all in the same length unit.
struct FieldSpec {
    double total_length = 100.0;
    double total_width = 100.0;
    double crop_length = 10.0;
    double crop_width = 10.0;

    void validate() const;
    int grid_rows() const;
    int grid_cols() const;
};

struct Point {
    double x = 0.0;
    double y = 0.0;
};

/// Closed ring; the first vertex follows the last.
struct PolygonOutline {
    std::vector<Point> vertices;

    /// Signed shoelace area.
    double signed_area() const;
};

struct PlotGrid {
    int rows = 0;
    int cols = 0;
    Mask growable;

    std::size_t growable_count() const { return count_set(growable); }
    void validate() const;
};

/// Rasterize a polygon given in canvas coordinates: x in [0, canvas_cols] to the
/// right, y in [0, canvas_rows] upwards, so pixel (r, c) has its centre at
/// (c + 0.5, canvas_rows - r - 0.5).
///
/// Edges are drawn as barriers between 4-adjacent pixel centres (a barrier sits
/// wherever the unit step between two centres touches an edge) and the canvas is
/// flood-filled from a corner of a 1-pixel padding ring. Pixels the flood cannot
/// reach are interior, so centres lying exactly on an edge count as inside.
Mask rasterize_polygon(const PolygonOutline& outline, int canvas_rows, int canvas_cols);

/// Affinely map the outline's bounding box onto [0, cols] x [0, rows].
PolygonOutline fit_to_canvas(const PolygonOutline& outline, int canvas_rows, int canvas_cols);

/// Nearest-neighbour resize of `mask` to the spec's grid dimensions.
PlotGrid build_grid(const Mask& mask, const FieldSpec& spec);

PlotGrid default_rect_grid(const FieldSpec& spec);

/// Polygon CSV: header `x,y`, one vertex per row.
PolygonOutline load_polygon_csv(const std::string& path);

}  // namespace biosim
