#include "biosim/field_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>

#include "biosim/csv.hpp"
#include "biosim/error.hpp"

namespace biosim {

void FieldSpec::validate() const {
    for (double v : {total_length, total_width, crop_length, crop_width}) {
        if (!(v > 0.0) || !std::isfinite(v)) throw Error("field dimensions must be positive and finite");
    }
    if (crop_length > total_length) throw Error("crop_length exceeds total_length");
    if (crop_width > total_width) throw Error("crop_width exceeds total_width");
}

int FieldSpec::grid_rows() const { return static_cast<int>(std::floor(total_length / crop_length)); }
int FieldSpec::grid_cols() const { return static_cast<int>(std::floor(total_width / crop_width)); }

double PolygonOutline::signed_area() const {
    double a = 0.0;
    const std::size_t n = vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point& p = vertices[i];
        const Point& q = vertices[(i + 1) % n];
        a += p.x * q.y - q.x * p.y;
    }
    return 0.5 * a;
}

void PlotGrid::validate() const {
    if (rows < 1 || cols < 1) throw Error("plot grid must have at least one row and column");
    if (growable.rows() != rows || growable.cols() != cols) throw Error("growable mask dimensions mismatch");
    if (growable_count() == 0) throw Error("plot grid has no growable cells");
}

namespace {

double orient(Point a, Point b, Point c) {
    return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

bool on_segment(Point a, Point b, Point p) {
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
           std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

// Closed-segment intersection; touching counts.
bool segments_touch(Point p1, Point p2, Point q1, Point q2) {
    const double d1 = orient(q1, q2, p1);
    const double d2 = orient(q1, q2, p2);
    const double d3 = orient(p1, p2, q1);
    const double d4 = orient(p1, p2, q2);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) return true;
    if (d1 == 0 && on_segment(q1, q2, p1)) return true;
    if (d2 == 0 && on_segment(q1, q2, p2)) return true;
    if (d3 == 0 && on_segment(p1, p2, q1)) return true;
    if (d4 == 0 && on_segment(p1, p2, q2)) return true;
    return false;
}

}  // namespace

Mask rasterize_polygon(const PolygonOutline& outline, int canvas_rows, int canvas_cols) {
    if (canvas_rows < 4 || canvas_cols < 4) throw Error("canvas must be at least 4x4");
    for (const auto& v : outline.vertices) {
        if (!std::isfinite(v.x) || !std::isfinite(v.y)) throw Error("polygon has non-finite coordinates");
    }
    if (outline.vertices.size() < 3) throw Error("empty interior");
    PolygonOutline snapped = outline;
    for (auto& v : snapped.vertices) {
        v.x = std::round(v.x);
        v.y = std::round(v.y);
    }
    if (snapped.signed_area() == 0.0) throw Error("empty interior");

    // Padded canvas: padded index (pr, pc) maps to pixel (pr - 1, pc - 1).
    const int rows = canvas_rows + 2;
    const int cols = canvas_cols + 2;
    auto centre = [&](int pr, int pc) {
        return Point{(pc - 1) + 0.5, canvas_rows - (pr - 1) - 0.5};
    };

    // right_wall(r, c): step (r,c)->(r,c+1) is blocked; down_wall(r, c): (r,c)->(r+1,c).
    Mask right_wall(rows, cols, 0);
    Mask down_wall(rows, cols, 0);
    const std::size_t n = outline.vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point a = outline.vertices[i];
        const Point b = outline.vertices[(i + 1) % n];
        // Only centres within one pixel of the edge's bounding box can be affected.
        const int c_lo = std::max(0, static_cast<int>(std::floor(std::min(a.x, b.x) - 1.5)) + 1);
        const int c_hi = std::min(cols - 1, static_cast<int>(std::ceil(std::max(a.x, b.x) + 1.5)) + 1);
        const int r_lo = std::max(0, static_cast<int>(std::floor(canvas_rows - std::max(a.y, b.y) - 1.5)) + 1);
        const int r_hi = std::min(rows - 1, static_cast<int>(std::ceil(canvas_rows - std::min(a.y, b.y) + 1.5)) + 1);
        for (int r = r_lo; r <= r_hi; ++r) {
            for (int c = c_lo; c <= c_hi; ++c) {
                const Point p = centre(r, c);
                if (c + 1 < cols && segments_touch(p, centre(r, c + 1), a, b)) right_wall(r, c) = 1;
                if (r + 1 < rows && segments_touch(p, centre(r + 1, c), a, b)) down_wall(r, c) = 1;
            }
        }
    }

    Mask flooded(rows, cols, 0);
    std::deque<CellIndex> queue{{0, 0}};
    flooded(0, 0) = 1;
    while (!queue.empty()) {
        const auto [r, c] = queue.front();
        queue.pop_front();
        auto visit = [&](int nr, int nc, bool blocked) {
            if (blocked || flooded(nr, nc)) return;
            flooded(nr, nc) = 1;
            queue.push_back({nr, nc});
        };
        if (c + 1 < cols) visit(r, c + 1, right_wall(r, c));
        if (c > 0) visit(r, c - 1, right_wall(r, c - 1));
        if (r + 1 < rows) visit(r + 1, c, down_wall(r, c));
        if (r > 0) visit(r - 1, c, down_wall(r - 1, c));
    }

    Mask mask(canvas_rows, canvas_cols, 0);
    std::size_t interior = 0;
    for (int r = 0; r < canvas_rows; ++r) {
        for (int c = 0; c < canvas_cols; ++c) {
            if (!flooded(r + 1, c + 1)) {
                mask(r, c) = 1;
                ++interior;
            }
        }
    }
    if (interior == 0) throw Error("empty interior");
    return mask;
}

PolygonOutline fit_to_canvas(const PolygonOutline& outline, int canvas_rows, int canvas_cols) {
    if (outline.vertices.empty()) return outline;
    double min_x = outline.vertices.front().x, max_x = min_x;
    double min_y = outline.vertices.front().y, max_y = min_y;
    for (const auto& v : outline.vertices) {
        min_x = std::min(min_x, v.x);
        max_x = std::max(max_x, v.x);
        min_y = std::min(min_y, v.y);
        max_y = std::max(max_y, v.y);
    }
    const double sx = max_x > min_x ? canvas_cols / (max_x - min_x) : 0.0;
    const double sy = max_y > min_y ? canvas_rows / (max_y - min_y) : 0.0;
    PolygonOutline out;
    out.vertices.reserve(outline.vertices.size());
    for (const auto& v : outline.vertices) out.vertices.push_back({(v.x - min_x) * sx, (v.y - min_y) * sy});
    return out;
}

PlotGrid build_grid(const Mask& mask, const FieldSpec& spec) {
    spec.validate();
    if (mask.empty()) throw Error("source mask is empty");
    PlotGrid grid;
    grid.rows = spec.grid_rows();
    grid.cols = spec.grid_cols();
    grid.growable = Mask(grid.rows, grid.cols, 0);
    const double h = mask.rows();
    const double w = mask.cols();
    for (int r = 0; r < grid.rows; ++r) {
        const int sr = std::min(mask.rows() - 1, static_cast<int>(std::floor((r + 0.5) * h / grid.rows)));
        for (int c = 0; c < grid.cols; ++c) {
            const int sc = std::min(mask.cols() - 1, static_cast<int>(std::floor((c + 0.5) * w / grid.cols)));
            grid.growable(r, c) = mask(sr, sc) ? 1 : 0;
        }
    }
    if (grid.growable_count() == 0) throw Error("grid has no growable cells");
    return grid;
}

PlotGrid default_rect_grid(const FieldSpec& spec) {
    spec.validate();
    PlotGrid grid;
    grid.rows = spec.grid_rows();
    grid.cols = spec.grid_cols();
    grid.growable = Mask(grid.rows, grid.cols, 1);
    return grid;
}

PolygonOutline load_polygon_csv(const std::string& path) {
    const CsvTable table = read_csv_file(path);
    if (table.header != std::vector<std::string>{"x", "y"}) {
        throw ParseError(path, 1, "expected header 'x,y'");
    }
    PolygonOutline outline;
    for (const auto& row : table.rows) {
        outline.vertices.push_back({parse_number(row, 0, path), parse_number(row, 1, path)});
    }
    if (outline.vertices.size() < 3) throw ParseError(path, 0, "polygon needs at least 3 vertices");
    return outline;
}

}  // namespace biosim
