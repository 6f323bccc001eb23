#pragma once

#include <vector>

#include "mpa/geometry.hpp"

namespace mpa {

/// Closed polyline with arc-length parameterization. Arc length wraps
/// modulo length().
class ReferencePath {
public:
    /// `points` lists the vertices once; the closing segment back to the first
    /// vertex is implicit. Needs at least 3 distinct consecutive vertices.
    explicit ReferencePath(std::vector<Vec2> points);

    double length() const { return cumulative_.back(); }
    const std::vector<Vec2>& points() const { return points_; }

    Vec2 point_at(double s) const;
    /// Direction of the segment containing s.
    double heading_at(double s) const;

    struct Projection {
        double s = 0.0;
        double distance = 0.0;
        Vec2 point;
    };

    /// Globally nearest point.
    Projection nearest(Vec2 p) const;
    /// Nearest point with arc length in [hint - behind, hint + ahead].
    Projection nearest_near(Vec2 p, double hint, double behind, double ahead) const;

    /// Wraps s into [0, length()).
    double wrap(double s) const;

private:
    Projection project_segment(Vec2 p, std::size_t i) const;

    std::vector<Vec2> points_;
    std::vector<double> cumulative_;  ///< arc length at each vertex, plus the closing total
};

/// Bernoulli lemniscate of half-width a, sampled at n points, crossing at center.
/// Starts at the rightmost tip heading +y.
ReferencePath lemniscate_path(Vec2 center, double half_width, int samples);

/// Circle sampled at n points starting at angle `phase`, counter-clockwise
/// unless `clockwise`.
ReferencePath circle_path(Vec2 center, double radius, int samples, double phase = 0.0, bool clockwise = false);

}  // namespace mpa
