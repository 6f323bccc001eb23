#include "mpa/reference_path.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mpa/errors.hpp"

namespace mpa {

ReferencePath::ReferencePath(std::vector<Vec2> points) : points_(std::move(points)) {
    if (points_.size() < 3) throw ConfigError("reference path needs at least 3 vertices");
    cumulative_.reserve(points_.size() + 1);
    cumulative_.push_back(0.0);
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const Vec2 a = points_[i];
        const Vec2 b = points_[(i + 1) % points_.size()];
        if (!std::isfinite(a.x) || !std::isfinite(a.y)) throw ConfigError("reference path vertex is not finite");
        const double len = distance(a, b);
        if (len <= 1e-12) throw ConfigError("reference path has repeated consecutive vertices");
        cumulative_.push_back(cumulative_.back() + len);
    }
}

double ReferencePath::wrap(double s) const {
    const double L = length();
    double r = std::fmod(s, L);
    if (r < 0) r += L;
    return r >= L ? 0.0 : r;
}

Vec2 ReferencePath::point_at(double s) const {
    const double w = wrap(s);
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), w);
    const std::size_t i = std::min<std::size_t>(it - cumulative_.begin() - 1, points_.size() - 1);
    const Vec2 a = points_[i];
    const Vec2 b = points_[(i + 1) % points_.size()];
    const double t = (w - cumulative_[i]) / (cumulative_[i + 1] - cumulative_[i]);
    return a + t * (b - a);
}

double ReferencePath::heading_at(double s) const {
    const double w = wrap(s);
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), w);
    const std::size_t i = std::min<std::size_t>(it - cumulative_.begin() - 1, points_.size() - 1);
    const Vec2 d = points_[(i + 1) % points_.size()] - points_[i];
    return std::atan2(d.y, d.x);
}

ReferencePath::Projection ReferencePath::project_segment(Vec2 p, std::size_t i) const {
    const Vec2 a = points_[i];
    const Vec2 b = points_[(i + 1) % points_.size()];
    const Vec2 ab = b - a;
    const double t = std::clamp(dot(p - a, ab) / dot(ab, ab), 0.0, 1.0);
    const Vec2 q = a + t * ab;
    return {wrap(cumulative_[i] + t * (cumulative_[i + 1] - cumulative_[i])), distance(p, q), q};
}

ReferencePath::Projection ReferencePath::nearest(Vec2 p) const {
    Projection best = project_segment(p, 0);
    for (std::size_t i = 1; i < points_.size(); ++i) {
        const Projection c = project_segment(p, i);
        if (c.distance < best.distance) best = c;
    }
    return best;
}

ReferencePath::Projection ReferencePath::nearest_near(Vec2 p, double hint, double behind, double ahead) const {
    const double L = length();
    if (behind + ahead >= L) return nearest(p);
    auto in_window = [&](double s) {
        double off = std::fmod(s - hint + behind, L);
        if (off < 0) off += L;
        return off <= behind + ahead;
    };
    // The constrained minimum is either an unconstrained segment projection
    // inside the window or one of the window ends.
    Projection best;
    best.s = wrap(hint - behind);
    best.point = point_at(best.s);
    best.distance = distance(p, best.point);
    Projection end;
    end.s = wrap(hint + ahead);
    end.point = point_at(end.s);
    end.distance = distance(p, end.point);
    if (end.distance < best.distance) best = end;
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const Projection c = project_segment(p, i);
        if (c.distance < best.distance && in_window(c.s)) best = c;
    }
    return best;
}

ReferencePath lemniscate_path(Vec2 center, double half_width, int samples) {
    if (samples < 8) throw ConfigError("lemniscate needs at least 8 samples");
    if (!(half_width > 0)) throw ConfigError("lemniscate half_width must be positive");
    std::vector<Vec2> pts;
    pts.reserve(samples);
    for (int i = 0; i < samples; ++i) {
        const double t = 2.0 * std::numbers::pi * i / samples;
        const double den = 1.0 + std::sin(t) * std::sin(t);
        pts.push_back({center.x + half_width * std::cos(t) / den,
                       center.y + half_width * std::sin(t) * std::cos(t) / den});
    }
    return ReferencePath(std::move(pts));
}

ReferencePath circle_path(Vec2 center, double radius, int samples, double phase, bool clockwise) {
    if (samples < 8) throw ConfigError("circle needs at least 8 samples");
    if (!(radius > 0)) throw ConfigError("circle radius must be positive");
    std::vector<Vec2> pts;
    pts.reserve(samples);
    const double dir = clockwise ? -1.0 : 1.0;
    for (int i = 0; i < samples; ++i) {
        const double t = phase + dir * 2.0 * std::numbers::pi * i / samples;
        pts.push_back({center.x + radius * std::cos(t), center.y + radius * std::sin(t)});
    }
    return ReferencePath(std::move(pts));
}

}  // namespace mpa
