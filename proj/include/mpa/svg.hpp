#pragma once

#include <string>
#include <vector>

#include "mpa/geometry.hpp"

namespace mpa::svg {

/// Minimal SVG writer in map coordinates (y up), scaled to pixels.
class Document {
public:
    Document(double width_m, double height_m, double px_per_m);

    void rect(Vec2 lo, Vec2 hi, const std::string& style);
    void polyline(const std::vector<Vec2>& pts, bool closed, const std::string& style);
    void circle(Vec2 c, double r, const std::string& style);
    void text(Vec2 at, const std::string& s, const std::string& style);

    std::string str() const;

private:
    std::string xy(Vec2 p) const;

    double w_;
    double h_;
    double scale_;
    std::string body_;
};

std::string num(double v);

struct Series {
    std::vector<Vec2> points;
    std::string color = "#1f77b4";
    bool markers = false;
};

/// Autoscaled line/marker panel. `origin` and `size` are in document units
/// (use a document with px_per_m = 1 for pixel layouts).
void plot_panel(Document& doc, Vec2 origin, Vec2 size, const std::vector<Series>& series, const std::string& title,
                const std::string& xlabel, const std::string& ylabel);

}  // namespace mpa::svg
