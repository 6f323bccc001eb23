#include "mpa/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>

namespace mpa::svg {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

Document::Document(double width_m, double height_m, double px_per_m) : w_(width_m), h_(height_m), scale_(px_per_m) {}

std::string Document::xy(Vec2 p) const { return num(p.x * scale_) + "," + num((h_ - p.y) * scale_); }

void Document::rect(Vec2 lo, Vec2 hi, const std::string& style) {
    body_ += "<rect x=\"" + num(lo.x * scale_) + "\" y=\"" + num((h_ - hi.y) * scale_) + "\" width=\"" +
             num((hi.x - lo.x) * scale_) + "\" height=\"" + num((hi.y - lo.y) * scale_) + "\" style=\"" + style +
             "\"/>\n";
}

void Document::polyline(const std::vector<Vec2>& pts, bool closed, const std::string& style) {
    body_ += closed ? "<polygon points=\"" : "<polyline points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (i) body_ += ' ';
        body_ += xy(pts[i]);
    }
    body_ += "\" style=\"fill:none;" + style + "\"/>\n";
}

void Document::circle(Vec2 c, double r, const std::string& style) {
    body_ += "<circle cx=\"" + num(c.x * scale_) + "\" cy=\"" + num((h_ - c.y) * scale_) + "\" r=\"" +
             num(r * scale_) + "\" style=\"" + style + "\"/>\n";
}

void Document::text(Vec2 at, const std::string& s, const std::string& style) {
    body_ += "<text x=\"" + num(at.x * scale_) + "\" y=\"" + num((h_ - at.y) * scale_) + "\" style=\"" + style +
             "\">" + s + "</text>\n";
}

std::string Document::str() const {
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(w_ * scale_) + "\" height=\"" +
           num(h_ * scale_) + "\" viewBox=\"0 0 " + num(w_ * scale_) + " " + num(h_ * scale_) + "\">\n" + body_ +
           "</svg>\n";
}

void plot_panel(Document& doc, Vec2 origin, Vec2 size, const std::vector<Series>& series, const std::string& title,
                const std::string& xlabel, const std::string& ylabel) {
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& s : series) {
        for (const Vec2& p : s.points) {
            x0 = std::min(x0, p.x);
            x1 = std::max(x1, p.x);
            y0 = std::min(y0, p.y);
            y1 = std::max(y1, p.y);
        }
    }
    if (!(x0 <= x1)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    if (x1 - x0 < 1e-12) x0 -= 0.5, x1 += 0.5;
    if (y1 - y0 < 1e-12) y0 -= 0.5, y1 += 0.5;
    const double padx = 0.05 * (x1 - x0), pady = 0.05 * (y1 - y0);
    x0 -= padx, x1 += padx, y0 -= pady, y1 += pady;

    const std::string label = "font-family:sans-serif;font-size:11px;fill:#333333";
    doc.rect(origin, origin + size, "fill:#ffffff;stroke:#666666;stroke-width:1");
    doc.text(origin + Vec2{0, size.y + 8}, title, "font-family:sans-serif;font-size:13px;fill:#000000");
    doc.text(origin + Vec2{size.x * 0.45, -28}, xlabel, label);
    doc.text(origin + Vec2{-48, size.y * 0.5}, ylabel, label);
    doc.text(origin + Vec2{0, -14}, num(x0), label);
    doc.text(origin + Vec2{size.x - 30, -14}, num(x1), label);
    doc.text(origin + Vec2{-48, 0}, num(y0), label);
    doc.text(origin + Vec2{-48, size.y - 10}, num(y1), label);
    auto map = [&](Vec2 p) {
        return origin + Vec2{(p.x - x0) / (x1 - x0) * size.x, (p.y - y0) / (y1 - y0) * size.y};
    };
    for (const auto& s : series) {
        std::vector<Vec2> px;
        for (const Vec2& p : s.points) px.push_back(map(p));
        if (s.markers) {
            for (const Vec2& p : px) doc.circle(p, 3, "fill:" + s.color);
        } else if (px.size() > 1) {
            doc.polyline(px, false, "stroke:" + s.color + ";stroke-width:1.5");
        }
    }
}

}  // namespace mpa::svg
