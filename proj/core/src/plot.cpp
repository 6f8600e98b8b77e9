#include "calign/plot.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <unordered_map>

namespace calign {

namespace {

constexpr double kCanvas = 800.0;
constexpr double kMarginFrac = 0.05;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

} // namespace

std::string svg_scatter(const EmbeddingTable& table, bool pairs) {
    if (table.y1.cols() < 2)
        throw InvalidArgument("plot: need at least 2 embedding coordinates");
    if (table.y1.rows() == 0 || table.y2.rows() == 0)
        throw DataError("plot: empty embedding");

    double xmin = table.y1(0, 0), xmax = xmin;
    double ymin = table.y1(0, 1), ymax = ymin;
    auto grow = [&](const RealMatrix& m) {
        for (std::size_t i = 0; i < m.rows(); ++i) {
            xmin = std::min(xmin, m(i, 0));
            xmax = std::max(xmax, m(i, 0));
            ymin = std::min(ymin, m(i, 1));
            ymax = std::max(ymax, m(i, 1));
        }
    };
    grow(table.y1);
    grow(table.y2);

    if (xmax - xmin <= 0.0 && ymax - ymin <= 0.0) {
        // all points coincide: unit box centered on them
        xmin -= 0.5; xmax += 0.5;
        ymin -= 0.5; ymax += 0.5;
    } else {
        if (xmax - xmin <= 0.0) { xmin -= 0.5; xmax += 0.5; }
        if (ymax - ymin <= 0.0) { ymin -= 0.5; ymax += 0.5; }
    }
    const double mx = (xmax - xmin) * kMarginFrac;
    const double my = (ymax - ymin) * kMarginFrac;
    xmin -= mx; xmax += mx;
    ymin -= my; ymax += my;

    auto to_canvas_x = [&](double x) { return (x - xmin) / (xmax - xmin) * kCanvas; };
    auto to_canvas_y = [&](double y) { return kCanvas - (y - ymin) / (ymax - ymin) * kCanvas; };

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" "
           "viewBox=\"0 0 800 800\">\n";
    svg << "<rect width=\"800\" height=\"800\" fill=\"white\"/>\n";

    if (pairs) {
        std::unordered_map<std::string, std::size_t> pos2;
        for (std::size_t i = 0; i < table.ids2.size(); ++i) pos2[table.ids2[i]] = i;
        for (std::size_t i = 0; i < table.ids1.size(); ++i) {
            const auto it = pos2.find(table.ids1[i]);
            if (it == pos2.end()) continue;
            const std::size_t j = it->second;
            svg << "<line x1=\"" << fmt(to_canvas_x(table.y1(i, 0))) << "\" y1=\""
                << fmt(to_canvas_y(table.y1(i, 1))) << "\" x2=\""
                << fmt(to_canvas_x(table.y2(j, 0))) << "\" y2=\""
                << fmt(to_canvas_y(table.y2(j, 1)))
                << "\" stroke=\"#bbbbbb\" stroke-width=\"0.5\"/>\n";
        }
    }

    for (std::size_t i = 0; i < table.y1.rows(); ++i) {
        svg << "<circle cx=\"" << fmt(to_canvas_x(table.y1(i, 0))) << "\" cy=\""
            << fmt(to_canvas_y(table.y1(i, 1)))
            << "\" r=\"4\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\"/>\n";
    }
    for (std::size_t i = 0; i < table.y2.rows(); ++i) {
        const double cx = to_canvas_x(table.y2(i, 0));
        const double cy = to_canvas_y(table.y2(i, 1));
        svg << "<path d=\"M " << fmt(cx - 4) << " " << fmt(cy - 4) << " L " << fmt(cx + 4)
            << " " << fmt(cy + 4) << " M " << fmt(cx - 4) << " " << fmt(cy + 4) << " L "
            << fmt(cx + 4) << " " << fmt(cy - 4)
            << "\" stroke=\"#d62728\" stroke-width=\"1.5\" fill=\"none\"/>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

} // namespace calign
