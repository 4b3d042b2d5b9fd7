#include "sbr/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace sbr {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

} // namespace

void write_svg_chart(const std::string& path, const std::string& title,
                     const std::string& x_label, const std::string& y_label,
                     const std::vector<SvgSeries>& series) {
    const double W = 640, H = 420;
    const double ml = 70, mr = 20, mt = 40, mb = 55;

    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = 0, ymax = -std::numeric_limits<double>::infinity();
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            const double e = i < s.yerr.size() ? s.yerr[i] : 0.0;
            ymax = std::max(ymax, s.y[i] + e);
        }
    if (!(xmax > xmin)) xmax = xmin + 1;
    if (!(ymax > ymin)) ymax = ymin + 1;
    ymax *= 1.05;

    auto X = [&](double v) { return ml + (v - xmin) / (xmax - xmin) * (W - ml - mr); };
    auto Y = [&](double v) { return H - mb - (v - ymin) / (ymax - ymin) * (H - mt - mb); };

    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
    f << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    f << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << title
      << "</text>\n";

    // axes + ticks
    f << "<line x1=\"" << ml << "\" y1=\"" << H - mb << "\" x2=\"" << W - mr << "\" y2=\"" << H - mb
      << "\" stroke=\"black\"/>\n";
    f << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << H - mb
      << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double xv = xmin + (xmax - xmin) * i / 5.0;
        const double yv = ymin + (ymax - ymin) * i / 5.0;
        f << "<line x1=\"" << X(xv) << "\" y1=\"" << H - mb << "\" x2=\"" << X(xv) << "\" y2=\""
          << H - mb + 5 << "\" stroke=\"black\"/>\n";
        f << "<text x=\"" << X(xv) << "\" y=\"" << H - mb + 18
          << "\" text-anchor=\"middle\" font-size=\"11\">" << fmt(xv) << "</text>\n";
        f << "<line x1=\"" << ml - 5 << "\" y1=\"" << Y(yv) << "\" x2=\"" << ml << "\" y2=\"" << Y(yv)
          << "\" stroke=\"black\"/>\n";
        f << "<text x=\"" << ml - 8 << "\" y=\"" << Y(yv) + 4
          << "\" text-anchor=\"end\" font-size=\"11\">" << fmt(yv) << "</text>\n";
    }
    f << "<text x=\"" << (ml + W - mr) / 2 << "\" y=\"" << H - 12
      << "\" text-anchor=\"middle\" font-size=\"13\">" << x_label << "</text>\n";
    f << "<text x=\"16\" y=\"" << (mt + H - mb) / 2
      << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 " << (mt + H - mb) / 2
      << ")\">" << y_label << "</text>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
        const auto& sr = series[s];
        const char* color = kPalette[s % 6];
        std::ostringstream pts;
        for (std::size_t i = 0; i < sr.x.size(); ++i) pts << X(sr.x[i]) << ',' << Y(sr.y[i]) << ' ';
        f << "<polyline points=\"" << pts.str() << "\" fill=\"none\" stroke=\"" << color
          << "\" stroke-width=\"1.7\"/>\n";
        for (std::size_t i = 0; i < sr.x.size(); ++i) {
            f << "<circle cx=\"" << X(sr.x[i]) << "\" cy=\"" << Y(sr.y[i]) << "\" r=\"3\" fill=\"" << color
              << "\"/>\n";
            if (i < sr.yerr.size() && sr.yerr[i] > 0) {
                const double y0 = Y(sr.y[i] - sr.yerr[i]), y1 = Y(sr.y[i] + sr.yerr[i]);
                const double xc = X(sr.x[i]);
                f << "<line x1=\"" << xc << "\" y1=\"" << y0 << "\" x2=\"" << xc << "\" y2=\"" << y1
                  << "\" stroke=\"" << color << "\"/>\n";
                f << "<line x1=\"" << xc - 3 << "\" y1=\"" << y0 << "\" x2=\"" << xc + 3 << "\" y2=\"" << y0
                  << "\" stroke=\"" << color << "\"/>\n";
                f << "<line x1=\"" << xc - 3 << "\" y1=\"" << y1 << "\" x2=\"" << xc + 3 << "\" y2=\"" << y1
                  << "\" stroke=\"" << color << "\"/>\n";
            }
        }
        f << "<text x=\"" << W - mr - 8 << "\" y=\"" << mt + 16 * (s + 1)
          << "\" text-anchor=\"end\" font-size=\"12\" fill=\"" << color << "\">" << sr.label
          << "</text>\n";
    }
    f << "</svg>\n";
}

} // namespace sbr
