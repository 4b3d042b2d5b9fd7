#include "sbr/csv_io.hpp"

#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace sbr {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_signal_csv(std::ostream& os, const Signal& x) {
    const Window& w = x.window();
    if (w.rank() == 1) {
        os << "index,re,im\n";
        for (std::int64_t t = w.lo(); t <= w.hi(); ++t)
            os << t << ',' << format_double(x(t).real()) << ',' << format_double(x(t).imag()) << '\n';
    } else {
        os << "row,col,re,im\n";
        for (std::int64_t r = w.lo(0); r <= w.hi(0); ++r)
            for (std::int64_t c = w.lo(1); c <= w.hi(1); ++c)
                os << r << ',' << c << ',' << format_double(x(r, c).real()) << ','
                   << format_double(x(r, c).imag()) << '\n';
    }
}

void write_signal_csv(const std::string& path, const Signal& x) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    write_signal_csv(f, x);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

} // namespace

Signal read_signal_csv(std::istream& is) {
    std::string header;
    if (!std::getline(is, header)) throw std::runtime_error("signal csv: empty input");
    auto cols = split_csv_line(header);
    bool two_d;
    if (cols.size() == 3 && cols[0] == "index" && cols[1] == "re" && cols[2] == "im")
        two_d = false;
    else if (cols.size() == 4 && cols[0] == "row" && cols[1] == "col" && cols[2] == "re" && cols[3] == "im")
        two_d = true;
    else
        throw std::runtime_error("signal csv: unrecognized header '" + header + "'");

    std::map<std::pair<std::int64_t, std::int64_t>, cplx> entries;
    std::int64_t lo0 = std::numeric_limits<std::int64_t>::max(), hi0 = std::numeric_limits<std::int64_t>::min();
    std::int64_t lo1 = lo0, hi1 = hi0;
    std::string line;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto f = split_csv_line(line);
        if (f.size() != (two_d ? 4u : 3u))
            throw std::runtime_error("signal csv: bad field count at line " + std::to_string(lineno));
        try {
            const std::int64_t i0 = std::stoll(f[0]);
            const std::int64_t i1 = two_d ? std::stoll(f[1]) : 0;
            const double re = std::stod(f[two_d ? 2 : 1]);
            const double im = std::stod(f[two_d ? 3 : 2]);
            entries[{i0, i1}] = cplx(re, im);
            lo0 = std::min(lo0, i0);
            hi0 = std::max(hi0, i0);
            lo1 = std::min(lo1, i1);
            hi1 = std::max(hi1, i1);
        } catch (const std::logic_error&) {
            throw std::runtime_error("signal csv: parse error at line " + std::to_string(lineno));
        }
    }
    if (entries.empty()) throw std::runtime_error("signal csv: no data rows");
    const Window w = two_d ? Window::rect(lo0, hi0, lo1, hi1) : Window::line(lo0, hi0);
    if (entries.size() != w.size())
        throw std::runtime_error("signal csv: window " + w.str() + " has gaps (" +
                                 std::to_string(entries.size()) + " of " + std::to_string(w.size()) +
                                 " samples)");
    Signal x(w);
    for (const auto& [idx, v] : entries) x(idx.first, idx.second) = v;
    return x;
}

Signal read_signal_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open: " + path);
    return read_signal_csv(f);
}

} // namespace sbr
