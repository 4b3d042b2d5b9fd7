#pragma once

#include <iosfwd>
#include <string>

#include "sbr/signal.hpp"

namespace sbr {

/// Signal CSV: header `index,re,im` (1-D) or `row,col,re,im` (2-D), UTF-8,
/// '.' decimal separator, full double precision.
void write_signal_csv(std::ostream& os, const Signal& x);
void write_signal_csv(const std::string& path, const Signal& x);

Signal read_signal_csv(std::istream& is);
Signal read_signal_csv(const std::string& path);

/// Shortest round-trippable decimal form of a double (17 significant digits).
std::string format_double(double v);

} // namespace sbr
