#pragma once

#include <string>

namespace spotrank {

/// Appends `x` with 12 significant digits (printf "%.12g" semantics,
/// locale-independent). Negative zero prints as "0".
void append_g12(std::string& out, double x);

std::string format_g12(double x);

/// Rounds to the value that format_g12 would print.
double round_g12(double x);

/// Fixed notation with 6 fractional digits, for human-facing output.
std::string format_fixed6(double x);

/// Shortest round-trip representation, used in labels and file names.
std::string format_short(double x);

}  // namespace spotrank
