#pragma once

#include <string>

namespace qsle {

/// Engineering notation with 3 significant digits and an SI prefix,
/// e.g. 1.107e-9 s -> "1.11 ns", 8.86e-10 s -> "886 ps". "0 s" for zero.
std::string format_si_time(double seconds);

/// Scientific notation with 12 significant digits, for CSV/JSON output.
std::string format_sig12(double value);

} // namespace qsle
