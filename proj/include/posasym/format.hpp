#pragma once

#include <string>

namespace posasym {

/// Shortest-independent fixed rendering: 17 significant digits, "%.17g".
/// Non-finite values render as "nan", "inf", "-inf".
std::string format_real(double value);

}  // namespace posasym
