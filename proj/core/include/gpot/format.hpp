#pragma once

#include <string>
#include <string_view>

namespace gpot {

/// Renders a real with 12 significant digits; -0 prints as 0.
std::string format_real(double value);

/// RFC 4180 field: quoted when it contains a comma, quote or line break.
std::string csv_field(std::string_view text);

}  // namespace gpot
