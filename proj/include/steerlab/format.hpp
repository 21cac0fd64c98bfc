#pragma once

#include <string>

namespace steerlab {

/// Shortest general-format rendering with 12 significant digits, '.' as the
/// decimal separator regardless of locale. -0 prints as 0.
std::string format_number(double value);

} // namespace steerlab
