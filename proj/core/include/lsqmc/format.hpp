#pragma once

#include <string>

namespace lsqmc {

/// Locale-independent rendering with 17 significant digits and '.' as the
/// decimal separator.
std::string format_double(double value);

}  // namespace lsqmc
