#pragma once

#include <string>

namespace qprior::detail {

// Shortest decimal string that round-trips the exact double value. Used for
// CSV cells and SVG coordinates so emitted files are byte-stable.
std::string format_double(double v);

}  // namespace qprior::detail
