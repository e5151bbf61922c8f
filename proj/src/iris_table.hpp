#pragma once

#include <array>

namespace qclust::detail {

extern const std::array<std::array<double, 5>, 150> kIrisTable;

}  // namespace qclust::detail
