#pragma once

#include <cstdint>
#include <span>

namespace cotype::detail {

// Allocation-free Smith reduction for the enumeration hot loop. Entries must
// be below 2^62 in absolute value; returns false on overflow.
bool smith_reduce_inplace(std::span<std::int64_t> a, std::size_t rows, std::size_t cols);

}  // namespace cotype::detail
