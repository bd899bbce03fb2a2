#pragma once

#include <cstdint>

namespace sympca::opcount {

// Thread-local floating-point operation counter. The dense kernels add the
// number of multiply-adds they actually execute, so tests can assert how the
// cost of a routine scales with its input sizes.

std::uint64_t total() noexcept;
void reset() noexcept;
void add(std::uint64_t flops) noexcept;

} // namespace sympca::opcount
