#pragma once

#include <cstddef>

namespace pss::numerics {

/// Serial is the reference path; Parallel splits independent points over OpenMP threads.
/// Both visit the same points with the same arithmetic, so outputs are bitwise identical.
enum class Exec { Serial, Parallel };

template <class Body>
void for_each_index(std::size_t n, Exec exec, Body&& body) {
    const auto count = static_cast<std::ptrdiff_t>(n);
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t k = 0; k < count; ++k) body(static_cast<std::size_t>(k));
    } else {
        for (std::ptrdiff_t k = 0; k < count; ++k) body(static_cast<std::size_t>(k));
    }
}

}  // namespace pss::numerics
