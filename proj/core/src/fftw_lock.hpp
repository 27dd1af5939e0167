#pragma once

#include <mutex>

namespace qset::detail {

// FFTW planning is not thread-safe; executing a plan is.
inline std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace qset::detail
