#pragma once

#include <mutex>

namespace apstag::detail {

// The FFTW planner is not thread safe; plan creation and destruction from
// concurrent runs go through this lock. fftw_execute needs none.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace apstag::detail
