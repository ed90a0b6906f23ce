// Copyright 2026 The spinsq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SPINSQ_TRIAL_ENGINE_HPP
#define SPINSQ_TRIAL_ENGINE_HPP

#include <cstddef>
#include <cstdint>
#include <exception>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace spinsq {

enum class Execution { serial, parallel };

/// Serial reference loop: out[i] = kernel(i).
template <class T, class Kernel>
std::vector<T> run_trials_serial(std::size_t n, Kernel &&kernel) {
    std::vector<T> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = kernel(i);
    }
    return out;
}

/// OpenMP version of run_trials_serial. Each index writes only its own slot
/// and kernels draw from per-index random streams, so the result does not
/// depend on the thread count. threads <= 0 uses the OpenMP default.
template <class T, class Kernel>
std::vector<T> run_trials_parallel(std::size_t n, Kernel &&kernel, int threads = 0) {
    std::vector<T> out(n);
    std::exception_ptr failure;
    const auto count = static_cast<std::int64_t>(n);
#ifdef _OPENMP
    const int team = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(static) num_threads(team)
#endif
    for (std::int64_t i = 0; i < count; ++i) {
        try {
            out[static_cast<std::size_t>(i)] = kernel(static_cast<std::size_t>(i));
        } catch (...) {
#ifdef _OPENMP
#pragma omp critical(spinsq_trial_failure)
#endif
            if (!failure) {
                failure = std::current_exception();
            }
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return out;
}

template <class T, class Kernel>
std::vector<T> run_trials(std::size_t n, Kernel &&kernel, Execution exec, int threads = 0) {
    if (exec == Execution::serial) {
        return run_trials_serial<T>(n, kernel);
    }
    return run_trials_parallel<T>(n, kernel, threads);
}

}  // namespace spinsq

#endif
