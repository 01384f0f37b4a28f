#pragma once

#include <cstddef>
#include <exception>
#include <mutex>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace spillnet {

// Execution policy for the data-parallel kernels (per-asset fits, per-window
// estimation, per-equation regressions, candidate-spec searches).
//
// Every kernel accepts a policy and must produce bit-identical output for
// Serial and OpenMP runs: work items write only their own output slot and
// derive any randomness from per-item seeds. The Serial policy is the
// reference implementation the tests compare against; the bench target
// times one against the other.
struct Exec {
    enum class Mode { Serial, OpenMP };
    Mode mode = Mode::OpenMP;
    int threads = 0;  // 0 = runtime default

    static Exec serial() { return {Mode::Serial, 1}; }
    static Exec openmp(int threads = 0) { return {Mode::OpenMP, threads}; }
};

// Parallel map over [0, n). Exceptions thrown by work items are captured and
// the first one (lowest index) is rethrown after the loop completes.
template <typename Fn>
void parallel_for(const Exec& exec, std::size_t n, Fn&& fn) {
    if (n == 0) return;
    if (exec.mode == Exec::Mode::Serial) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
#ifdef _OPENMP
    std::exception_ptr first_error = nullptr;
    std::size_t first_error_index = n;
    std::mutex error_mutex;
    const int requested = exec.threads;
#pragma omp parallel for schedule(dynamic) num_threads(requested > 0 ? requested : omp_get_max_threads())
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
        try {
            fn(static_cast<std::size_t>(i));
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (static_cast<std::size_t>(i) < first_error_index) {
                first_error_index = static_cast<std::size_t>(i);
                first_error = std::current_exception();
            }
        }
    }
    if (first_error) std::rethrow_exception(first_error);
#else
    for (std::size_t i = 0; i < n; ++i) fn(i);
#endif
}

}  // namespace spillnet
