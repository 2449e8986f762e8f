#pragma once

// Order-preserving map over independent work items. `Execution::serial` is the
// reference path; `Execution::parallel` fans out with OpenMP and must produce
// identical results.

#include <cstddef>
#include <exception>
#include <type_traits>
#include <vector>

#include <omp.h>

namespace neuristor {

enum class Execution { serial, parallel };

template <class Fn>
auto parallel_map(std::size_t count, Fn&& fn, Execution exec = Execution::parallel)
    -> std::vector<std::invoke_result_t<Fn&, std::size_t>>
{
    using Result = std::invoke_result_t<Fn&, std::size_t>;
    std::vector<Result> out(count);
    if (exec == Execution::serial || count < 2) {
        for (std::size_t i = 0; i < count; ++i)
            out[i] = fn(i);
        return out;
    }

    std::exception_ptr error;
    const auto n = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic, 1)
    for (long long i = 0; i < n; ++i) {
        try {
            out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical(neuristor_parallel_map_error)
            if (!error)
                error = std::current_exception();
        }
    }
    if (error)
        std::rethrow_exception(error);
    return out;
}

inline void set_thread_count(int threads)
{
    if (threads > 0)
        omp_set_num_threads(threads);
}

}  // namespace neuristor
