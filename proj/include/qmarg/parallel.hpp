// Indexed map over independent work items (solver restarts, test batteries).
//
// The OpenMP path and the serial reference produce identical results as long
// as each item depends only on its index: items own their generator streams
// and results are stored by index, never by completion order.
#pragma once

#include <cstddef>
#include <exception>
#include <optional>
#include <vector>

namespace qmarg {

enum class Execution { Serial, Parallel };

template <class Fn>
auto indexed_map_serial(std::size_t count, Fn&& fn) {
  using Result = decltype(fn(std::size_t{}));
  std::vector<Result> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(fn(i));
  return out;
}

template <class Fn>
auto indexed_map_parallel(std::size_t count, Fn&& fn) {
  using Result = decltype(fn(std::size_t{}));
  std::vector<std::optional<Result>> slots(count);
  std::exception_ptr failure;
  const auto n = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < n; ++i) {
    try {
      slots[static_cast<std::size_t>(i)].emplace(fn(static_cast<std::size_t>(i)));
    } catch (...) {
#pragma omp critical(qmarg_indexed_map_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  std::vector<Result> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

template <class Fn>
auto indexed_map(std::size_t count, Execution exec, Fn&& fn) {
  return exec == Execution::Parallel ? indexed_map_parallel(count, fn)
                                     : indexed_map_serial(count, fn);
}

}  // namespace qmarg
