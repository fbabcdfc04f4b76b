#pragma once

#include <cstddef>
#include <functional>

namespace ctis {

/// Worker count used by the data-parallel kernels. Defaults to the
/// CTIS_THREADS environment variable, else std::thread::hardware_concurrency().
[[nodiscard]] std::size_t thread_count() noexcept;

/// Overrides the worker count; 0 restores the default.
void set_thread_count(std::size_t n) noexcept;

/// Runs body(begin, end) over [0, n) split into contiguous chunks, one per
/// worker. Runs inline when n < min_chunk * 2 or only one worker is set.
/// Chunks never overlap, so a body that writes only inside its range is race-free.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body,
                  std::size_t min_chunk = 4096);

}  // namespace ctis
