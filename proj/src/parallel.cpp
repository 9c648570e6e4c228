#include "gwdrought/parallel.hpp"

#include <atomic>

namespace gwd {

namespace {
std::atomic<int> g_threads{1};
}

void set_thread_count(int n) noexcept { g_threads.store(std::max(1, n)); }

int thread_count() noexcept { return g_threads.load(); }

} // namespace gwd
