#include "h10/parallel.hpp"

#include <omp.h>

#include <atomic>
#include <cstdlib>

namespace h10::par {

namespace {
std::atomic<int> g_override{0};

int env_budget() {
    const char* s = std::getenv("H10_THREADS");
    if (s && *s) {
        int n = std::atoi(s);
        if (n >= 1) return n;
    }
    return omp_get_max_threads();
}
}  // namespace

int thread_budget() {
    int o = g_override.load(std::memory_order_relaxed);
    if (o >= 1) return o;
    static const int env = env_budget();  // resolved once per process
    return env;
}

void set_thread_budget(int n) { g_override.store(n < 1 ? 0 : n, std::memory_order_relaxed); }

}  // namespace h10::par
