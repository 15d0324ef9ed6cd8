#include "sqflab/parallel.hpp"

#include <cstdlib>

namespace sqflab {

namespace {
std::atomic<int> g_budget{0};

int default_budget() {
    if (const char* env = std::getenv("SQFLAB_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}
} // namespace

int thread_budget() {
    int n = g_budget.load(std::memory_order_relaxed);
    return n > 0 ? n : default_budget();
}

void set_thread_budget(int n) {
    g_budget.store(n > 0 ? n : 0, std::memory_order_relaxed);
}

} // namespace sqflab
