#include "tfpsi/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace tfpsi {
namespace {

unsigned initial_limit() {
    if (const char* env = std::getenv("TFPSI_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v >= 1) return static_cast<unsigned>(v);
        } catch (...) {
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1u : hw;
}

std::atomic<unsigned>& limit_slot() {
    static std::atomic<unsigned> slot{initial_limit()};
    return slot;
}

}  // namespace

unsigned thread_limit() { return limit_slot().load(); }

void set_thread_limit(unsigned n) { limit_slot().store(n == 0 ? 1u : n); }

}  // namespace tfpsi
