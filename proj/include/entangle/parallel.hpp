#pragma once

// Worker-count policy: hardware concurrency, capped by the ENTANGLE_THREADS
// environment variable. All parallel loops in the library dispatch whole
// independent work items to per-item output slots, so results do not depend
// on the thread count.

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>

namespace entangle {

inline unsigned worker_count(unsigned requested = 0) {
    unsigned n = requested > 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("ENTANGLE_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap > 0) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
    }
    return std::max(1u, n);
}

} // namespace entangle
