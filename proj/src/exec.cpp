#include "rotenberg/exec.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <cstring>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rotenberg {

namespace {

int env_thread_cap() {
    const char* raw = std::getenv("ROTENBERG_THREADS");
    if (raw == nullptr || *raw == '\0') {
        return 0;
    }
    int value = 0;
    auto [ptr, ec] = std::from_chars(raw, raw + std::strlen(raw), value);
    if (ec != std::errc{} || value <= 0) {
        return 0;
    }
    return value;
}

}  // namespace

int max_threads() {
#ifdef _OPENMP
    int n = omp_get_max_threads();
#else
    int n = 1;
#endif
    const int cap = env_thread_cap();
    return cap > 0 ? std::min(n, cap) : n;
}

void configure_threads_from_env() {
#ifdef _OPENMP
    const int cap = env_thread_cap();
    if (cap > 0) {
        omp_set_num_threads(std::min(omp_get_max_threads(), cap));
    }
#endif
}

}  // namespace rotenberg
