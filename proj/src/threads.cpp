#include "ergokit/threads.hpp"

#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ergokit {

int configured_threads() {
    const char* env = std::getenv("ERGOKIT_THREADS");
    if (env != nullptr) {
        try {
            const int n = std::stoi(env);
            if (n > 0) return n;
        } catch (...) {
            // fall through to auto
        }
    }
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void apply_thread_cap() {
#ifdef _OPENMP
    omp_set_num_threads(configured_threads());
#endif
}

}  // namespace ergokit
