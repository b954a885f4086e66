#pragma once

namespace ergokit {

// Thread cap from ERGOKIT_THREADS; 0 or unset means use all cores.
int configured_threads();

// Applies the cap to the OpenMP runtime. Call once at startup.
void apply_thread_cap();

}  // namespace ergokit
