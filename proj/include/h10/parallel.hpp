#pragma once

namespace h10::par {

// Number of threads parallel kernels may use.  Resolution order:
//   1. value set via set_thread_budget() (testing hook),
//   2. the H10_THREADS environment variable,
//   3. the OpenMP default.
// Always >= 1.  Every kernel in this library writes each output element
// from exactly one thread with a fixed operation order, so results are
// bit-identical for any budget.
int thread_budget();

// Override the budget in-process; 0 restores environment-based resolution.
void set_thread_budget(int n);

}  // namespace h10::par
