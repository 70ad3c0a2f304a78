#pragma once

namespace egns {

enum class Exec { Serial, Parallel };

/// OpenMP-backed loop over [0, n). Iterations must be independent; callers
/// that need a deterministic global result compute per-index values here and
/// combine them serially in index order afterwards.
template <class F>
void parallel_for(int n, F&& fn) {
#ifdef EGNS_HAVE_OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int i = 0; i < n; ++i) fn(i);
}

template <class F>
void run_indexed(Exec exec, int n, F&& fn) {
    if (exec == Exec::Parallel) {
        parallel_for(n, fn);
    } else {
        for (int i = 0; i < n; ++i) fn(i);
    }
}

}  // namespace egns
