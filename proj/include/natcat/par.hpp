#ifndef NATCAT_PAR_HPP
#define NATCAT_PAR_HPP

#include <cstddef>

namespace natcat::par {

enum class Exec { Serial, OpenMP };

// Process-wide default used by the pipeline entry points; the serial path is
// the reference implementation and must produce bit-identical results.
Exec default_exec();
void set_default_exec(Exec e);

// Maps f over [0, n). Each index writes only to its own slots, so results do
// not depend on scheduling; reductions are done by the caller in index order.
template <typename F>
void for_each_index(std::size_t n, F&& f, Exec exec) {
    if (exec == Exec::Serial) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
#pragma omp parallel for schedule(dynamic, 1)
    for (long long i = 0; i < static_cast<long long>(n); ++i)
        f(static_cast<std::size_t>(i));
}

template <typename F>
void for_each_index(std::size_t n, F&& f) {
    for_each_index(n, f, default_exec());
}

} // namespace natcat::par

#endif
