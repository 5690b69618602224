#include "natcat/par.hpp"

namespace natcat::par {

namespace {
Exec g_exec = Exec::OpenMP;
}

Exec default_exec() { return g_exec; }
void set_default_exec(Exec e) { g_exec = e; }

} // namespace natcat::par
