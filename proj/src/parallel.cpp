#include "wg/parallel.hpp"

#include <atomic>

namespace wg {

namespace {
#ifdef _OPENMP
std::atomic<Exec> g_exec{Exec::Parallel};
#else
std::atomic<Exec> g_exec{Exec::Serial};
#endif
}  // namespace

Exec default_exec() { return g_exec.load(); }
void set_default_exec(Exec mode) { g_exec.store(mode); }

}  // namespace wg
