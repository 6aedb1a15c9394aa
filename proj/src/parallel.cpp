#include "utb/parallel.hpp"

#include <cstdlib>
#include <string>

namespace utb {

namespace {
std::atomic<unsigned> g_limit{0};
}

void set_thread_limit(unsigned n) { g_limit = n; }

unsigned thread_limit() {
  const unsigned n = g_limit.load();
  if (n > 0) return n;
  return std::max(1u, std::thread::hardware_concurrency());
}

void apply_thread_env() {
  const char* env = std::getenv("UTB_THREADS");
  if (!env || !*env) return;
  try {
    const long v = std::stol(env);
    if (v > 0) set_thread_limit(static_cast<unsigned>(v));
  } catch (...) {
  }
}

}  // namespace utb
