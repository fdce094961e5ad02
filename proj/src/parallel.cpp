#include "irslab/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace irslab::parallel {

namespace {

unsigned from_environment() {
  const char* raw = std::getenv("IRSLAB_WORKERS");
  if (raw == nullptr) return 1;
  try {
    long value = std::stol(raw);
    return value >= 1 ? static_cast<unsigned>(value) : 1u;
  } catch (const std::exception&) {
    return 1;
  }
}

std::atomic<unsigned>& setting() {
  static std::atomic<unsigned> count{from_environment()};
  return count;
}

}  // namespace

namespace detail {
bool& inside_pool() {
  thread_local bool flag = false;
  return flag;
}
}  // namespace detail

unsigned workers() { return setting().load(std::memory_order_relaxed); }

void set_workers(unsigned count) { setting().store(count == 0 ? 1u : count, std::memory_order_relaxed); }

}  // namespace irslab::parallel
