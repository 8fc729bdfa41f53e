#include "isac/parallel.hpp"

#include <charconv>
#include <cstdlib>
#include <string>
#include <string_view>

#include <omp.h>

#include "isac/error.hpp"

namespace isac {

std::optional<int> threads_from_env() {
  const char* raw = std::getenv(kThreadsEnv);
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  const std::string_view text(raw);
  int value = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size() || value < 1) {
    throw InvalidArgument(std::string(kThreadsEnv) + ": expected a positive integer, got '" + raw + "'");
  }
  return value;
}

void set_threads(int threads) {
  if (threads < 1) throw InvalidArgument("thread count must be >= 1");
  omp_set_num_threads(threads);
}

int max_threads() { return omp_get_max_threads(); }

}  // namespace isac
