#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "sumsq/oracle.hpp"

namespace sumsq::cli {

/// Exit codes are part of the command-line interface.
enum ExitCode : int {
  kOk = 0,
  kMismatch = 1,
  kUsage = 2,
  kBudget = 3,
  kOverflow = 4,
};

/// Malformed flags or arguments; exit code 2.
class UsageError : public std::invalid_argument {
 public:
  explicit UsageError(const std::string& what) : std::invalid_argument(what) {}
};

/// Exact integer from "123", "-7", "1_000_000", "1e9" or "2.5e3".
std::int64_t parse_integer(std::string_view text);

/// "lo:hi" (inclusive) or a single value.
std::pair<std::int64_t, std::int64_t> parse_range(std::string_view text);

/// "c1,c2,...".
std::vector<std::int64_t> parse_list(std::string_view text);

/// Node budget from --budget, else SUMSQ_BUDGET, else the default.
Budget resolve_budget(const std::optional<std::string>& flag, const char* env);

/// "0 ±2 ±8 ±10" for the nonnegative half of a symmetric set; "∅" if empty.
std::string format_symmetric(const std::vector<std::int64_t>& nonnegative);

/// "2·7", "2^3·5", "1".
std::string format_factored(std::int64_t n);

/// Runs a subcommand; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Results of fn(0..count-1), in index order, computed on up to `threads`
/// workers. The exception from the lowest failing index is rethrown.
template <class Fn>
auto parallel_map(std::size_t count, unsigned threads, Fn fn) -> std::vector<decltype(fn(std::size_t{}))> {
  using Result = decltype(fn(std::size_t{}));
  std::vector<std::optional<Result>> slots(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < count;) {
      try {
        slots[i].emplace(fn(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<Result> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace sumsq::cli
