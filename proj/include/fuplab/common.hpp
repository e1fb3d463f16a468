#pragma once

#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace fuplab {

// Error taxonomy shared by all modules. The CLI maps categories to exit
// codes: invalid_input/resource -> 2, numeric/construction -> 3.
enum class ErrorKind { invalid_input, resource, numeric, construction };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string where, const std::string& what)
      : std::runtime_error(where + ": " + what),
        kind_(kind),
        where_(std::move(where)) {}

  ErrorKind kind() const { return kind_; }
  const std::string& where() const { return where_; }

 private:
  ErrorKind kind_;
  std::string where_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& where,
                              const std::string& what) {
  throw Error(kind, where, what);
}

// splitmix64, used to derive independent per-worker streams from one seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic RNG. Same seed gives the same sequence on every platform,
// which the reproducibility contract of the CLI relies on; distributions
// are hand-rolled on top of raw 64-bit draws for the same reason.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed ^ 0xd1b54a32d192ed03ULL) {
    // warm up so that small seeds decorrelate
    for (int i = 0; i < 4; i++) splitmix64(state_);
  }

  std::uint64_t next_u64() { return splitmix64(state_); }

  // uniform in [0,1)
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * next_double();
  }

  std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

  // standard normal via Box-Muller
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    while (u1 == 0.0) u1 = next_double();
    double u2 = next_double();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  // independent stream for worker `id`
  Rng split(std::uint64_t id) const {
    std::uint64_t s = state_;
    std::uint64_t mixed = splitmix64(s) ^ (0x9e3779b97f4a7c15ULL * (id + 1));
    return Rng(mixed);
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// Runs fn(i) for i in [0,n) on up to `threads` workers. Results are keyed
// by index, so the output is deterministic regardless of scheduling.
template <typename T>
std::vector<T> parallel_map(std::size_t n, unsigned threads,
                            const std::function<T(std::size_t)>& fn) {
  std::vector<T> out(n);
  if (n == 0) return out;
  unsigned hw = std::thread::hardware_concurrency();
  unsigned nw = std::min<unsigned>(threads == 0 ? (hw ? hw : 1) : threads,
                                   static_cast<unsigned>(n));
  if (nw <= 1) {
    for (std::size_t i = 0; i < n; i++) out[i] = fn(i);
    return out;
  }
  std::vector<std::thread> pool;
  std::exception_ptr first_error;
  std::mutex err_mutex;
  std::atomic<std::size_t> next{0};
  for (unsigned w = 0; w < nw; w++) {
    pool.emplace_back([&]() {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          out[i] = fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
  return out;
}

}  // namespace fuplab
