#ifndef SCATLAB_DETAIL_PARALLEL_HPP
#define SCATLAB_DETAIL_PARALLEL_HPP

#include <atomic>
#include <optional>
#include <thread>

namespace scatlab {

template <class F>
auto parallel_map(std::size_t n, int threads, F&& fn) -> std::vector<decltype(fn(std::size_t{}))> {
  using T = decltype(fn(std::size_t{}));
  std::vector<std::optional<T>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        slots[i].emplace(fn(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int pool = std::max(1, std::min<int>(threads, static_cast<int>(n)));
  if (pool == 1) {
    worker();
  } else {
    std::vector<std::thread> workers;
    for (int t = 0; t < pool; ++t) workers.emplace_back(worker);
    for (auto& w : workers) w.join();
  }
  std::vector<T> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (errors[i]) {
      try {
        std::rethrow_exception(errors[i]);
      } catch (const RecordFailure&) {
        throw;
      } catch (const std::exception& e) {
        throw RecordFailure(i, e.what());
      }
    }
    out.push_back(std::move(*slots[i]));
  }
  return out;
}

}  // namespace scatlab

#endif  // SCATLAB_DETAIL_PARALLEL_HPP
