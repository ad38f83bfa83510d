#include "l2tor/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>

namespace l2tor {

namespace {
constexpr std::size_t kChunks = 256;
}

int worker_count() {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw <= 0) hw = 1;
  if (const char* env = std::getenv("L2TOR_THREADS")) {
    int cap = std::atoi(env);
    if (cap >= 1) hw = std::min(hw, cap);
  }
  return hw;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  if (n == 0) return;
  const int workers = std::min<std::size_t>(worker_count(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const std::size_t chunks = std::min(kChunks, n);
  std::atomic<std::size_t> next{0};
  auto body = [&] {
    for (;;) {
      std::size_t c = next.fetch_add(1);
      if (c >= chunks) break;
      std::size_t lo = c * n / chunks;
      std::size_t hi = (c + 1) * n / chunks;
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (int w = 0; w + 1 < workers; ++w) pool.emplace_back(body);
  body();
  for (auto& t : pool) t.join();
}

double pairwise_sum(const std::vector<double>& v) {
  // Recursion-free pairwise reduction; order depends only on v.size().
  std::vector<double> cur = v;
  if (cur.empty()) return 0.0;
  while (cur.size() > 1) {
    std::vector<double> nxt;
    nxt.reserve((cur.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < cur.size(); i += 2) nxt.push_back(cur[i] + cur[i + 1]);
    if (cur.size() % 2) nxt.push_back(cur.back());
    cur.swap(nxt);
  }
  return cur[0];
}

double parallel_sum(std::size_t n, const std::function<double(std::size_t)>& term) {
  if (n == 0) return 0.0;
  const std::size_t chunks = std::min(kChunks, n);
  std::vector<double> partial(chunks, 0.0);
  parallel_for(chunks, [&](std::size_t c) {
    std::size_t lo = c * n / chunks;
    std::size_t hi = (c + 1) * n / chunks;
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += term(i);
    partial[c] = s;
  });
  return pairwise_sum(partial);
}

}  // namespace l2tor
