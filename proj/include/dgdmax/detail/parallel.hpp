#pragma once

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

namespace dgdmax {

template <typename Body>
void for_each_agent(int count, int workers, Body&& body) {
  if (workers <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  const int used = std::min(workers, count);
  std::vector<std::exception_ptr> errors(count);
  {
    std::vector<std::jthread> pool;
    pool.reserve(used);
    for (int w = 0; w < used; ++w) {
      pool.emplace_back([&, w] {
        for (int i = w; i < count; i += used) {
          try {
            body(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace dgdmax
