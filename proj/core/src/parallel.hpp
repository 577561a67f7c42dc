/*
 * Copyright 2026 The MDistrib Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace mdistrib::detail {

// Runs fn(task, worker) for every task in [0, tasks) on up to `workers`
// threads. Tasks are claimed dynamically; the first exception is rethrown
// after all threads join.
template <typename Fn>
void parallel_for(std::size_t tasks, std::uint32_t workers, Fn&& fn) {
  const std::size_t n_threads = std::min<std::size_t>(std::max<std::uint32_t>(workers, 1), tasks);
  if (n_threads <= 1) {
    for (std::size_t t = 0; t < tasks; ++t) fn(t, std::uint32_t{0});
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  {
    std::vector<std::jthread> pool;
    pool.reserve(n_threads);
    for (std::size_t w = 0; w < n_threads; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t t = next.fetch_add(1); t < tasks; t = next.fetch_add(1)) {
          try {
            fn(t, static_cast<std::uint32_t>(w));
          } catch (...) {
            std::lock_guard lock(error_mu);
            if (!error) error = std::current_exception();
            next.store(tasks);
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace mdistrib::detail
