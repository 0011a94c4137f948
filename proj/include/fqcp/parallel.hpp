// Copyright 2026 The fqcp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace fqcp {

/// Resolves a user thread count; 0 means hardware concurrency.
inline int resolve_threads(int threads) {
    if (threads > 0) {
        return threads;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs fn(begin, end, worker) over [0, n) in chunks pulled from a shared
/// counter. Which worker handles a chunk is unspecified, so callers must only
/// combine results in order-insensitive ways.
template <typename Fn>
void parallel_chunks(std::size_t n, int threads, std::size_t chunk, Fn &&fn) {
    int workers = std::max(1, std::min<int>(resolve_threads(threads), static_cast<int>((n + chunk - 1) / chunk)));
    if (workers <= 1) {
        for (std::size_t b = 0; b < n; b += chunk) {
            fn(b, std::min(n, b + chunk), 0);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; w++) {
        pool.emplace_back([&, w] {
            try {
                while (true) {
                    std::size_t b = next.fetch_add(chunk);
                    if (b >= n) {
                        break;
                    }
                    fn(b, std::min(n, b + chunk), w);
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
                next.store(n);
            }
        });
    }
    for (auto &th : pool) {
        th.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

/// Number of workers parallel_chunks will use for n items.
inline int worker_count(std::size_t n, int threads, std::size_t chunk) {
    return std::max(1, std::min<int>(resolve_threads(threads), static_cast<int>((n + chunk - 1) / chunk)));
}

}  // namespace fqcp
