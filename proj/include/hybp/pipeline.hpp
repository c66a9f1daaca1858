// Licensed under the Apache License, Version 2.0 (the "License"); you
// may not use this file except in compliance with the License.  You
// may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or
// implied.  See the License for the specific language governing
// permissions and limitations under the License.

#pragma once

#include <condition_variable>
#include <deque>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <thread>

namespace hybp {

// Blocking bounded queue; close() wakes both sides. Values are moved through.
template <typename T>
class BoundedQueue {
public:
    explicit BoundedQueue(size_t capacity) : capacity_(capacity) {}

    // Returns false if the queue was closed before the item could be queued.
    bool push(T item) {
        std::unique_lock lock(mutex_);
        not_full_.wait(lock, [&] { return items_.size() < capacity_ || closed_; });
        if (closed_) return false;
        items_.push_back(std::move(item));
        not_empty_.notify_one();
        return true;
    }

    // Blocks until an item arrives; nullopt once closed and drained.
    std::optional<T> pop() {
        std::unique_lock lock(mutex_);
        not_empty_.wait(lock, [&] { return !items_.empty() || closed_; });
        if (items_.empty()) return std::nullopt;
        T item = std::move(items_.front());
        items_.pop_front();
        not_full_.notify_one();
        return item;
    }

    void close() {
        std::lock_guard lock(mutex_);
        closed_ = true;
        not_empty_.notify_all();
        not_full_.notify_all();
    }

private:
    size_t capacity_;
    std::deque<T> items_;
    bool closed_ = false;
    std::mutex mutex_;
    std::condition_variable not_empty_;
    std::condition_variable not_full_;
};

// Two-stage pipeline over n ordered items: `produce` runs on a worker thread
// one item ahead (bounded by queue_depth), `consume` runs on the calling
// thread in strict item order. Exceptions from either stage drain the
// pipeline and rethrow here.
template <typename T>
void two_stage_pipeline(int n_items, const std::function<T(int)>& produce,
                        const std::function<void(int, T)>& consume, size_t queue_depth = 1) {
    if (n_items <= 0) return;
    BoundedQueue<T> queue(queue_depth);
    std::exception_ptr producer_error;

    std::thread producer([&] {
        try {
            for (int i = 0; i < n_items; ++i)
                if (!queue.push(produce(i))) return; // consumer bailed out
        } catch (...) {
            producer_error = std::current_exception();
        }
        queue.close();
    });

    std::exception_ptr consumer_error;
    for (int i = 0; i < n_items && !consumer_error; ++i) {
        auto item = queue.pop();
        if (!item) break; // producer failed; its error is rethrown below
        try {
            consume(i, std::move(*item));
        } catch (...) {
            consumer_error = std::current_exception();
        }
    }
    queue.close();
    producer.join();
    if (producer_error) std::rethrow_exception(producer_error);
    if (consumer_error) std::rethrow_exception(consumer_error);
}

} // namespace hybp
