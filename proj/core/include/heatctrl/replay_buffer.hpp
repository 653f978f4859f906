#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "heatctrl/rng.hpp"
#include "heatctrl/sim_env.hpp"

namespace heatctrl {

// Fixed-capacity FIFO ring of transitions with uniform sampling over the
// filled region (with replacement). Single-writer; reads happen only between
// writes.
class ReplayBuffer {
public:
    struct Entry {
        std::array<double, kObsDim> obs{};
        std::array<double, kObsDim> next_obs{};
        double action = 0.0;
        double reward = 0.0;
        double cost = 0.0;
        bool done = false;
    };

    explicit ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
        if (capacity_ == 0) {
            throw std::invalid_argument("ReplayBuffer: capacity must be positive");
        }
        storage_.reserve(std::min<std::size_t>(capacity_, 4096));
    }

    void push(const Entry& e) {
        if (storage_.size() < capacity_) {
            storage_.push_back(e);
        } else {
            storage_[head_] = e;  // overwrite the oldest record
            head_ = (head_ + 1) % capacity_;
        }
    }

    std::size_t size() const { return storage_.size(); }
    std::size_t capacity() const { return capacity_; }

    const Entry& operator[](std::size_t i) const { return storage_[i]; }

    void sample_indices(std::size_t n, CounterRng& rng, std::vector<std::size_t>& out) const {
        if (storage_.empty()) {
            throw std::logic_error("ReplayBuffer: sampling from an empty buffer");
        }
        out.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            out[i] = static_cast<std::size_t>(rng.uniform_int(storage_.size()));
        }
    }

private:
    std::size_t capacity_;
    std::size_t head_ = 0;  // next overwrite position once full
    std::vector<Entry> storage_;
};

}  // namespace heatctrl
