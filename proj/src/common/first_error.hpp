#pragma once

#include <exception>
#include <mutex>

namespace fairfix::detail {

// Exceptions must not escape an OpenMP region; the first one is kept and
// rethrown after the parallel loop.
class FirstError {
public:
    template <typename F>
    void run(F&& body) noexcept {
        try {
            body();
        } catch (...) {
            std::lock_guard lock(mutex_);
            if (!error_) error_ = std::current_exception();
        }
    }
    void rethrow() const {
        if (error_) std::rethrow_exception(error_);
    }

private:
    std::mutex mutex_;
    std::exception_ptr error_;
};

}  // namespace fairfix::detail
