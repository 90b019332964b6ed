#pragma once

#include <exception>
#include <mutex>

namespace sawtrap {

/// Exceptions must not cross an OpenMP region boundary. Work items run through
/// `capture`, and the first failure is rethrown after the region closes.
class ExceptionSlot {
public:
    template <class F>
    void capture(F&& f) noexcept {
        try {
            f();
        } catch (...) {
            std::lock_guard<std::mutex> lock(mutex_);
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

}  // namespace sawtrap
