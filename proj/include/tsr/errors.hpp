#pragma once

#include <stdexcept>
#include <string>

namespace tsr {

// Malformed or unusable caller input: bad files, bad dims, bad config.
// The CLI maps this to exit code 2.
struct input_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Training or back-projection failure (non-finite loss, divergence).
// The CLI maps this to exit code 3.
struct train_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace tsr
