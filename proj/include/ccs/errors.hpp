// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace ccs {

/// A run was configured with bounds the library cannot honour
/// (overflowing search box, checkpoint beyond the cap, oracle range exceeded).
class config_error : public std::invalid_argument {
public:
    explicit config_error(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace ccs
