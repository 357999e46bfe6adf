#pragma once

#include <iostream>
#include <string>

namespace mobipred {

inline bool& verbose_logging() {
    static bool enabled = false;
    return enabled;
}

inline void warn(const std::string& msg) {
    std::cerr << "warning: " << msg << '\n';
}

inline void info(const std::string& msg) {
    if (verbose_logging()) {
        std::cerr << msg << '\n';
    }
}

}  // namespace mobipred
