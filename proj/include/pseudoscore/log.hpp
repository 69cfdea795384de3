#pragma once

#include <iostream>
#include <mutex>
#include <sstream>
#include <string_view>

namespace pseudoscore {

/// Stage-prefixed logging to stderr, e.g. "[network] projected 483210 edges".
/// Kept deliberately tiny; all canonical output goes through the report
/// writers, never through here.
class Log {
public:
    template <class... Args>
    static void info(std::string_view stage, Args&&... args) {
        emit("", stage, std::forward<Args>(args)...);
    }
    template <class... Args>
    static void warn(std::string_view stage, Args&&... args) {
        emit("warning: ", stage, std::forward<Args>(args)...);
    }

private:
    template <class... Args>
    static void emit(std::string_view level, std::string_view stage, Args&&... args) {
        std::ostringstream os;
        os << '[' << stage << "] " << level;
        (os << ... << args);
        std::scoped_lock lock(mutex());
        std::cerr << os.str() << '\n';
    }
    static std::mutex& mutex() {
        static std::mutex m;
        return m;
    }
};

}  // namespace pseudoscore
