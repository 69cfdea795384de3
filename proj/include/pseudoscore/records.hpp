#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pseudoscore/dates.hpp"

namespace pseudoscore {

enum class Label : std::uint8_t { Good, Bad, Unlabeled };

inline const char* to_string(Label l) {
    switch (l) {
        case Label::Good: return "good";
        case Label::Bad: return "bad";
        default: return "unlabeled";
    }
}

struct UserRecord {
    std::string user_id;
    std::optional<int> age;            // [18, 120] when present
    std::optional<std::string> region; // categorical code
    int device_app_count = 0;
};

struct AppUsage {
    std::string user_id;
    std::string app_id;
    std::string app_category;
    double uses_per_week = 0.0;
    double days_since_last_use = 0.0;
};

enum class CallDirection : std::uint8_t { Made, Received };
enum class CallKind : std::uint8_t { Call, Sms };

struct CallEvent {
    std::string user_id;
    CallDirection direction = CallDirection::Made;
    CallKind kind = CallKind::Call;
    Timestamp timestamp;
    double duration_s = 0.0;  // 0 for sms
};

struct LoanRecord {
    std::string user_id;
    Date grant_date;
    double amount = 0.0;               // from a fixed menu
    std::optional<Date> repaid_date;   // absent = not repaid (yet)
};

struct Dataset {
    std::vector<UserRecord> users;
    std::vector<AppUsage> usage;
    std::vector<CallEvent> calls;
    std::vector<LoanRecord> loans;
};

}  // namespace pseudoscore
