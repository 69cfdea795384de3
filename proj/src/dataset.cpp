#include "pseudoscore/dataset.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <unordered_set>

#include "pseudoscore/csv.hpp"
#include "pseudoscore/log.hpp"

namespace pseudoscore::data {

namespace {

constexpr std::size_t kMaxLoggedRejects = 20;

std::optional<double> parse_double(const std::string& s) {
    if (s.empty()) return std::nullopt;
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (errno != 0 || end != s.c_str() + s.size()) return std::nullopt;
    return v;
}

std::optional<long> parse_int(const std::string& s) {
    if (s.empty()) return std::nullopt;
    errno = 0;
    char* end = nullptr;
    const long v = std::strtol(s.c_str(), &end, 10);
    if (errno != 0 || end != s.c_str() + s.size()) return std::nullopt;
    return v;
}

/// Resolves canonical column names to indices in the file header.
class RowView {
public:
    RowView(const std::vector<std::string>& header, const ColumnMap& schema,
            const std::vector<std::string>& canonical, const std::string& file) {
        for (const auto& name : canonical) {
            auto it = schema.find(name);
            const std::string& col = it != schema.end() ? it->second : name;
            auto pos = std::find(header.begin(), header.end(), col);
            if (pos == header.end())
                throw std::runtime_error(file + ": header is missing column '" + col + "'");
            index_[name] = static_cast<int>(pos - header.begin());
        }
        width_ = header.size();
    }

    bool fits(const std::vector<std::string>& fields) const { return fields.size() == width_; }

    const std::string& get(const std::vector<std::string>& fields, const std::string& name) const {
        return fields[static_cast<std::size_t>(index_.at(name))];
    }

private:
    std::map<std::string, int> index_;
    std::size_t width_ = 0;
};

struct Rejector {
    FileLoadStats& stats;
    std::string file;

    void operator()(std::size_t lineno, const std::string& reason) {
        ++stats.rejected;
        if (stats.reject_reasons.size() < kMaxLoggedRejects) {
            std::string msg = "line " + std::to_string(lineno) + ": " + reason;
            stats.reject_reasons.push_back(msg);
            Log::warn("data", file, " row rejected, ", msg);
        }
    }
};

void enforce_tolerance(const FileLoadStats& stats, const std::string& file, double tolerance) {
    if (stats.rows == 0) return;
    const double frac = static_cast<double>(stats.rejected) / static_cast<double>(stats.rows);
    if (frac > tolerance) {
        throw std::runtime_error(file + ": " + std::to_string(stats.rejected) + " of " +
                                 std::to_string(stats.rows) +
                                 " rows malformed, above tolerance " + std::to_string(tolerance));
    }
}

}  // namespace

LoadResult load_dataset(const DatasetPaths& paths, const LoadOptions& opt) {
    LoadResult res;
    std::unordered_set<std::string> known_users;

    {
        std::vector<std::string> header;
        Rejector reject{res.users_stats, paths.users};
        RowView cols({}, {}, {}, paths.users);  // placeholder; rebuilt once header is known
        bool cols_ready = false;
        for_each_row(paths.users, opt.delimiter, header, [&](std::size_t lineno, const auto& f) {
            if (!cols_ready) {
                cols = RowView(header, opt.users_schema,
                               {"user_id", "age", "region", "device_app_count"}, paths.users);
                cols_ready = true;
            }
            ++res.users_stats.rows;
            if (!cols.fits(f)) return reject(lineno, "wrong field count");
            UserRecord u;
            u.user_id = cols.get(f, "user_id");
            if (u.user_id.empty()) return reject(lineno, "empty user_id");
            if (known_users.count(u.user_id)) return reject(lineno, "duplicate user_id");
            const std::string& age = cols.get(f, "age");
            if (!age.empty()) {
                auto a = parse_int(age);
                if (!a || *a < 18 || *a > 120) return reject(lineno, "age outside [18,120]");
                u.age = static_cast<int>(*a);
            }
            const std::string& region = cols.get(f, "region");
            if (!region.empty()) u.region = region;
            auto apps = parse_int(cols.get(f, "device_app_count"));
            if (!apps || *apps < 0) return reject(lineno, "bad device_app_count");
            u.device_app_count = static_cast<int>(*apps);
            known_users.insert(u.user_id);
            res.dataset.users.push_back(std::move(u));
        });
        enforce_tolerance(res.users_stats, paths.users, opt.reject_tolerance);
    }

    {
        std::vector<std::string> header;
        Rejector reject{res.usage_stats, paths.app_usage};
        RowView cols({}, {}, {}, paths.app_usage);
        bool cols_ready = false;
        std::unordered_set<std::string> seen_pairs;
        for_each_row(paths.app_usage, opt.delimiter, header, [&](std::size_t lineno, const auto& f) {
            if (!cols_ready) {
                cols = RowView(header, opt.app_usage_schema,
                               {"user_id", "app_id", "app_category", "uses_per_week",
                                "days_since_last_use"},
                               paths.app_usage);
                cols_ready = true;
            }
            ++res.usage_stats.rows;
            if (!cols.fits(f)) return reject(lineno, "wrong field count");
            AppUsage r;
            r.user_id = cols.get(f, "user_id");
            if (!known_users.count(r.user_id)) return reject(lineno, "unknown user_id");
            r.app_id = cols.get(f, "app_id");
            if (r.app_id.empty()) return reject(lineno, "empty app_id");
            if (!seen_pairs.insert(r.user_id + '\x1f' + r.app_id).second)
                return reject(lineno, "duplicate (user_id, app_id)");
            r.app_category = cols.get(f, "app_category");
            auto freq = parse_double(cols.get(f, "uses_per_week"));
            auto rec = parse_double(cols.get(f, "days_since_last_use"));
            if (!freq || *freq < 0) return reject(lineno, "bad uses_per_week");
            if (!rec || *rec < 0) return reject(lineno, "bad days_since_last_use");
            r.uses_per_week = *freq;
            r.days_since_last_use = *rec;
            res.dataset.usage.push_back(std::move(r));
        });
        enforce_tolerance(res.usage_stats, paths.app_usage, opt.reject_tolerance);
    }

    {
        std::vector<std::string> header;
        Rejector reject{res.calls_stats, paths.calls};
        RowView cols({}, {}, {}, paths.calls);
        bool cols_ready = false;
        for_each_row(paths.calls, opt.delimiter, header, [&](std::size_t lineno, const auto& f) {
            if (!cols_ready) {
                cols = RowView(header, opt.calls_schema,
                               {"user_id", "direction", "kind", "timestamp", "duration_s"},
                               paths.calls);
                cols_ready = true;
            }
            ++res.calls_stats.rows;
            if (!cols.fits(f)) return reject(lineno, "wrong field count");
            CallEvent e;
            e.user_id = cols.get(f, "user_id");
            if (!known_users.count(e.user_id)) return reject(lineno, "unknown user_id");
            const std::string& dir = cols.get(f, "direction");
            if (dir == "made") e.direction = CallDirection::Made;
            else if (dir == "received") e.direction = CallDirection::Received;
            else return reject(lineno, "bad direction '" + dir + "'");
            const std::string& kind = cols.get(f, "kind");
            if (kind == "call") e.kind = CallKind::Call;
            else if (kind == "sms") e.kind = CallKind::Sms;
            else return reject(lineno, "bad kind '" + kind + "'");
            auto ts = parse_timestamp(cols.get(f, "timestamp"));
            if (!ts) return reject(lineno, "bad timestamp");
            e.timestamp = *ts;
            auto dur = parse_double(cols.get(f, "duration_s"));
            if (!dur || *dur < 0) return reject(lineno, "bad duration");
            if (e.kind == CallKind::Sms && *dur != 0) return reject(lineno, "sms with nonzero duration");
            e.duration_s = *dur;
            res.dataset.calls.push_back(std::move(e));
        });
        enforce_tolerance(res.calls_stats, paths.calls, opt.reject_tolerance);
    }

    {
        std::vector<std::string> header;
        Rejector reject{res.loans_stats, paths.loans};
        RowView cols({}, {}, {}, paths.loans);
        bool cols_ready = false;
        for_each_row(paths.loans, opt.delimiter, header, [&](std::size_t lineno, const auto& f) {
            if (!cols_ready) {
                cols = RowView(header, opt.loans_schema,
                               {"user_id", "grant_date", "amount", "repaid_date"}, paths.loans);
                cols_ready = true;
            }
            ++res.loans_stats.rows;
            if (!cols.fits(f)) return reject(lineno, "wrong field count");
            LoanRecord l;
            l.user_id = cols.get(f, "user_id");
            if (!known_users.count(l.user_id)) return reject(lineno, "unknown user_id");
            auto grant = parse_date(cols.get(f, "grant_date"));
            if (!grant) return reject(lineno, "bad grant_date");
            l.grant_date = *grant;
            auto amount = parse_double(cols.get(f, "amount"));
            if (!amount) return reject(lineno, "bad amount");
            if (!opt.amount_menu.empty() &&
                std::find(opt.amount_menu.begin(), opt.amount_menu.end(), *amount) ==
                    opt.amount_menu.end())
                return reject(lineno, "amount not in the configured menu");
            l.amount = *amount;
            const std::string& repaid = cols.get(f, "repaid_date");
            if (!repaid.empty()) {
                auto r = parse_date(repaid);
                if (!r) return reject(lineno, "bad repaid_date");
                if (*r < l.grant_date) return reject(lineno, "repaid_date before grant_date");
                l.repaid_date = *r;
            }
            res.dataset.loans.push_back(std::move(l));
        });
        enforce_tolerance(res.loans_stats, paths.loans, opt.reject_tolerance);
    }

    Log::info("data", "loaded ", res.dataset.users.size(), " users, ", res.dataset.usage.size(),
              " app-usage rows, ", res.dataset.calls.size(), " call events, ",
              res.dataset.loans.size(), " loans (rejected ",
              res.users_stats.rejected + res.usage_stats.rejected + res.calls_stats.rejected +
                  res.loans_stats.rejected,
              " rows)");
    return res;
}

DatasetPaths write_dataset(const Dataset& ds, const std::string& dir, char delim) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    DatasetPaths paths{dir + "/users.tsv", dir + "/app_usage.tsv", dir + "/calls.tsv",
                       dir + "/loans.tsv"};

    {
        std::ofstream out(paths.users);
        out << join_fields({"user_id", "age", "region", "device_app_count"}, delim);
        for (const auto& u : ds.users)
            out << join_fields({u.user_id, u.age ? std::to_string(*u.age) : "",
                                u.region.value_or(""), std::to_string(u.device_app_count)},
                               delim);
    }
    {
        std::ofstream out(paths.app_usage);
        out << join_fields(
            {"user_id", "app_id", "app_category", "uses_per_week", "days_since_last_use"}, delim);
        for (const auto& r : ds.usage)
            out << join_fields({r.user_id, r.app_id, r.app_category,
                                format_double(r.uses_per_week),
                                format_double(r.days_since_last_use)},
                               delim);
    }
    {
        std::ofstream out(paths.calls);
        out << join_fields({"user_id", "direction", "kind", "timestamp", "duration_s"}, delim);
        for (const auto& e : ds.calls)
            out << join_fields({e.user_id,
                                e.direction == CallDirection::Made ? "made" : "received",
                                e.kind == CallKind::Call ? "call" : "sms",
                                to_string(e.timestamp), format_double(e.duration_s)},
                               delim);
    }
    {
        std::ofstream out(paths.loans);
        out << join_fields({"user_id", "grant_date", "amount", "repaid_date"}, delim);
        for (const auto& l : ds.loans)
            out << join_fields({l.user_id, to_string(l.grant_date), format_double(l.amount),
                                l.repaid_date ? to_string(*l.repaid_date) : ""},
                               delim);
    }
    return paths;
}

std::unordered_map<std::string, Label> derive_labels(const std::vector<LoanRecord>& loans,
                                                     int window_days, Date as_of) {
    if (window_days <= 0) throw std::invalid_argument("window_days must be positive");
    std::unordered_map<std::string, Label> labels;
    for (const auto& loan : loans) {
        const bool matured = loan.grant_date + window_days <= as_of;
        auto [it, inserted] = labels.emplace(loan.user_id, Label::Unlabeled);
        if (!matured) continue;
        const bool repaid_in_window =
            loan.repaid_date && (*loan.repaid_date - loan.grant_date) <= window_days;
        if (!repaid_in_window) {
            it->second = Label::Bad;  // one matured default dominates
        } else if (it->second == Label::Unlabeled) {
            it->second = Label::Good;
        }
    }
    return labels;
}

std::optional<Date> data_horizon(const std::vector<LoanRecord>& loans) {
    std::optional<Date> horizon;
    for (const auto& l : loans) {
        Date d = l.repaid_date && *l.repaid_date > l.grant_date ? *l.repaid_date : l.grant_date;
        if (!horizon || d > *horizon) horizon = d;
    }
    return horizon;
}

}  // namespace pseudoscore::data
