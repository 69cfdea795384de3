#include "pseudoscore/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <unordered_set>

#include "pseudoscore/log.hpp"
#include "pseudoscore/rng.hpp"

namespace pseudoscore::data {

namespace {

std::string padded_id(char prefix, int i, int width) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%c%0*d", prefix, width, i);
    return buf;
}

void validate(const SynthSpec& spec) {
    if (spec.user_count < 10) throw std::invalid_argument("synth: user_count must be >= 10");
    if (spec.app_count < 2) throw std::invalid_argument("synth: app_count must be >= 2");
    if (spec.signal_strength < 0 || spec.signal_strength > 1)
        throw std::invalid_argument("synth: signal_strength must be in [0,1]");
    if (spec.base_default_rate <= 0 || spec.base_default_rate >= 1)
        throw std::invalid_argument("synth: base_default_rate must be in (0,1)");
    if (spec.risky_user_fraction <= 0 || spec.risky_user_fraction >= 1)
        throw std::invalid_argument("synth: risky_user_fraction must be in (0,1)");
    if (spec.categories.empty()) throw std::invalid_argument("synth: categories empty");
    double share = 0.0;
    bool any_risky = false;
    for (const auto& c : spec.categories) {
        if (c.share < 0) throw std::invalid_argument("synth: negative category share");
        share += c.share;
        any_risky |= c.risky;
    }
    if (std::fabs(share - 1.0) > 1e-9)
        throw std::invalid_argument("synth: category shares must sum to 1");
    if (!any_risky && spec.signal_strength > 0)
        throw std::invalid_argument("synth: signal_strength > 0 needs a risky category");
    if (spec.amount_menu.empty()) throw std::invalid_argument("synth: empty amount menu");
    if (spec.period_days < 120) throw std::invalid_argument("synth: period_days must be >= 120");
}

struct AppCatalog {
    std::vector<std::string> ids;
    std::vector<std::string> category;
    std::vector<char> risky;
    // cumulative popularity weights over the risky / safe pools
    std::vector<int> risky_pool, safe_pool;
    std::vector<double> risky_cum, safe_cum;
    double risky_mass = 0.0;  // popularity share of the risky pool
};

AppCatalog build_catalog(const SynthSpec& spec) {
    AppCatalog cat;
    const int m = spec.app_count;
    // apportion app counts per category (largest remainder)
    std::vector<int> counts(spec.categories.size(), 0);
    {
        std::vector<std::pair<double, std::size_t>> rema;
        int assigned = 0;
        for (std::size_t c = 0; c < spec.categories.size(); ++c) {
            const double exact = spec.categories[c].share * m;
            counts[c] = static_cast<int>(exact);
            assigned += counts[c];
            rema.emplace_back(exact - counts[c], c);
        }
        std::stable_sort(rema.begin(), rema.end(),
                         [](const auto& a, const auto& b) { return a.first > b.first; });
        for (int i = 0; assigned < m; ++i, ++assigned) ++counts[rema[i % rema.size()].second];
    }
    const int width = m >= 10000 ? 5 : 4;
    int next = 0;
    double total_mass = 0.0;
    for (std::size_t c = 0; c < spec.categories.size(); ++c) {
        for (int r = 0; r < counts[c]; ++r) {
            const int idx = next++;
            cat.ids.push_back(padded_id('a', idx, width));
            cat.category.push_back(spec.categories[c].name);
            cat.risky.push_back(spec.categories[c].risky ? 1 : 0);
            const double w = std::pow(static_cast<double>(r + 1), -spec.popularity_exponent);
            total_mass += w;
            if (spec.categories[c].risky) {
                cat.risky_pool.push_back(idx);
                cat.risky_cum.push_back((cat.risky_cum.empty() ? 0.0 : cat.risky_cum.back()) + w);
                cat.risky_mass += w;
            } else {
                cat.safe_pool.push_back(idx);
                cat.safe_cum.push_back((cat.safe_cum.empty() ? 0.0 : cat.safe_cum.back()) + w);
            }
        }
    }
    cat.risky_mass /= total_mass;
    return cat;
}

}  // namespace

Dataset generate_synthetic(const SynthSpec& spec, std::uint64_t seed) {
    validate(spec);
    const int n = spec.user_count;
    const double s = spec.signal_strength;
    const double f = spec.risky_user_fraction;
    const AppCatalog cat = build_catalog(spec);

    // Adoption mixture. At s = 0 both types draw from the risky pool with
    // probability equal to its popularity mass, which makes adoption exactly
    // independent of the type. The marginal risky share is held at the base
    // mass for every s so network density does not drift with the signal.
    const double base = cat.risky_mass;
    const double rho_risky = std::min(0.98, base + s * (0.92 - base));
    const double rho_safe = std::clamp((base - f * rho_risky) / (1.0 - f), 0.0, 1.0);

    // Type-conditional default probabilities; mixture mean stays at the base rate.
    const double gap = s * spec.type_separation;
    const double p_bad_risky = std::clamp(spec.base_default_rate + gap * (1.0 - f), 0.005, 0.98);
    const double p_bad_safe = std::clamp(spec.base_default_rate - gap * f, 0.005, 0.98);

    Rng rng_user(derive_seed(seed, "synth.users"));
    Rng rng_adopt(derive_seed(seed, "synth.adoption"));
    Rng rng_call(derive_seed(seed, "synth.calls"));
    Rng rng_loan(derive_seed(seed, "synth.loans"));

    Dataset ds;
    ds.users.reserve(n);
    std::vector<char> risky_type(n);
    const int uwidth = n >= 100000 ? 7 : 6;

    static const char* kRegions[] = {"R1", "R2", "R3", "R4", "R5", "R6", "R7", "R8"};

    for (int i = 0; i < n; ++i) {
        UserRecord u;
        u.user_id = padded_id('u', i, uwidth);
        if (!rng_user.bernoulli(0.05)) u.age = static_cast<int>(rng_user.uniform_int(18, 75));
        if (!rng_user.bernoulli(0.02))
            u.region = kRegions[rng_user.uniform_int(0, 7)];
        risky_type[i] = rng_user.bernoulli(f) ? 1 : 0;
        ds.users.push_back(std::move(u));
    }

    // App adoption and usage intensity.
    for (int i = 0; i < n; ++i) {
        const double rho = risky_type[i] ? rho_risky : rho_safe;
        int k = 1 + rng_adopt.poisson(std::max(0.0, spec.mean_apps_per_user - 1.0));
        k = std::min({k, spec.app_count,
                      static_cast<int>(4 * spec.mean_apps_per_user) + 1});
        std::unordered_set<int> adopted;
        int guard = 0;
        while (static_cast<int>(adopted.size()) < k && guard < 50 * k + 100) {
            ++guard;
            const bool pick_risky =
                !cat.risky_cum.empty() && (cat.safe_cum.empty() || rng_adopt.bernoulli(rho));
            const auto& pool = pick_risky ? cat.risky_pool : cat.safe_pool;
            const auto& cum = pick_risky ? cat.risky_cum : cat.safe_cum;
            const int app = pool[rng_adopt.categorical_from_cumulative(cum)];
            if (!adopted.insert(app).second) continue;
            AppUsage row;
            row.user_id = ds.users[i].user_id;
            row.app_id = cat.ids[app];
            row.app_category = cat.category[app];
            const double freq = std::exp(0.7 * rng_adopt.normal() + std::log(2.5));
            row.uses_per_week = std::round(std::max(0.1, std::min(freq, 70.0)) * 100.0) / 100.0;
            const double rec = -std::log(1.0 - rng_adopt.uniform01()) * 7.0 /
                               std::max(0.5, row.uses_per_week);
            row.days_since_last_use = std::round(std::min(rec, 90.0) * 100.0) / 100.0;
            ds.usage.push_back(std::move(row));
        }
        ds.users[i].device_app_count =
            static_cast<int>(adopted.size()) + rng_adopt.poisson(5.0);
    }

    // Call and text events. Risky users shift a share of activity into the
    // night block when the signal is on; everything else is type-independent.
    for (int i = 0; i < n; ++i) {
        const double p_night = 0.08 + (risky_type[i] ? s * spec.night_shift : 0.0);
        const int events = rng_call.poisson(spec.calls_per_user);
        for (int e = 0; e < events; ++e) {
            CallEvent ev;
            ev.user_id = ds.users[i].user_id;
            ev.direction = rng_call.bernoulli(0.5) ? CallDirection::Made : CallDirection::Received;
            ev.kind = rng_call.bernoulli(0.3) ? CallKind::Sms : CallKind::Call;
            const int day = static_cast<int>(rng_call.uniform_int(0, spec.period_days - 1));
            const int sec = rng_call.bernoulli(p_night)
                                ? static_cast<int>(rng_call.uniform_int(0, 6 * 3600 - 1))
                                : static_cast<int>(rng_call.uniform_int(6 * 3600, 86399));
            ev.timestamp = Timestamp{
                (static_cast<std::int64_t>(spec.period_start.days) + day) * 86400 + sec};
            ev.duration_s = ev.kind == CallKind::Sms
                                ? 0.0
                                : std::round(10.0 - 180.0 * std::log(1.0 - rng_call.uniform01()));
            ds.calls.push_back(std::move(ev));
        }
    }

    // Loans. Grant dates of labeled users leave room for the 60-day label
    // window plus late repayments, so every labeled loan matures within the
    // generated horizon. At most one open loan per user, loans sequential.
    const int label_horizon = spec.period_days - 130;
    std::vector<int> open_loan_users;
    int realized_bad = 0, realized_good = 0;
    for (int i = 0; i < n; ++i) {
        if (rng_loan.bernoulli(spec.unlabeled_fraction)) {
            if (rng_loan.bernoulli(0.5)) open_loan_users.push_back(i);  // else: no loans at all
            continue;
        }
        const bool bad = rng_loan.bernoulli(risky_type[i] ? p_bad_risky : p_bad_safe);
        (bad ? realized_bad : realized_good)++;
        const int loan_count = 1 + rng_loan.poisson(0.8);
        // Sequential grant days, next loan only after the previous is closed.
        std::vector<std::pair<int, int>> grants;  // (grant day, on-time repay offset)
        int day = static_cast<int>(rng_loan.uniform_int(0, label_horizon));
        for (int l = 0; l < loan_count && day <= label_horizon; ++l) {
            const int dur = static_cast<int>(rng_loan.uniform_int(5, 55));
            grants.emplace_back(day, dur);
            day += dur + 1 + rng_loan.poisson(15.0);
        }
        for (std::size_t l = 0; l < grants.size(); ++l) {
            LoanRecord loan;
            loan.user_id = ds.users[i].user_id;
            loan.grant_date = spec.period_start + grants[l].first;
            loan.amount = spec.amount_menu[static_cast<std::size_t>(std::min<double>(
                spec.amount_menu.size() - 1.0,
                std::floor(std::pow(rng_loan.uniform01(), 1.6) * spec.amount_menu.size())))];
            if (bad && l == grants.size() - 1) {  // the last emitted loan defaults
                if (rng_loan.bernoulli(0.4))      // late repayment, still a default
                    loan.repaid_date =
                        loan.grant_date + static_cast<int>(rng_loan.uniform_int(61, 120));
                // else never repaid
            } else {
                loan.repaid_date = loan.grant_date + grants[l].second;
            }
            ds.loans.push_back(loan);
        }
    }
    // Users carrying one not-yet-matured loan; grant within 45 days of the horizon.
    const Date horizon = spec.period_start + (spec.period_days - 1);
    for (int i : open_loan_users) {
        LoanRecord loan;
        loan.user_id = ds.users[i].user_id;
        loan.grant_date = horizon + static_cast<int>(-rng_loan.uniform_int(5, 45));
        loan.amount = spec.amount_menu[static_cast<std::size_t>(
            rng_loan.uniform_int(0, static_cast<std::int64_t>(spec.amount_menu.size()) - 1))];
        ds.loans.push_back(loan);
    }

    Log::info("synth", "generated ", n, " users, ", ds.usage.size(), " usage rows, ",
              ds.calls.size(), " call events, ", ds.loans.size(), " loans; planted default rate ",
              realized_bad + realized_good
                  ? static_cast<double>(realized_bad) / (realized_bad + realized_good)
                  : 0.0);
    return ds;
}

}  // namespace pseudoscore::data
