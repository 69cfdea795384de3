#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pseudoscore/dataset.hpp"
#include "pseudoscore/records.hpp"

namespace pseudoscore::data {

struct CategorySpec {
    std::string name;
    double share = 0.0;   // fraction of the app catalog
    bool risky = false;   // category participates in the planted default signal
};

/// Parameters of the synthetic microlending population.
///
/// The planted signal works through a latent user type: a `risky_user_fraction`
/// of users is "risky". With signal strength s, risky users concentrate their
/// app adoption on the risky categories and carry a higher default
/// probability; at s = 0 both adoption and default are independent of the
/// type, so app usage carries no label information at all. The overall
/// default rate stays at `base_default_rate` for every s.
struct SynthSpec {
    int user_count = 1000;
    int app_count = 200;
    std::vector<CategorySpec> categories = {
        {"social", 0.22, false}, {"messaging", 0.18, false}, {"games", 0.18, true},
        {"finance", 0.12, false}, {"utility", 0.15, false},  {"gambling", 0.15, true},
    };
    double signal_strength = 0.5;     // s in [0,1]
    double base_default_rate = 0.15;
    double risky_user_fraction = 0.3;
    double type_separation = 0.5;     // default-probability gap between types at s = 1
    double mean_apps_per_user = 6.0;
    double popularity_exponent = 0.4; // within-category Zipf skew
    double unlabeled_fraction = 0.05; // users with no matured loan
    double calls_per_user = 40.0;
    double night_shift = 0.2;         // extra night-call share of risky users, scaled by s
    Date period_start = make_date(2025, 1, 1);
    int period_days = 365;
    std::vector<double> amount_menu = {500, 1000, 2000, 5000, 10000};
};

/// Generates a full four-table dataset. Deterministic in (spec, seed):
/// two calls with equal arguments produce identical record lists, and
/// write_dataset therefore byte-identical files. Throws std::invalid_argument
/// for user_count < 10 or out-of-range spec values.
Dataset generate_synthetic(const SynthSpec& spec, std::uint64_t seed);

}  // namespace pseudoscore::data
