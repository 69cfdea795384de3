#pragma once

#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "pseudoscore/records.hpp"

namespace pseudoscore::data {

/// Paths of the four input files.
struct DatasetPaths {
    std::string users;
    std::string app_usage;
    std::string calls;
    std::string loans;
};

/// Column-name mapping: canonical field name -> column name in the file.
/// Fields absent from the map use the canonical name itself.
using ColumnMap = std::map<std::string, std::string>;

struct LoadOptions {
    char delimiter = '\t';
    double reject_tolerance = 0.01;   // fraction of malformed rows tolerated per file
    std::vector<double> amount_menu = {500, 1000, 2000, 5000, 10000};
    ColumnMap users_schema;
    ColumnMap app_usage_schema;
    ColumnMap calls_schema;
    ColumnMap loans_schema;
};

struct FileLoadStats {
    std::size_t rows = 0;      // data rows seen (excluding header)
    std::size_t rejected = 0;
    std::vector<std::string> reject_reasons;  // first few, "line N: reason"
};

struct LoadResult {
    Dataset dataset;
    FileLoadStats users_stats, usage_stats, calls_stats, loans_stats;
};

/// Loads and validates the four dataset files. Rows violating an invariant
/// are rejected and logged; a file whose reject fraction exceeds the
/// tolerance aborts the load with std::runtime_error.
LoadResult load_dataset(const DatasetPaths& paths, const LoadOptions& options);

/// Writes a dataset in the canonical four-file format (same format the
/// loader reads). Returns the four file paths.
DatasetPaths write_dataset(const Dataset& ds, const std::string& dir, char delimiter = '\t');

/// Good/Bad/Unlabeled per user from their loan history. Bad iff some loan
/// that matured by `as_of` (grant + window <= as_of) was not repaid within
/// `window_days` of its grant; Good iff all matured loans were repaid in the
/// window and at least one loan matured; Unlabeled otherwise. Pure function
/// of its inputs; loan order never matters.
std::unordered_map<std::string, Label> derive_labels(const std::vector<LoanRecord>& loans,
                                                     int window_days, Date as_of);

/// Latest of all grant/repaid dates; the default `as_of` horizon.
/// Returns nullopt for an empty loan list.
std::optional<Date> data_horizon(const std::vector<LoanRecord>& loans);

}  // namespace pseudoscore::data
