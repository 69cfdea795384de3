#pragma once

#include <set>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace pseudoscore::scoring {

enum class FeatureGroup {
    Sociodemographic,
    Behavior,
    Neighborhood,
    Centrality,
    Influence,
    Embedding,
};

std::string to_string(FeatureGroup g);
FeatureGroup parse_feature_group(const std::string& name);  // throws on unknown name

/// Row per user, named columns, one group tag per column. NaN entries mean
/// "value missing"; imputation happens at training time, never here.
class FeatureMatrix {
public:
    FeatureMatrix() = default;
    explicit FeatureMatrix(std::vector<std::string> row_ids);

    int row_count() const { return static_cast<int>(row_ids_.size()); }
    int column_count() const { return static_cast<int>(columns_.size()); }

    const std::vector<std::string>& row_ids() const { return row_ids_; }
    const std::vector<std::string>& column_names() const { return names_; }
    const std::vector<FeatureGroup>& column_groups() const { return groups_; }

    /// Throws on duplicate name or wrong length.
    void add_column(const std::string& name, FeatureGroup group, Eigen::VectorXd values);

    int column_index(const std::string& name) const;  // throws on unknown column
    const Eigen::VectorXd& column(int index) const { return columns_[static_cast<std::size_t>(index)]; }
    Eigen::VectorXd& mutable_column(int index) { return columns_[static_cast<std::size_t>(index)]; }

    /// Column indices whose group tag is in the set, in matrix order.
    std::vector<int> columns_in_groups(const std::set<FeatureGroup>& groups) const;

    /// Dense block of the chosen columns and rows, missing entries as NaN.
    Eigen::MatrixXd dense(const std::vector<int>& column_indices,
                          const std::vector<int>& row_indices) const;

private:
    std::vector<std::string> row_ids_;
    std::vector<std::string> names_;
    std::vector<FeatureGroup> groups_;
    std::vector<Eigen::VectorXd> columns_;
};

/// Tab-separated dump: header "user_id<TAB>columns...", a "#groups" line with
/// the tags, then one row per user with empty cells for missing values.
void write_feature_matrix(const FeatureMatrix& m, const std::string& path);
FeatureMatrix read_feature_matrix(const std::string& path);

}  // namespace pseudoscore::scoring
