#include "pseudoscore/feature_matrix.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>
#include <unordered_set>

#include "pseudoscore/csv.hpp"

namespace pseudoscore::scoring {

std::string to_string(FeatureGroup g) {
    switch (g) {
        case FeatureGroup::Sociodemographic: return "sociodemographic";
        case FeatureGroup::Behavior: return "behavior";
        case FeatureGroup::Neighborhood: return "neighborhood";
        case FeatureGroup::Centrality: return "centrality";
        case FeatureGroup::Influence: return "influence";
        case FeatureGroup::Embedding: return "embedding";
    }
    throw std::logic_error("unreachable feature group");
}

FeatureGroup parse_feature_group(const std::string& name) {
    if (name == "sociodemographic") return FeatureGroup::Sociodemographic;
    if (name == "behavior") return FeatureGroup::Behavior;
    if (name == "neighborhood") return FeatureGroup::Neighborhood;
    if (name == "centrality") return FeatureGroup::Centrality;
    if (name == "influence") return FeatureGroup::Influence;
    if (name == "embedding") return FeatureGroup::Embedding;
    throw std::invalid_argument("unknown feature group: " + name);
}

FeatureMatrix::FeatureMatrix(std::vector<std::string> row_ids) : row_ids_(std::move(row_ids)) {
    std::unordered_set<std::string> seen;
    for (const auto& id : row_ids_)
        if (!seen.insert(id).second)
            throw std::invalid_argument("feature matrix: duplicate row id " + id);
}

void FeatureMatrix::add_column(const std::string& name, FeatureGroup group,
                               Eigen::VectorXd values) {
    if (values.size() != row_count())
        throw std::invalid_argument("feature matrix: column " + name + " has wrong length");
    for (const auto& existing : names_)
        if (existing == name)
            throw std::invalid_argument("feature matrix: duplicate column " + name);
    names_.push_back(name);
    groups_.push_back(group);
    columns_.push_back(std::move(values));
}

int FeatureMatrix::column_index(const std::string& name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
        if (names_[i] == name) return static_cast<int>(i);
    throw std::out_of_range("feature matrix: no column named " + name);
}

std::vector<int> FeatureMatrix::columns_in_groups(const std::set<FeatureGroup>& groups) const {
    std::vector<int> out;
    for (std::size_t i = 0; i < groups_.size(); ++i)
        if (groups.count(groups_[i])) out.push_back(static_cast<int>(i));
    return out;
}

Eigen::MatrixXd FeatureMatrix::dense(const std::vector<int>& column_indices,
                                     const std::vector<int>& row_indices) const {
    Eigen::MatrixXd x(row_indices.size(), column_indices.size());
    for (std::size_t c = 0; c < column_indices.size(); ++c) {
        const auto& col = column(column_indices[c]);
        for (std::size_t r = 0; r < row_indices.size(); ++r)
            x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                col[row_indices[r]];
    }
    return x;
}

void write_feature_matrix(const FeatureMatrix& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    std::vector<std::string> header{"user_id"};
    for (const auto& name : m.column_names()) header.push_back(name);
    out << join_fields(header, '\t');

    std::vector<std::string> groups{"#groups"};
    for (FeatureGroup g : m.column_groups()) groups.push_back(to_string(g));
    out << join_fields(groups, '\t');

    for (int r = 0; r < m.row_count(); ++r) {
        std::vector<std::string> row{m.row_ids()[static_cast<std::size_t>(r)]};
        for (int c = 0; c < m.column_count(); ++c) {
            const double v = m.column(c)[r];
            row.push_back(std::isnan(v) ? std::string() : format_double(v));
        }
        out << join_fields(row, '\t');
    }
    if (!out) throw std::runtime_error("write failed for " + path);
}

FeatureMatrix read_feature_matrix(const std::string& path) {
    std::vector<std::string> header;
    std::vector<FeatureGroup> groups;
    std::vector<std::string> row_ids;
    std::vector<std::vector<double>> rows;
    for_each_row(path, '\t', header, [&](std::size_t line, const std::vector<std::string>& fields) {
        if (fields.size() != header.size())
            throw std::runtime_error(path + ": wrong field count on line " + std::to_string(line));
        if (!fields.empty() && fields[0] == "#groups") {
            for (std::size_t i = 1; i < fields.size(); ++i)
                groups.push_back(parse_feature_group(fields[i]));
            return;
        }
        row_ids.push_back(fields[0]);
        std::vector<double> row(fields.size() - 1);
        for (std::size_t i = 1; i < fields.size(); ++i)
            row[i - 1] = fields[i].empty() ? std::nan("") : std::stod(fields[i]);
        rows.push_back(std::move(row));
    });
    if (header.size() < 1 || header[0] != "user_id")
        throw std::runtime_error(path + ": not a feature matrix file");
    if (groups.size() != header.size() - 1)
        throw std::runtime_error(path + ": missing or malformed #groups line");

    FeatureMatrix m(std::move(row_ids));
    for (std::size_t c = 0; c + 1 < header.size(); ++c) {
        Eigen::VectorXd col(m.row_count());
        for (int r = 0; r < m.row_count(); ++r) col[r] = rows[static_cast<std::size_t>(r)][c];
        m.add_column(header[c + 1], groups[c], std::move(col));
    }
    return m;
}

}  // namespace pseudoscore::scoring
