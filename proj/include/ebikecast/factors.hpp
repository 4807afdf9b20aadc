#pragma once

// Annual driver table: one row per year, a fixed set of feature columns and
// the sales target. Shared between the CSV layer and the forest regressor.

#include <span>
#include <string>
#include <vector>

namespace ebikecast {

class FactorTable {
public:
    FactorTable() = default;

    /// rows_features is row-major, rows.size() * feature_names.size() long.
    FactorTable(std::vector<int> years, std::vector<std::string> feature_names,
                std::vector<double> rows_features, std::vector<double> target);

    std::size_t n_rows() const { return years_.size(); }
    std::size_t n_features() const { return feature_names_.size(); }

    int year(std::size_t row) const { return years_[row]; }
    double feature(std::size_t row, std::size_t col) const {
        return features_[row * n_features() + col];
    }
    double target(std::size_t row) const { return target_[row]; }

    std::span<const int> years() const { return years_; }
    std::span<const std::string> feature_names() const { return feature_names_; }
    std::span<const double> targets() const { return target_; }

    /// Row subset in the given order (used by train/test splitting and
    /// bootstrap resampling; indices may repeat).
    FactorTable select(std::span<const std::size_t> rows) const;

private:
    std::vector<int> years_;
    std::vector<std::string> feature_names_;
    std::vector<double> features_;  // row-major
    std::vector<double> target_;
};

}  // namespace ebikecast
