#include "ebikecast/factors.hpp"

#include <cmath>

#include "ebikecast/error.hpp"

namespace ebikecast {

FactorTable::FactorTable(std::vector<int> years, std::vector<std::string> feature_names,
                         std::vector<double> rows_features, std::vector<double> target)
    : years_(std::move(years)),
      feature_names_(std::move(feature_names)),
      features_(std::move(rows_features)),
      target_(std::move(target)) {
    if (features_.size() != years_.size() * feature_names_.size() ||
        target_.size() != years_.size()) {
        throw Error(errc::precondition, "factor table dimensions are inconsistent");
    }
    for (double v : features_) {
        if (!std::isfinite(v)) throw Error(errc::bad_value, "non-finite feature value");
    }
    for (double v : target_) {
        if (!std::isfinite(v)) throw Error(errc::bad_value, "non-finite target value");
    }
}

FactorTable FactorTable::select(std::span<const std::size_t> rows) const {
    std::vector<int> years;
    std::vector<double> features;
    std::vector<double> target;
    years.reserve(rows.size());
    features.reserve(rows.size() * n_features());
    target.reserve(rows.size());
    for (std::size_t r : rows) {
        years.push_back(years_[r]);
        const double* row = features_.data() + r * n_features();
        features.insert(features.end(), row, row + n_features());
        target.push_back(target_[r]);
    }
    return FactorTable(std::move(years), feature_names_, std::move(features), std::move(target));
}

}  // namespace ebikecast
