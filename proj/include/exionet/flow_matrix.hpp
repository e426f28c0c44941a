#pragma once

#include "exionet/timeframe.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace exionet {

enum class QuantityKind { emission, value };

std::string to_string(QuantityKind kind);
QuantityKind parse_quantity_kind(const std::string& text);
/// "Mt" or "M.EUR".
const char* unit_of(QuantityKind kind);

/// Region-to-region footprint flows. F(r, s) is the footprint occurring in region r
/// that is attributable to final demand of region s.
struct RegionFlowMatrix {
    QuantityKind kind = QuantityKind::emission;
    Timeframe timeframe;
    std::vector<std::string> labels;
    Eigen::MatrixXd F;

    Eigen::Index size() const { return F.rows(); }
    /// Throws DataError when F is not square or does not match the labels.
    void check_shape() const;
};

} // namespace exionet
