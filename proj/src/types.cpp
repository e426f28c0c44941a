#include "exionet/errors.hpp"
#include "exionet/flow_matrix.hpp"
#include "exionet/timeframe.hpp"

namespace exionet {

std::vector<Period> default_periods(PeriodMode mode)
{
    return {
        {"P1", 1995, 2001, mode},
        {"P2", 2002, 2008, mode},
        {"P3", 2009, 2015, mode},
        {"P4", 2016, 2022, mode},
    };
}

std::string to_string(PeriodMode mode)
{
    return mode == PeriodMode::mean ? "mean" : "sum";
}

PeriodMode parse_period_mode(const std::string& text)
{
    if (text == "mean") {
        return PeriodMode::mean;
    }
    if (text == "sum") {
        return PeriodMode::sum;
    }
    throw UsageError("unknown period mode '" + text + "' (expected mean|sum)");
}

std::string to_string(QuantityKind kind)
{
    return kind == QuantityKind::emission ? "emission" : "value";
}

QuantityKind parse_quantity_kind(const std::string& text)
{
    if (text == "emission") {
        return QuantityKind::emission;
    }
    if (text == "value") {
        return QuantityKind::value;
    }
    throw UsageError("unknown quantity kind '" + text + "' (expected emission|value)");
}

const char* unit_of(QuantityKind kind)
{
    return kind == QuantityKind::emission ? "Mt" : "M.EUR";
}

void RegionFlowMatrix::check_shape() const
{
    const auto m = static_cast<Eigen::Index>(labels.size());
    if (F.rows() != F.cols() || F.rows() != m) {
        throw DataError("flow matrix " + to_string(kind) + "/" + timeframe.label + " is " + std::to_string(F.rows()) + "x" +
                        std::to_string(F.cols()) + " but carries " + std::to_string(m) + " labels");
    }
}

} // namespace exionet
