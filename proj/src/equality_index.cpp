#include "exionet/equality_index.hpp"

#include "exionet/errors.hpp"

#include <algorithm>
#include <cmath>

namespace exionet::equality {

Eigen::VectorXd net_flows(const RegionFlowMatrix& F)
{
    F.check_shape();
    const auto m = F.size();
    Eigen::VectorXd net(m);
    for (Eigen::Index r = 0; r < m; ++r) {
        double exports = 0.0;
        double imports = 0.0;
        for (Eigen::Index s = 0; s < m; ++s) {
            if (s != r) {
                exports += F.F(r, s);
                imports += F.F(s, r);
            }
        }
        net[r] = exports - imports;
    }
    return net;
}

NetFlowVector make_net_flows(const RegionFlowMatrix& emission, const RegionFlowMatrix& value)
{
    if (emission.labels != value.labels) {
        throw DataError("emission and value flows carry different region labels");
    }
    if (!(emission.timeframe == value.timeframe)) {
        throw DataError("emission flows are for " + emission.timeframe.label + " but value flows are for " + value.timeframe.label);
    }
    return {emission.labels, net_flows(emission), net_flows(value), emission.timeframe};
}

Eigen::VectorXd minmax_scale(const Eigen::VectorXd& v)
{
    if (v.size() == 0) {
        return v;
    }
    const double lo = v.minCoeff();
    const double hi = v.maxCoeff();
    if (!(hi > lo)) {
        return Eigen::VectorXd::Zero(v.size());
    }
    Eigen::VectorXd out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        // Endpoints are pinned so rounding never leaves [-1, 1].
        if (v[i] == lo) {
            out[i] = -1.0;
        } else if (v[i] == hi) {
            out[i] = 1.0;
        } else {
            out[i] = std::clamp(2.0 * (v[i] - lo) / (hi - lo) - 1.0, -1.0, 1.0);
        }
    }
    return out;
}

std::string to_string(Orientation orientation)
{
    return orientation == Orientation::advantage_high ? "advantage_high" : "literal_eq8";
}

Orientation parse_orientation(const std::string& text)
{
    if (text == "advantage_high") {
        return Orientation::advantage_high;
    }
    if (text == "literal_eq8") {
        return Orientation::literal_eq8;
    }
    throw UsageError("unknown orientation '" + text + "' (expected advantage_high|literal_eq8)");
}

Eigen::VectorXd eeei(const Eigen::VectorXd& e_net, const Eigen::VectorXd& v_net, Orientation orientation)
{
    if (e_net.size() != v_net.size()) {
        throw DataError("eeei: e_net has " + std::to_string(e_net.size()) + " entries but v_net has " + std::to_string(v_net.size()));
    }
    const Eigen::VectorXd se = minmax_scale(e_net);
    const Eigen::VectorXd sv = minmax_scale(v_net);
    const Eigen::VectorXd d = orientation == Orientation::advantage_high ? Eigen::VectorXd(sv - se) : Eigen::VectorXd(se - sv);
    return minmax_scale(d);
}

double eeei_distance(double a, double b)
{
    return std::abs(a - b);
}

Eigen::MatrixXd distance_matrix(const Eigen::VectorXd& eeei_values)
{
    const auto m = eeei_values.size();
    Eigen::MatrixXd out(m, m);
    for (Eigen::Index r = 0; r < m; ++r) {
        for (Eigen::Index s = 0; s < m; ++s) {
            out(r, s) = eeei_distance(eeei_values[r], eeei_values[s]);
        }
    }
    return out;
}

std::string to_string(Quadrant quadrant)
{
    switch (quadrant) {
    case Quadrant::Q1: return "Q1";
    case Quadrant::Q2: return "Q2";
    case Quadrant::Q3: return "Q3";
    case Quadrant::Q4: return "Q4";
    }
    return "Q1";
}

Quadrant parse_quadrant(const std::string& text)
{
    if (text == "Q1") return Quadrant::Q1;
    if (text == "Q2") return Quadrant::Q2;
    if (text == "Q3") return Quadrant::Q3;
    if (text == "Q4") return Quadrant::Q4;
    throw DataError("unknown quadrant '" + text + "'");
}

Quadrant classify_quadrant(double e_net, double v_net)
{
    const bool exporter = e_net >= 0.0;
    const bool surplus = v_net >= 0.0;
    if (surplus) {
        return exporter ? Quadrant::Q1 : Quadrant::Q2;
    }
    return exporter ? Quadrant::Q4 : Quadrant::Q3;
}

std::vector<EeeiRecord> eeei_records(const NetFlowVector& nets, Orientation orientation)
{
    const auto m = static_cast<Eigen::Index>(nets.labels.size());
    if (nets.e_net.size() != m || nets.v_net.size() != m) {
        throw DataError("eeei_records: net flow vectors do not match the labels");
    }
    const Eigen::VectorXd se = minmax_scale(nets.e_net);
    const Eigen::VectorXd sv = minmax_scale(nets.v_net);
    const Eigen::VectorXd index = eeei(nets.e_net, nets.v_net, orientation);
    std::vector<EeeiRecord> records;
    records.reserve(nets.labels.size());
    for (Eigen::Index r = 0; r < m; ++r) {
        records.push_back({nets.labels[static_cast<std::size_t>(r)], nets.timeframe.label, nets.e_net[r], nets.v_net[r], se[r], sv[r], index[r],
                           classify_quadrant(nets.e_net[r], nets.v_net[r])});
    }
    return records;
}

} // namespace exionet::equality
