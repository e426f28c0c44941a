#pragma once

#include "exionet/flow_matrix.hpp"
#include "exionet/timeframe.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace exionet::equality {

/// net_r = sum_{s != r} F(r, s) - sum_{s != r} F(s, r). Domestic flows are excluded.
Eigen::VectorXd net_flows(const RegionFlowMatrix& F);

struct NetFlowVector {
    std::vector<std::string> labels;
    Eigen::VectorXd e_net; ///< Mt
    Eigen::VectorXd v_net; ///< M.EUR
    Timeframe timeframe;
};

/// Pairs the emission and value nets of one timeframe. Labels and timeframes must agree.
NetFlowVector make_net_flows(const RegionFlowMatrix& emission, const RegionFlowMatrix& value);

/// f(x) = 2 (x - min) / (max - min) - 1; a constant vector maps to zeros.
Eigen::VectorXd minmax_scale(const Eigen::VectorXd& v);

/// advantage_high: f(f(v_net) - f(e_net)), so the largest surplus with the smallest
/// emission burden scores +1. literal_eq8: f(f(e_net) - f(v_net)).
enum class Orientation { advantage_high, literal_eq8 };

std::string to_string(Orientation orientation);
Orientation parse_orientation(const std::string& text);

Eigen::VectorXd eeei(const Eigen::VectorXd& e_net, const Eigen::VectorXd& v_net, Orientation orientation = Orientation::advantage_high);

/// |a - b|.
double eeei_distance(double a, double b);

/// Pairwise |EEEI_r - EEEI_s|.
Eigen::MatrixXd distance_matrix(const Eigen::VectorXd& eeei_values);

enum class Quadrant {
    Q1, ///< emission exporter with trade surplus
    Q2, ///< emission importer with trade surplus
    Q3, ///< emission importer with trade deficit
    Q4, ///< emission exporter with trade deficit
};

std::string to_string(Quadrant quadrant);
Quadrant parse_quadrant(const std::string& text);

/// Zeros resolve to the positive side, so (0, 0) is Q1.
Quadrant classify_quadrant(double e_net, double v_net);

struct EeeiRecord {
    std::string region;
    std::string timeframe;
    double e_net = 0.0;
    double v_net = 0.0;
    double scaled_e = 0.0;
    double scaled_v = 0.0;
    double eeei = 0.0;
    Quadrant quadrant = Quadrant::Q1;
};

/// One record per region. scaled_e = f(e_net) and scaled_v = f(v_net) under either orientation.
std::vector<EeeiRecord> eeei_records(const NetFlowVector& nets, Orientation orientation = Orientation::advantage_high);

} // namespace exionet::equality
