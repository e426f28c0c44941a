#pragma once

#include "exionet/flow_matrix.hpp"
#include "exionet/mrio_ingest.hpp"
#include "exionet/timeframe.hpp"

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace exionet::footprint {

inline constexpr double default_epsilon_x = 1e-9;

/// Reciprocal condition numbers of (I - A) below this are rejected as near-singular.
inline constexpr double min_reciprocal_condition = 1e-13;

/// x_i = sum_j Z_ij + sum_s Y_is, accumulated left to right.
Eigen::VectorXd compute_output(const Eigen::MatrixXd& Z, const Eigen::MatrixXd& Y);

/// Direct requirements A = Z diag(x)^-1. Columns with x_j <= epsilon_x are zeroed
/// and listed in zero_output_sectors.
struct TechnologyModel {
    Eigen::MatrixXd A;
    std::vector<Eigen::Index> zero_output_sectors;
};

TechnologyModel technical_coefficients(const Eigen::MatrixXd& Z, const Eigen::VectorXd& x, double epsilon_x = default_epsilon_x);

/// LU factorisation of (I - A). Construction fails with NumericalError when the system
/// is singular or its reciprocal condition estimate drops below min_reciprocal_condition.
/// Read-only after construction, so one instance may serve several right-hand sides
/// concurrently.
class LeontiefSolver {
public:
    explicit LeontiefSolver(const Eigen::MatrixXd& A);

    /// Solves (I - A) X = rhs.
    Eigen::MatrixXd solve(const Eigen::MatrixXd& rhs) const;
    /// Materialises L = (I - A)^-1.
    Eigen::MatrixXd inverse() const;

    double reciprocal_condition() const { return rcond_; }
    double condition_estimate() const { return 1.0 / rcond_; }
    Eigen::Index size() const { return lu_.rows(); }

private:
    Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
    double rcond_ = 0.0;
};

Eigen::MatrixXd leontief_inverse(const Eigen::MatrixXd& A);

struct Intensity {
    Eigen::VectorXd q;
    /// Sectors with nonzero direct amount but x_i <= epsilon_x (intensity forced to 0).
    std::size_t dropped_sectors = 0;
};

/// q_i = direct_i / x_i where x_i > epsilon_x, else 0.
Intensity intensity(const Eigen::VectorXd& direct, const Eigen::VectorXd& x, double epsilon_x = default_epsilon_x);

/// F(r, s) = sum over sectors i of region r of (diag(q) L Y)(i, s), with an explicit L.
RegionFlowMatrix footprint_flows(const Eigen::VectorXd& q, const Eigen::MatrixXd& L, const Eigen::MatrixXd& Y,
                                 const ingest::RegionSchema& schema, QuantityKind kind, const Timeframe& timeframe = {});

/// Same quantity through the factorisation, without forming L.
RegionFlowMatrix footprint_flows(const Eigen::VectorXd& q, const LeontiefSolver& solver, const Eigen::MatrixXd& Y,
                                 const ingest::RegionSchema& schema, QuantityKind kind, const Timeframe& timeframe = {});

/// Entrywise mean or sum of yearly flows covering exactly [start_year, end_year].
RegionFlowMatrix period_aggregate(std::span<const RegionFlowMatrix> flows, const Period& period);

struct YearDiagnostics {
    int year = 0;
    std::size_t zero_output_sectors = 0;
    std::size_t emission_intensity_warnings = 0;
    std::size_t value_intensity_warnings = 0;
    double condition_estimate = 0.0;
};

struct YearFootprints {
    RegionFlowMatrix emission;
    RegionFlowMatrix value;
    YearDiagnostics diagnostics;
};

/// Full chain for one snapshot: A, factorisation, intensities and both flow matrices
/// at native region resolution. The factorisation is shared by the two kinds.
YearFootprints compute_year(const ingest::MrioSnapshot& snapshot, double epsilon_x = default_epsilon_x);

} // namespace exionet::footprint
