#include "exionet/footprint_engine.hpp"

#include "exionet/errors.hpp"

#include <map>
#include <sstream>

namespace exionet::footprint {

Eigen::VectorXd compute_output(const Eigen::MatrixXd& Z, const Eigen::MatrixXd& Y)
{
    if (Z.rows() != Z.cols() || Y.rows() != Z.rows()) {
        throw DataError("compute_output: Z is " + std::to_string(Z.rows()) + "x" + std::to_string(Z.cols()) + " and Y has " +
                        std::to_string(Y.rows()) + " rows");
    }
    Eigen::VectorXd x(Z.rows());
    for (Eigen::Index i = 0; i < Z.rows(); ++i) {
        double sum = 0.0;
        for (Eigen::Index j = 0; j < Z.cols(); ++j) {
            sum += Z(i, j);
        }
        for (Eigen::Index s = 0; s < Y.cols(); ++s) {
            sum += Y(i, s);
        }
        x[i] = sum;
    }
    return x;
}

TechnologyModel technical_coefficients(const Eigen::MatrixXd& Z, const Eigen::VectorXd& x, double epsilon_x)
{
    if (Z.rows() != Z.cols() || Z.cols() != x.size()) {
        throw DataError("technical_coefficients: Z is " + std::to_string(Z.rows()) + "x" + std::to_string(Z.cols()) + " but x has " +
                        std::to_string(x.size()) + " entries");
    }
    TechnologyModel model;
    model.A = Eigen::MatrixXd::Zero(Z.rows(), Z.cols());
    for (Eigen::Index j = 0; j < Z.cols(); ++j) {
        if (x[j] > epsilon_x) {
            model.A.col(j) = Z.col(j) / x[j];
        } else {
            model.zero_output_sectors.push_back(j);
        }
    }
    return model;
}

LeontiefSolver::LeontiefSolver(const Eigen::MatrixXd& A)
{
    if (A.rows() != A.cols()) {
        throw DataError("leontief: A is not square");
    }
    const auto n = A.rows();
    Eigen::MatrixXd system = Eigen::MatrixXd::Identity(n, n) - A;
    lu_.compute(system);
    rcond_ = n == 0 ? 1.0 : lu_.rcond();
    const double pivot = n == 0 ? 1.0 : lu_.matrixLU().diagonal().cwiseAbs().minCoeff();
    if (!(rcond_ >= min_reciprocal_condition) || pivot == 0.0) {
        const double max_column_sum = n == 0 ? 0.0 : A.colwise().sum().maxCoeff();
        std::ostringstream msg;
        msg << "(I - A) is singular or near-singular: reciprocal condition estimate " << rcond_ << " < " << min_reciprocal_condition
            << ", smallest pivot " << pivot << ", largest column sum of A " << max_column_sum
            << " (spectral radius of A must stay below 1)";
        throw NumericalError(msg.str());
    }
}

Eigen::MatrixXd LeontiefSolver::solve(const Eigen::MatrixXd& rhs) const
{
    if (rhs.rows() != lu_.rows()) {
        throw DataError("leontief solve: right-hand side has " + std::to_string(rhs.rows()) + " rows, expected " + std::to_string(lu_.rows()));
    }
    return lu_.solve(rhs);
}

Eigen::MatrixXd LeontiefSolver::inverse() const
{
    return lu_.solve(Eigen::MatrixXd::Identity(lu_.rows(), lu_.rows()));
}

Eigen::MatrixXd leontief_inverse(const Eigen::MatrixXd& A)
{
    return LeontiefSolver(A).inverse();
}

Intensity intensity(const Eigen::VectorXd& direct, const Eigen::VectorXd& x, double epsilon_x)
{
    if (direct.size() != x.size()) {
        throw DataError("intensity: direct has " + std::to_string(direct.size()) + " entries but x has " + std::to_string(x.size()));
    }
    Intensity out{Eigen::VectorXd::Zero(x.size()), 0};
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (x[i] > epsilon_x) {
            out.q[i] = direct[i] / x[i];
        } else if (direct[i] != 0.0) {
            ++out.dropped_sectors;
        }
    }
    return out;
}

namespace {

RegionFlowMatrix collapse_sectors(const Eigen::MatrixXd& G, const ingest::RegionSchema& schema, QuantityKind kind, const Timeframe& timeframe)
{
    const auto m = schema.region_count();
    RegionFlowMatrix out{kind, timeframe, schema.regions(), Eigen::MatrixXd::Zero(m, m)};
    for (Eigen::Index i = 0; i < G.rows(); ++i) {
        out.F.row(schema.region_of(i)) += G.row(i);
    }
    return out;
}

void check_flow_inputs(const Eigen::VectorXd& q, Eigen::Index n, const Eigen::MatrixXd& Y, const ingest::RegionSchema& schema)
{
    if (q.size() != n || Y.rows() != n || schema.flat_size() != n || Y.cols() != schema.region_count()) {
        std::ostringstream msg;
        msg << "footprint_flows: dimension mismatch (q " << q.size() << ", L " << n << ", Y " << Y.rows() << "x" << Y.cols() << ", schema "
            << schema.flat_size() << " sectors / " << schema.region_count() << " regions)";
        throw DataError(msg.str());
    }
}

} // namespace

RegionFlowMatrix footprint_flows(const Eigen::VectorXd& q, const Eigen::MatrixXd& L, const Eigen::MatrixXd& Y, const ingest::RegionSchema& schema,
                                 QuantityKind kind, const Timeframe& timeframe)
{
    if (L.rows() != L.cols()) {
        throw DataError("footprint_flows: L is not square");
    }
    check_flow_inputs(q, L.rows(), Y, schema);
    const Eigen::MatrixXd G = q.asDiagonal() * (L * Y);
    return collapse_sectors(G, schema, kind, timeframe);
}

RegionFlowMatrix footprint_flows(const Eigen::VectorXd& q, const LeontiefSolver& solver, const Eigen::MatrixXd& Y,
                                 const ingest::RegionSchema& schema, QuantityKind kind, const Timeframe& timeframe)
{
    check_flow_inputs(q, solver.size(), Y, schema);
    const Eigen::MatrixXd G = q.asDiagonal() * solver.solve(Y);
    return collapse_sectors(G, schema, kind, timeframe);
}

RegionFlowMatrix period_aggregate(std::span<const RegionFlowMatrix> flows, const Period& period)
{
    if (period.start_year > period.end_year) {
        throw UsageError("period " + period.label + " starts after it ends");
    }
    std::map<int, const RegionFlowMatrix*> by_year;
    for (const auto& flow : flows) {
        if (!flow.timeframe.is_year()) {
            throw DataError("period_aggregate: input '" + flow.timeframe.label + "' is not a single year");
        }
        by_year[flow.timeframe.start_year] = &flow;
    }
    const RegionFlowMatrix* first = nullptr;
    RegionFlowMatrix out;
    for (int year = period.start_year; year <= period.end_year; ++year) {
        const auto it = by_year.find(year);
        if (it == by_year.end()) {
            throw DataError("period " + period.label + ": missing year " + std::to_string(year));
        }
        const auto& flow = *it->second;
        flow.check_shape();
        if (first == nullptr) {
            first = &flow;
            out = RegionFlowMatrix{flow.kind, Timeframe::period(period), flow.labels, flow.F};
            continue;
        }
        if (flow.labels != first->labels) {
            throw DataError("period " + period.label + ": region labels of " + std::to_string(year) + " differ from " + first->timeframe.label);
        }
        if (flow.kind != first->kind) {
            throw DataError("period " + period.label + ": mixed quantity kinds");
        }
        out.F += flow.F;
    }
    if (flows.size() != by_year.size() || by_year.size() != static_cast<std::size_t>(period.length())) {
        throw DataError("period " + period.label + ": expected exactly " + std::to_string(period.length()) + " distinct years, got " +
                        std::to_string(flows.size()) + " matrices");
    }
    if (period.mode == PeriodMode::mean) {
        out.F /= static_cast<double>(period.length());
    }
    return out;
}

YearFootprints compute_year(const ingest::MrioSnapshot& snapshot, double epsilon_x)
{
    const auto tech = technical_coefficients(snapshot.Z, snapshot.x, epsilon_x);
    const LeontiefSolver solver(tech.A);
    const auto q_e = intensity(snapshot.ext_emission, snapshot.x, epsilon_x);
    const auto q_v = intensity(snapshot.ext_value, snapshot.x, epsilon_x);

    // One solve serves both kinds: X = (I - A)^-1 Y.
    const Eigen::MatrixXd X = solver.solve(snapshot.Y);
    const auto timeframe = Timeframe::year(snapshot.year);
    YearFootprints out{
        collapse_sectors(q_e.q.asDiagonal() * X, snapshot.schema, QuantityKind::emission, timeframe),
        collapse_sectors(q_v.q.asDiagonal() * X, snapshot.schema, QuantityKind::value, timeframe),
        {snapshot.year, tech.zero_output_sectors.size(), q_e.dropped_sectors, q_v.dropped_sectors, solver.condition_estimate()},
    };
    return out;
}

} // namespace exionet::footprint
