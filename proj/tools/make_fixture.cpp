// make_fixture: writes a small balanced synthetic economy in the canonical CSV layout.

#include "exionet/footprint_engine.hpp"
#include "exionet/mrio_ingest.hpp"
#include "exionet/pipeline.hpp"

#include "CLI11.hpp"

#include <iostream>
#include <random>

using namespace exionet;

int main(int argc, char** argv)
{
    CLI::App app{"synthetic balanced multi-regional table"};
    std::string out;
    int regions = 3;
    int sectors = 2;
    std::string years = "1995..1998";
    std::uint64_t seed = 20240521;
    double max_column_sum = 0.8;
    app.add_option("--out", out, "target directory")->required();
    app.add_option("--regions", regions)->check(CLI::Range(1, 49));
    app.add_option("--sectors", sectors)->check(CLI::Range(1, 200));
    app.add_option("--years", years, "A..B");
    app.add_option("--seed", seed);
    app.add_option("--max-column-sum", max_column_sum)->check(CLI::Range(0.0, 0.99));
    CLI11_PARSE(app, argc, argv);

    try {
        const auto [first, last] = pipeline::parse_year_range(years);
        std::vector<std::string> region_labels;
        std::vector<std::string> sector_labels;
        for (int r = 0; r < regions; ++r) {
            region_labels.push_back("R" + std::to_string(r + 1));
        }
        for (int k = 0; k < sectors; ++k) {
            sector_labels.push_back("S" + std::to_string(k + 1));
        }
        const ingest::RegionSchema schema(region_labels, sector_labels);
        const auto n = schema.flat_size();

        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (int year = first; year <= last; ++year) {
            Eigen::MatrixXd A(n, n);
            for (Eigen::Index j = 0; j < n; ++j) {
                double sum = 0.0;
                for (Eigen::Index i = 0; i < n; ++i) {
                    A(i, j) = unit(rng);
                    sum += A(i, j);
                }
                A.col(j) *= max_column_sum * (0.5 + 0.5 * unit(rng)) / sum;
            }
            Eigen::MatrixXd Y(n, regions);
            for (Eigen::Index i = 0; i < n; ++i) {
                for (Eigen::Index s = 0; s < regions; ++s) {
                    Y(i, s) = 10.0 + 90.0 * unit(rng) + (schema.region_of(i) == s ? 200.0 : 0.0);
                }
            }
            const Eigen::VectorXd demand = Y.rowwise().sum();
            const Eigen::VectorXd x0 = (Eigen::MatrixXd::Identity(n, n) - A).partialPivLu().solve(demand);

            ingest::MrioSnapshot snap;
            snap.year = year;
            snap.schema = schema;
            snap.Z = A * x0.asDiagonal();
            snap.Y = Y;
            snap.x = footprint::compute_output(snap.Z, snap.Y);
            snap.ext_emission.resize(n);
            for (Eigen::Index i = 0; i < n; ++i) {
                snap.ext_emission[i] = 0.05 * snap.x[i] * (0.2 + 1.8 * unit(rng));
            }
            snap.ext_value = snap.x - snap.Z.colwise().sum().transpose();
            snap.check_invariants();
            ingest::write_canonical(snap, out);
        }
        std::cerr << "make_fixture: wrote " << regions << " regions x " << sectors << " sectors, " << first << ".." << last
                  << " to " << out << '\n';
    } catch (const std::exception& e) {
        std::cerr << "make_fixture: error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
