#include "doctest.h"

#include "exionet/csv.hpp"
#include "exionet/errors.hpp"
#include "exionet/mrio_ingest.hpp"

#include "support/oracles.hpp"
#include "support/scratch.hpp"

#include <fstream>
#include <set>

using namespace exionet;
using namespace exionet::ingest;

namespace {

void write(const std::filesystem::path& p, const std::string& text)
{
    std::filesystem::create_directories(p.parent_path());
    std::ofstream(p) << text;
}

MrioSnapshot random_snapshot(std::mt19937_64& rng, int regions, int sectors, int year)
{
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<std::string> r, s;
    for (int i = 0; i < regions; ++i) r.push_back("G" + std::to_string(i));
    for (int k = 0; k < sectors; ++k) s.push_back("sector " + std::to_string(k));
    MrioSnapshot snap;
    snap.year = year;
    snap.schema = RegionSchema(r, s);
    const auto n = snap.schema.flat_size();
    snap.Z = Eigen::MatrixXd(n, n);
    snap.Y = Eigen::MatrixXd(n, regions);
    snap.x = Eigen::VectorXd(n);
    snap.ext_emission = Eigen::VectorXd(n);
    snap.ext_value = Eigen::VectorXd(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) snap.Z(i, j) = 1e3 * unit(rng) / 3.0;
        for (Eigen::Index j = 0; j < regions; ++j) snap.Y(i, j) = 1e4 * unit(rng) / 7.0;
        snap.ext_emission[i] = unit(rng) * 1e-3;
        snap.ext_value[i] = unit(rng) * 1e5;
    }
    for (Eigen::Index i = 0; i < n; ++i) snap.x[i] = snap.Z.row(i).sum() + snap.Y.row(i).sum();
    return snap;
}

} // namespace

TEST_SUITE("mrio_ingest") {

TEST_CASE("schema flat index is a bijection over region x sector")
{
    const RegionSchema schema({"A", "B", "C"}, {"s1", "s2"});
    CHECK(schema.flat_size() == 6);
    std::set<std::pair<Eigen::Index, Eigen::Index>> seen;
    for (Eigen::Index i = 0; i < schema.flat_size(); ++i) {
        CHECK(schema.flat_index(schema.region_of(i), schema.sector_of(i)) == i);
        seen.insert({schema.region_of(i), schema.sector_of(i)});
    }
    CHECK(seen.size() == 6);
    CHECK(schema.flat_index(2, 1) == 5);
}

TEST_CASE("schema rejects duplicates and empty label sets")
{
    CHECK_THROWS_AS(RegionSchema({"A", "A"}, {"s"}), DataError);
    CHECK_THROWS_AS(RegionSchema({"A"}, {"s", "s"}), DataError);
    CHECK_THROWS_AS(RegionSchema({}, {"s"}), DataError);
    CHECK_THROWS_AS(RegionSchema({"A"}, {}), DataError);
}

TEST_CASE("index order survives parsing, no sorting")
{
    const auto schema = RegionSchema::from_index({{"ZZ", "b"}, {"ZZ", "a"}, {"AA", "b"}, {"AA", "a"}});
    CHECK(schema.regions() == std::vector<std::string>{"ZZ", "AA"});
    CHECK(schema.sectors() == std::vector<std::string>{"b", "a"});
    CHECK_THROWS_AS(RegionSchema::from_index({{"ZZ", "b"}, {"AA", "b"}, {"ZZ", "a"}, {"AA", "a"}}), DataError);
    CHECK_THROWS_AS(RegionSchema::from_index({{"ZZ", "b"}, {"ZZ", "a"}, {"AA", "a"}, {"AA", "b"}}), DataError);
}

TEST_CASE("zero inter-industry fixture gives x equal to final demand row sums")
{
    scratch::Dir dir("ingest");
    write(dir / "index.csv", "region,sector\nA,s1\nA,s2\nB,s1\nB,s2\n");
    write(dir / "Z_2000.csv", "0,0,0,0\n0,0,0,0\n0,0,0,0\n0,0,0,0\n");
    write(dir / "Y_2000.csv", "A,B\n1,0\n0,2\n3,0\n0,4\n");
    write(dir / "ext_2000.csv", "emission,1,1,1,1\nvalue_added,1,2,3,4\n");
    const auto snap = parse_mrio(dir.path(), 2000, InputFormat::canonical_csv);
    REQUIRE(snap.x.size() == 4);
    CHECK(snap.x[0] == 1.0);
    CHECK(snap.x[1] == 2.0);
    CHECK(snap.x[2] == 3.0);
    CHECK(snap.x[3] == 4.0);
    CHECK(snap.schema.regions() == std::vector<std::string>{"A", "B"});
    CHECK(validate_balance(snap).empty());
}

TEST_CASE("3-column Z against a 4-entry index names both counts")
{
    scratch::Dir dir("ingest");
    write(dir / "index.csv", "region,sector\nA,s1\nA,s2\nB,s1\nB,s2\n");
    write(dir / "Z_2000.csv", "0,0,0\n0,0,0\n0,0,0\n0,0,0\n");
    write(dir / "Y_2000.csv", "A,B\n1,0\n0,2\n3,0\n0,4\n");
    write(dir / "ext_2000.csv", "emission,1,1,1,1\nvalue_added,1,2,3,4\n");
    try {
        parse_mrio(dir.path(), 2000, InputFormat::canonical_csv);
        FAIL("expected a dimension error");
    } catch (const DataError& e) {
        const std::string msg = e.what();
        CHECK(msg.find('3') != std::string::npos);
        CHECK(msg.find('4') != std::string::npos);
        CHECK(msg.find("Z_2000.csv") != std::string::npos);
    }
}

TEST_CASE("missing Z file error names the path")
{
    scratch::Dir dir("ingest");
    write(dir / "index.csv", "region,sector\nA,s1\n");
    write(dir / "Y_2000.csv", "A\n1\n");
    write(dir / "ext_2000.csv", "emission,1\nvalue_added,1\n");
    try {
        parse_mrio(dir.path(), 2000, InputFormat::canonical_csv);
        FAIL("expected a missing-file error");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find((dir / "Z_2000.csv").string()) != std::string::npos);
    }
}

TEST_CASE("malformed numeric cell reports file, row and column")
{
    scratch::Dir dir("ingest");
    write(dir / "index.csv", "region,sector\nA,s1\nA,s2\n");
    write(dir / "Z_2000.csv", "0,0\n0,abc\n");
    write(dir / "Y_2000.csv", "A\n1\n1\n");
    write(dir / "ext_2000.csv", "emission,1,1\nvalue_added,1,1\n");
    try {
        parse_mrio(dir.path(), 2000, InputFormat::canonical_csv);
        FAIL("expected a parse error");
    } catch (const DataError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("Z_2000.csv") != std::string::npos);
        CHECK(msg.find("abc") != std::string::npos);
        CHECK(msg.find('2') != std::string::npos);
    }
}

TEST_CASE("unknown year and negative entries are rejected")
{
    scratch::Dir dir("ingest");
    CHECK_THROWS_AS(parse_mrio(dir.path(), 1990, InputFormat::canonical_csv), DataError);
    write(dir / "index.csv", "region,sector\nA,s1\n");
    write(dir / "Z_2000.csv", "-1\n");
    write(dir / "Y_2000.csv", "A\n3\n");
    write(dir / "ext_2000.csv", "emission,1\nvalue_added,1\n");
    CHECK_THROWS_AS(parse_mrio(dir.path(), 2000, InputFormat::canonical_csv), DataError);
}

TEST_CASE("round trip through the canonical layout is exact")
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 5; ++trial) {
        scratch::Dir dir("roundtrip");
        const auto snap = random_snapshot(rng, 3, 2, 1999 + trial);
        write_canonical(snap, dir.path());
        const auto back = parse_mrio(dir.path(), snap.year, InputFormat::canonical_csv);
        CHECK(back.schema == snap.schema);
        CHECK(back.Z == snap.Z);
        CHECK(back.Y == snap.Y);
        CHECK(back.x == snap.x);
        CHECK(back.ext_emission == snap.ext_emission);
        CHECK(back.ext_value == snap.ext_value);
    }
}

TEST_CASE("account selection sums the named rows")
{
    scratch::Dir dir("ingest");
    write(dir / "index.csv", "region,sector\nA,s1\nA,s2\n");
    write(dir / "Z_2000.csv", "0,0\n0,0\n");
    write(dir / "Y_2000.csv", "A\n1\n1\n");
    write(dir / "ext_2000.csv", "co2,1,2\nch4,10,20\n\"wages, total\",3,3\nsurplus,4,4\n");
    ParseOptions opts;
    opts.emission_accounts = {"co2", "ch4"};
    opts.value_accounts = {"wages, total", "surplus"};
    const auto snap = parse_mrio(dir.path(), 2000, InputFormat::canonical_csv, opts);
    CHECK(snap.ext_emission[0] == 11.0);
    CHECK(snap.ext_emission[1] == 22.0);
    CHECK(snap.ext_value[0] == 7.0);
    opts.emission_accounts = {"n2o"};
    CHECK_THROWS_AS(parse_mrio(dir.path(), 2000, InputFormat::canonical_csv, opts), DataError);
}

TEST_CASE("ExioBase ixi layout: categories summed per region, kg scaled to Mt")
{
    scratch::Dir dir("exio");
    const auto base = dir / "IOT_2010_ixi";
    write(base / "Z.txt",
          "region\t\tAT\tAT\tBE\tBE\n"
          "sector\t\tfarm\tmill\tfarm\tmill\n"
          "region\tsector\t\t\t\t\n"
          "AT\tfarm\t1\t2\t0\t0\n"
          "AT\tmill\t0\t1\t1\t0\n"
          "BE\tfarm\t0\t0\t2\t1\n"
          "BE\tmill\t1\t0\t0\t3\n");
    write(base / "Y.txt",
          "region\t\tAT\tAT\tBE\tBE\n"
          "category\t\thouseholds\tgovernment\thouseholds\tgovernment\n"
          "region\tsector\t\t\t\t\n"
          "AT\tfarm\t5\t1\t1\t0\n"
          "AT\tmill\t4\t0\t0\t2\n"
          "BE\tfarm\t0\t1\t6\t1\n"
          "BE\tmill\t1\t0\t3\t3\n");
    write(base / "satellite" / "F.txt",
          "region\tAT\tAT\tBE\tBE\n"
          "sector\tfarm\tmill\tfarm\tmill\n"
          "stressor\t\t\t\t\n"
          "CO2 - combustion - air\t1000000000\t2000000000\t0\t500000000\n"
          "Employment\t9\t9\t9\t9\n"
          "Operating surplus: Consumption of fixed capital\t1\t1\t1\t1\n");
    ParseOptions opts;
    opts.value_accounts = {"Operating surplus: Consumption of fixed capital"};
    const auto snap = parse_mrio(dir.path(), 2010, InputFormat::exiobase_ixi, opts);
    CHECK(snap.schema.regions() == std::vector<std::string>{"AT", "BE"});
    CHECK(snap.schema.sectors() == std::vector<std::string>{"farm", "mill"});
    REQUIRE(snap.Y.cols() == 2);
    CHECK(snap.Y(0, 0) == 6.0);
    CHECK(snap.Y(1, 1) == 2.0);
    CHECK(snap.Y(3, 1) == 6.0);
    CHECK(snap.ext_emission[0] == doctest::Approx(1.0));
    CHECK(snap.ext_emission[1] == doctest::Approx(2.0));
    CHECK(snap.ext_emission[3] == doctest::Approx(0.5));
    CHECK(snap.x[0] == 3.0 + 7.0);
    CHECK(validate_balance(snap).empty());
    CHECK(input_files(dir.path(), 2010, InputFormat::exiobase_ixi).size() == 3);
}

TEST_CASE("validate_balance: identity case and one perturbed output")
{
    std::mt19937_64 rng(5);
    auto snap = random_snapshot(rng, 3, 2, 2005);
    CHECK(validate_balance(snap).empty());
    snap.x[0] *= 1.1;
    const auto report = validate_balance(snap);
    REQUIRE(report.size() == 1);
    CHECK(report[0].index == 0);
    CHECK(report[0].x == snap.x[0]);
    CHECK(report[0].relative_gap == doctest::Approx(std::abs(snap.x[0] - report[0].row_sum) / snap.x[0]));
}

TEST_CASE("validate_balance with zero tolerance matches independent re-summation")
{
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        auto snap = random_snapshot(rng, 3, 2, 2001);
        // x from a different summation order, so some entries differ in the last bits.
        for (Eigen::Index i = 0; i < snap.x.size(); ++i) {
            double acc = 0.0;
            for (Eigen::Index j = snap.Y.cols() - 1; j >= 0; --j) acc += snap.Y(i, j);
            for (Eigen::Index j = snap.Z.cols() - 1; j >= 0; --j) acc += snap.Z(i, j);
            snap.x[i] = acc;
        }
        std::set<Eigen::Index> expected;
        for (Eigen::Index i = 0; i < snap.x.size(); ++i) {
            double acc = 0.0;
            for (Eigen::Index j = 0; j < snap.Z.cols(); ++j) acc += snap.Z(i, j);
            for (Eigen::Index j = 0; j < snap.Y.cols(); ++j) acc += snap.Y(i, j);
            if (acc != snap.x[i]) expected.insert(i);
        }
        std::set<Eigen::Index> got;
        for (const auto& v : validate_balance(snap, 0.0)) got.insert(v.index);
        CHECK(got == expected);
    }
}

TEST_CASE("aggregation: identity, counting and brute force")
{
    std::mt19937_64 rng(3);
    const auto flow = oracle::random_flow(rng, 3);
    const auto same = aggregate_flows(flow, AggregationMap::identity(flow.labels));
    CHECK(same.F == flow.F);
    CHECK(same.labels == flow.labels);

    RegionFlowMatrix ones;
    ones.labels = {"a", "b", "c", "d"};
    ones.F = Eigen::MatrixXd::Ones(4, 4);
    AggregationMap two;
    two.mapping = {{"a", "X"}, {"b", "X"}, {"c", "Y"}, {"d", "Y"}};
    two.aggregated_order = {"X", "Y"};
    const auto agg = aggregate_flows(ones, two);
    CHECK(agg.F == Eigen::MatrixXd::Constant(2, 2, 4.0));

    for (int trial = 0; trial < 20; ++trial) {
        const auto f = oracle::random_flow(rng, 6);
        AggregationMap map;
        map.aggregated_order = {"P", "Q", "S"};
        std::vector<int> target(6);
        for (int i = 0; i < 6; ++i) {
            target[static_cast<std::size_t>(i)] = i < 3 ? i : static_cast<int>(rng() % 3);
            map.mapping[f.labels[static_cast<std::size_t>(i)]] = map.aggregated_order[static_cast<std::size_t>(target[static_cast<std::size_t>(i)])];
        }
        const auto got = aggregate_flows(f, map);
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) {
                double acc = 0.0;
                for (int r = 0; r < 6; ++r)
                    for (int s = 0; s < 6; ++s)
                        if (target[static_cast<std::size_t>(r)] == a && target[static_cast<std::size_t>(s)] == b) acc += f.F(r, s);
                CHECK(got.F(a, b) == doctest::Approx(acc).epsilon(1e-14));
            }
        CHECK(std::abs(got.F.sum() - f.F.sum()) <= 1e-9 * f.F.sum());
    }
}

TEST_CASE("aggregation rejects unmapped regions")
{
    RegionFlowMatrix f;
    f.labels = {"a", "b"};
    f.F = Eigen::MatrixXd::Ones(2, 2);
    AggregationMap map;
    map.mapping = {{"a", "X"}};
    map.aggregated_order = {"X"};
    CHECK_THROWS_AS(aggregate_flows(f, map), DataError);
}

TEST_CASE("13-region scheme covers 49 native codes")
{
    const auto map = AggregationMap::table_a2();
    CHECK(map.mapping.size() == 49);
    CHECK(map.aggregated_order ==
          std::vector<std::string>{"AU", "BR", "CA", "CN", "EU27/UK", "ID", "IN", "JP", "KR", "MX", "RoW", "RU", "US"});
    std::map<std::string, int> counts;
    for (const auto& [native, agg] : map.mapping) counts[agg]++;
    CHECK(counts["RoW"] == 10);
    CHECK(counts["EU27/UK"] == 28);
    for (const auto* code : {"WA", "WL", "WE", "WF", "WM", "TW", "TR", "ZA", "NO", "CH"}) CHECK(map.mapping.at(code) == "RoW");
    CHECK(map.mapping.at("GB") == "EU27/UK");
    CHECK(map.mapping.at("DE") == "EU27/UK");
    CHECK(map.mapping.at("CN") == "CN");
    map.validate();
}

TEST_CASE("aggregation map file: order of first appearance, duplicates rejected")
{
    scratch::Dir dir("map");
    write(dir / "map.csv", "native_code,aggregated_code\nB,south\nA,north\nC,south\n");
    const auto map = AggregationMap::load(dir / "map.csv");
    CHECK(map.aggregated_order == std::vector<std::string>{"south", "north"});
    CHECK(map.mapping.at("C") == "south");
    write(dir / "dup.csv", "native_code,aggregated_code\nA,x\nA,y\n");
    CHECK_THROWS_AS(AggregationMap::load(dir / "dup.csv"), DataError);
}

}
