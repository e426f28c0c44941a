#include "doctest.h"

#include "exionet/equality_index.hpp"
#include "exionet/errors.hpp"

#include "support/oracles.hpp"

using namespace exionet;
using namespace exionet::equality;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v)
{
    Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) out[i++] = x;
    return out;
}

Eigen::VectorXd random_vector(std::mt19937_64& rng, int m, double scale)
{
    std::normal_distribution<double> normal(0.0, scale);
    Eigen::VectorXd v(m);
    for (int i = 0; i < m; ++i) v[i] = normal(rng);
    return v;
}

} // namespace

TEST_SUITE("equality_index") {

TEST_CASE("net flows: symmetric, two-region, loop oracle")
{
    RegionFlowMatrix sym;
    sym.labels = {"A", "B", "C"};
    sym.F = (Eigen::MatrixXd(3, 3) << 9, 1, 2, 1, 8, 3, 2, 3, 7).finished();
    CHECK(net_flows(sym).isZero(0.0));

    RegionFlowMatrix two;
    two.labels = {"A", "B"};
    two.F = (Eigen::MatrixXd(2, 2) << 123, 5, 2, -4).finished();
    CHECK(net_flows(two) == Eigen::Vector2d(3, -3));

    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 10; ++trial) {
        const auto f = oracle::random_flow(rng, 13);
        const auto expected = oracle::net(oracle::to_dense(f.F));
        const auto got = net_flows(f);
        for (int r = 0; r < 13; ++r) CHECK(got[r] == doctest::Approx(expected[static_cast<std::size_t>(r)]).epsilon(1e-13));
        CHECK(std::abs(got.sum()) <= 1e-9 * got.cwiseAbs().sum());
    }
}

TEST_CASE("make_net_flows requires matching labels and timeframe")
{
    RegionFlowMatrix e, v;
    e.kind = QuantityKind::emission;
    v.kind = QuantityKind::value;
    e.labels = v.labels = {"A", "B"};
    e.F = v.F = Eigen::MatrixXd::Ones(2, 2);
    e.timeframe = v.timeframe = Timeframe::year(2000);
    CHECK(make_net_flows(e, v).labels == e.labels);
    v.timeframe = Timeframe::year(2001);
    CHECK_THROWS_AS(make_net_flows(e, v), DataError);
    v.timeframe = e.timeframe;
    v.labels = {"B", "A"};
    CHECK_THROWS_AS(make_net_flows(e, v), DataError);
}

TEST_CASE("min-max scaling")
{
    CHECK(minmax_scale(vec({0, 5, 10})) == vec({-1, 0, 1}));
    CHECK(minmax_scale(vec({4, 4, 4})) == vec({0, 0, 0}));

    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        const int m = 2 + static_cast<int>(rng() % 20);
        const auto v = random_vector(rng, m, std::pow(10.0, static_cast<double>(rng() % 12) - 3.0));
        const auto got = minmax_scale(v);
        const auto expected = oracle::minmax(std::vector<double>(v.data(), v.data() + m));
        for (int i = 0; i < m; ++i) {
            CHECK(got[i] == doctest::Approx(expected[static_cast<std::size_t>(i)]).epsilon(1e-14));
            CHECK(got[i] >= -1.0);
            CHECK(got[i] <= 1.0);
            for (int j = 0; j < m; ++j)
                if (v[i] < v[j]) CHECK(got[i] <= got[j]);
        }
        Eigen::Index lo = 0, hi = 0;
        v.minCoeff(&lo);
        v.maxCoeff(&hi);
        CHECK(got[lo] == -1.0);
        CHECK(got[hi] == 1.0);
    }
}

TEST_CASE("anti-aligned nets: max surplus scores +1")
{
    const auto v = vec({3, -1, 7, 0.5, -4});
    const Eigen::VectorXd e = -v;
    const auto x = eeei(e, v);
    CHECK(x[2] == 1.0);
    CHECK(x[4] == -1.0);
    CHECK(x.isApprox(minmax_scale(2.0 * minmax_scale(v)), 1e-15));
}

TEST_CASE("orientation duality")
{
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 100; ++trial) {
        const auto e = random_vector(rng, 13, 500.0);
        const auto v = random_vector(rng, 13, 1e5);
        const auto a = eeei(e, v, Orientation::advantage_high);
        const auto b = eeei(e, v, Orientation::literal_eq8);
        CHECK((a + b).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("positive affine invariance")
{
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> unit(0.1, 10.0);
    for (int trial = 0; trial < 100; ++trial) {
        const auto e = random_vector(rng, 13, 500.0);
        const auto v = random_vector(rng, 13, 1e5);
        const double alpha = unit(rng), gamma = unit(rng), beta = 100.0 * (unit(rng) - 5.0), delta = 1e4 * (unit(rng) - 5.0);
        const Eigen::VectorXd e2 = (alpha * e).array() + beta;
        const Eigen::VectorXd v2 = (gamma * v).array() + delta;
        CHECK((eeei(e, v) - eeei(e2, v2)).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("synthetic 13-region profile: (min e_net, max v_net) scores exactly +1")
{
    std::mt19937_64 rng(2022);
    for (int year = 1995; year <= 2022; ++year) {
        auto e = random_vector(rng, 13, 300.0);
        auto v = random_vector(rng, 13, 5e4);
        e[4] = e.minCoeff() - 50.0;
        v[4] = v.maxCoeff() + 1e3;
        const auto x = eeei(e, v);
        CHECK(x[4] == 1.0);
        CHECK(x.maxCoeff() == 1.0);
        CHECK(x.minCoeff() == -1.0);
        CHECK(eeei(e, v, Orientation::literal_eq8)[4] == -1.0);
    }
}

TEST_CASE("two regions: opposed nets hit the endpoints, aligned nets are degenerate")
{
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> unit(0.01, 100.0);
    for (int trial = 0; trial < 200; ++trial) {
        const double a = unit(rng), b = unit(rng);
        // Two-region nets are always (t, -t).
        const auto opposed = eeei(vec({a, -a}), vec({-b, b}));
        CHECK(opposed[0] == -1.0);
        CHECK(opposed[1] == 1.0);
        const auto aligned = eeei(vec({a, -a}), vec({b, -b}));
        CHECK(aligned.isZero(0.0));
    }
}

TEST_CASE("degenerate constant inputs give zeros")
{
    CHECK(eeei(vec({2, 2, 2}), vec({5, 5, 5})).isZero(0.0));
    CHECK(eeei(vec({1, 2, 3}), vec({1, 2, 3})).isZero(0.0));
}

TEST_CASE("distance")
{
    CHECK(eeei_distance(1.0, 1.0) == 0.0);
    CHECK(eeei_distance(1.0, 0.28) == 0.72);
    CHECK(eeei_distance(1.0, -0.51) == 1.51);
    CHECK(eeei_distance(-0.51, 1.0) == 1.51);

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int trial = 0; trial < 500; ++trial) {
        const double a = unit(rng), b = unit(rng), c = unit(rng);
        CHECK(eeei_distance(a, b) >= 0.0);
        CHECK(eeei_distance(a, b) == eeei_distance(b, a));
        CHECK(eeei_distance(a, a) == 0.0);
        CHECK(eeei_distance(a, c) <= eeei_distance(a, b) + eeei_distance(b, c) + 1e-15);
    }
    const auto d = distance_matrix(vec({1.0, 0.28, -0.51}));
    CHECK(d(0, 1) == 0.72);
    CHECK(d(2, 0) == 1.51);
    CHECK(d.diagonal().isZero(0.0));
}

TEST_CASE("quadrants")
{
    CHECK(classify_quadrant(478, 27000) == Quadrant::Q1);
    CHECK(classify_quadrant(-611, 96000) == Quadrant::Q2);
    CHECK(classify_quadrant(-1, -1) == Quadrant::Q3);
    CHECK(classify_quadrant(1, -1) == Quadrant::Q4);
    CHECK(classify_quadrant(0, 0) == Quadrant::Q1);
    CHECK(classify_quadrant(0, -3) == Quadrant::Q4);
    CHECK(classify_quadrant(-3, 0) == Quadrant::Q2);
    CHECK(parse_quadrant(to_string(Quadrant::Q3)) == Quadrant::Q3);
}

TEST_CASE("records carry scaled components and consistent quadrants")
{
    std::mt19937_64 rng(5);
    NetFlowVector nets;
    nets.labels = oracle::labels(13);
    nets.e_net = random_vector(rng, 13, 300.0);
    nets.v_net = random_vector(rng, 13, 5e4);
    nets.timeframe = {"P2", 2002, 2008};
    for (const auto orient : {Orientation::advantage_high, Orientation::literal_eq8}) {
        const auto records = eeei_records(nets, orient);
        const auto expected = eeei(nets.e_net, nets.v_net, orient);
        REQUIRE(records.size() == 13);
        for (std::size_t i = 0; i < records.size(); ++i) {
            const auto& r = records[i];
            const auto k = static_cast<Eigen::Index>(i);
            CHECK(r.region == nets.labels[i]);
            CHECK(r.timeframe == "P2");
            CHECK(r.scaled_e == minmax_scale(nets.e_net)[k]);
            CHECK(r.scaled_v == minmax_scale(nets.v_net)[k]);
            CHECK(r.eeei == expected[k]);
            CHECK(r.quadrant == classify_quadrant(r.e_net, r.v_net));
        }
    }
}

TEST_CASE("orientation names")
{
    CHECK(parse_orientation("advantage_high") == Orientation::advantage_high);
    CHECK(parse_orientation("literal_eq8") == Orientation::literal_eq8);
    CHECK_THROWS_AS(parse_orientation("upside_down"), UsageError);
}

}
