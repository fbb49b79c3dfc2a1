#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "dtqc/error.hpp"
#include "dtqc/model.hpp"
#include "oracles.hpp"

#include <Eigen/Eigenvalues>
#include <doctest.h>
#include <numbers>

using namespace dtqc;

TEST_CASE("two-site Hamiltonian by hand") {
    ConstrainedBasis basis(2, 1);
    ChainParameters  p = uniform_chain(2, 1.0, 0.0);
    p.n_left           = 1;
    const auto h       = build_pxp(basis, p).to_dense();
    Eigen::Matrix3d    expected;
    expected << 0, 0.5, 0.5, 0.5, 0, 0, 0.5, 0, 0;
    CHECK((h - expected).norm() == 0.0);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    CHECK(es.eigenvalues()(0) == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-14));
    CHECK(es.eigenvalues()(1) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(es.eigenvalues()(2) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("constrained Hamiltonian equals the full-space one on legal states") {
    for(int n : {5, 8}) {
        const auto p = golden_chain(n, 4.74, std::numbers::pi);
        ConstrainedBasis basis(n, p.n_left);
        const auto h    = build_pxp(basis, p).to_dense();
        const auto full = oracle::full_hamiltonian(n, p.n_left, p.omega_left, p.omega_right);
        for(std::size_t a = 0; a < basis.dimension(); ++a)
            for(std::size_t b = 0; b < basis.dimension(); ++b)
                REQUIRE(h(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) == full(basis.state(a), basis.state(b)).real());
        // the full-space Hamiltonian never leaves the legal subspace
        for(std::uint32_t b = 0; b < (1U << n); ++b)
            if(oracle::legal(b))
                for(std::uint32_t c = 0; c < (1U << n); ++c)
                    if(!oracle::legal(c)) REQUIRE(full(c, b) == 0.0);
    }
}

TEST_CASE("Hamiltonian is symmetric with an empty diagonal") {
    const auto p = golden_chain(11, 4.74, std::numbers::pi);
    ConstrainedBasis basis(11, p.n_left);
    const auto h = build_pxp(basis, p).to_dense();
    CHECK((h - h.transpose()).norm() == 0.0);
    CHECK(h.diagonal().norm() == 0.0);
    CHECK(build_pxp(basis, p).max_abs() == doctest::Approx(golden_ratio / 2));
}

TEST_CASE("mismatched basis is a consistency error") {
    ConstrainedBasis basis(8, 4);
    try {
        (void)build_pxp(basis, golden_chain(10, 4.74, 1.0));
        FAIL("no throw");
    } catch(const Error &e) {
        CHECK(e.kind() == ErrorKind::consistency);
    }
}

TEST_CASE("kick schedule of a single train") {
    const auto p = uniform_chain(6, 2.0, std::numbers::pi);
    const auto s = build_kick_schedule(p, 10.0);
    REQUIRE(s.events.size() == 5);
    for(std::size_t k = 0; k < 5; ++k) {
        CHECK(s.events[k].time == doctest::Approx(2.0 * (k + 1)));
        CHECK(s.events[k].regions == KickRegions::both);
    }
}

TEST_CASE("two trains interleave, never fire at zero, and merge when coincident") {
    auto p         = golden_chain(6, 3.0, 1.0);
    p.period_right = 2.0;
    const auto s   = build_kick_schedule(p, 12.0);
    // left at 3,6,9,12; right at 2,4,6,8,10,12
    std::vector<std::pair<double, KickRegions>> expected{{2, KickRegions::right}, {3, KickRegions::left},  {4, KickRegions::right},
                                                         {6, KickRegions::both},  {8, KickRegions::right}, {9, KickRegions::left},
                                                         {10, KickRegions::right}, {12, KickRegions::both}};
    REQUIRE(s.events.size() == expected.size());
    for(std::size_t k = 0; k < expected.size(); ++k) {
        CHECK(s.events[k].time == doctest::Approx(expected[k].first));
        CHECK(s.events[k].regions == expected[k].second);
    }
}

TEST_CASE("golden schedule is strictly increasing") {
    const auto p = golden_chain(10, 4.74, std::numbers::pi);
    const auto s = build_kick_schedule(p, 1000.0);
    CHECK(s.events.size() == std::size_t(1000 / 4.74) + std::size_t(1000 / p.period_right));
    for(std::size_t k = 1; k < s.events.size(); ++k) CHECK(s.events[k].time > s.events[k - 1].time);
    CHECK(s.events.front().time > 0.0);
}

TEST_CASE("kick phases") {
    const auto       p = golden_chain(7, 4.74, std::numbers::pi / 3);
    ConstrainedBasis basis(7, p.n_left);
    const auto       both = kick_phases(basis, p, KickRegions::both);
    const auto       l    = kick_phases(basis, p.theta_left, Region::left);
    const auto       r    = kick_phases(basis, p.theta_right, Region::right);
    CHECK((both - l.cwiseProduct(r)).norm() < 1e-15);
    CHECK((kick_phases(basis, 2 * std::numbers::pi, Region::left).array() - 1.0).abs().maxCoeff() < 1e-14);
    const auto full = oracle::full_kick(7, p.n_left, p.theta_left, p.theta_right, true, false);
    for(std::size_t k = 0; k < basis.dimension(); ++k) CHECK(std::abs(l(static_cast<Eigen::Index>(k)) - full(basis.state(k))) < 1e-15);
    for(auto z : both) CHECK(std::abs(z) == doctest::Approx(1.0));
}

TEST_CASE("parameter validation") {
    auto kind_of = [](ChainParameters p) {
        try {
            p.validate();
        } catch(const Error &e) {
            return e.kind();
        }
        return ErrorKind::io;
    };
    auto p        = golden_chain(10, 4.74, 1.0);
    auto bad      = p;
    bad.n_sites   = 1;
    CHECK(kind_of(bad) == ErrorKind::size);
    bad           = p;
    bad.n_left    = 10;
    CHECK(kind_of(bad) == ErrorKind::partition);
    bad             = p;
    bad.period_left = 0.0;
    CHECK(kind_of(bad) == ErrorKind::validation);
    bad             = p;
    bad.omega_right = std::nan("");
    CHECK(kind_of(bad) == ErrorKind::validation);
    CHECK(kind_of(p) == ErrorKind::io);
}

TEST_CASE("golden and uniform presets") {
    const auto g = golden_chain(10, 4.74, std::numbers::pi);
    CHECK(g.n_left == 5);
    CHECK(g.f_left() == doctest::Approx(1.32555).epsilon(1e-5));
    CHECK(g.f_right() == doctest::Approx(2.1448).epsilon(1e-4));
    CHECK(g.omega_right / g.omega_left == doctest::Approx(golden_ratio));
    const auto u = uniform_chain(10, 4.74, std::numbers::pi);
    CHECK(u.omega_right == u.omega_left);
    CHECK(u.period_right == u.period_left);
    CHECK(golden_chain(9, 4.74, 0).n_left == 5);
}
