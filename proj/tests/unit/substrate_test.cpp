#include <cmath>

#include <gtest/gtest.h>

#include "qset/errors.hpp"
#include "qset/substrate.hpp"

namespace {

using namespace qset;

TEST(Substrate, ZeroPowerIsUniform) {
    const SubstrateModel m;
    const auto f = substrate_temperature_field(0.0, 0.05, m);
    for (double t : f.temperature) EXPECT_DOUBLE_EQ(t, 0.05);
    EXPECT_DOUBLE_EQ(f.t_at_source, 0.05);
}

TEST(Substrate, SourceRadiusFromFootprint) {
    const SubstrateModel m;
    EXPECT_NEAR(M_PI * m.source_radius() * m.source_radius(), 1.5e-6 * 0.3e-6, 1e-20);
}

// Homogeneous linear half-space: with the film conductivity matched to the
// silicon at the boundary temperature and a tiny power, the mean rise over a
// uniformly heated disk of radius a is 8 P / (3 pi^2 kappa a).
TEST(Substrate, MatchesHalfSpaceDiskSolution) {
    SubstrateModel m;
    const double t_b = 0.2;
    m.kappa_sio2_coeff = m.kappa_si_coeff * t_b;
    m.source_area = M_PI * 2e-6 * 2e-6;
    const double kappa = m.kappa_si_coeff * t_b * t_b * t_b;
    const double power = 1e-12;
    const auto f = substrate_temperature_field(power, t_b, m);
    const double oracle = 8 * power / (3 * M_PI * M_PI * kappa * m.source_radius());
    EXPECT_NEAR((f.t_at_source - t_b) / oracle, 1.0, 0.05);
}

TEST(Substrate, WarmBoundaryBarelyRises) {
    const auto f = substrate_temperature_field(0.5e-12, 0.25, SubstrateModel{});
    EXPECT_LT((f.t_at_source - 0.25) / 0.25, 0.05);
    EXPECT_GT(f.t_at_source, 0.25);
}

TEST(Substrate, DiscreteFluxConservation) {
    const auto f = substrate_temperature_field(0.5e-12, 0.01, SubstrateModel{});
    EXPECT_NEAR(f.boundary_flux / f.power, 1.0, 0.01);
    for (std::size_t ir : {std::size_t{10}, f.nr / 2, f.nr}) {
        for (std::size_t jz : {std::size_t{3}, f.oxide_rows + 2, f.nz}) {
            EXPECT_NEAR(f.contour_flux(ir, jz) / f.power, 1.0, 0.01) << ir << " " << jz;
        }
    }
    EXPECT_THROW(f.contour_flux(0, 1), InvalidParameter);
}

TEST(Substrate, GridRefinementConverges) {
    SubstrateOptions o;
    o.check_refinement = true;
    const SubstrateModel m;
    const auto coarse = substrate_temperature_field(0.5e-12, 0.01, m);
    const auto fine = substrate_temperature_field(0.5e-12, 0.01, m.refined());
    EXPECT_LT(std::abs(fine.t_at_source / coarse.t_at_source - 1.0), 0.02);
    EXPECT_NO_THROW(substrate_temperature_field(0.5e-12, 0.01, m, o));
}

TEST(Substrate, HotterUnderSourceThanFarAway) {
    const auto f = substrate_temperature_field(0.5e-12, 0.01, SubstrateModel{});
    EXPECT_GT(f.at(0, 0), f.at(f.nr - 1, 0));
    EXPECT_GT(f.at(0, 0), f.at(0, f.nz - 1));
    for (double t : f.temperature) EXPECT_GE(t, 0.01 * (1 - 1e-12));
}

TEST(Substrate, ValidatesInput) {
    SubstrateModel m;
    m.cells_oxide = 2;
    EXPECT_THROW(substrate_temperature_field(1e-12, 0.01, m), InvalidParameter);
    m = SubstrateModel{};
    m.source_area = M_PI * 60e-6 * 60e-6;
    EXPECT_THROW(substrate_temperature_field(1e-12, 0.01, m), InvalidParameter);
    EXPECT_THROW(substrate_temperature_field(-1e-12, 0.01, SubstrateModel{}), InvalidParameter);
    EXPECT_THROW(substrate_temperature_field(1e-12, 0.0, SubstrateModel{}), InvalidParameter);
}

}  // namespace
