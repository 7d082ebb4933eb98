// SPDX-License-Identifier: Apache-2.0

#include "mmwi/channel.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

using namespace mmwi;

TEST(LosProbability, CollapsesToOneInsideBreakpoint)
{
    EXPECT_EQ(los_probability(27.0), 1.0);
    EXPECT_EQ(los_probability(10.0), 1.0);
}

TEST(LosProbability, DecayDistance)
{
    // (27/71 (1 - e^-1) + e^-1)^2 = 0.369984...
    EXPECT_NEAR(los_probability(71.0), 0.370, 1e-3);
    EXPECT_NEAR(los_probability(71.0), 0.3699842611722732, 1e-12);
}

TEST(LosProbability, RejectsNonPositiveDistance)
{
    EXPECT_THROW(los_probability(0.0), std::invalid_argument);
    EXPECT_THROW(los_probability(-3.0), std::invalid_argument);
}

TEST(LosProbability, NonIncreasingBeyondBreakpoint)
{
    double prev = los_probability(27.0);
    for (double d = 27.0; d <= 2000.0; d += 0.25)
    {
        const double p = los_probability(d);
        EXPECT_LE(p, prev + 1e-15) << "d = " << d;
        EXPECT_GE(p, 0.0);
        EXPECT_LE(p, 1.0);
        prev = p;
    }
}

TEST(LinkState, AlwaysLosInsideBreakpoint)
{
    Rng rng(3);
    for (int i = 0; i < 1000; ++i)
        EXPECT_EQ(sample_link_state(10.0, rng), LinkState::LoS);
}

TEST(LinkState, LosFractionMatchesProbability)
{
    Rng rng(11);
    int los = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i)
        los += sample_link_state(71.0, rng) == LinkState::LoS;
    EXPECT_NEAR(static_cast<double>(los) / n, 0.370, 0.01);
}

TEST(LinkState, FarLinksAreNlos)
{
    // p_LoS(1e6) is about 7.3e-10.
    EXPECT_LT(los_probability(1e6), 1e-9);
    Rng rng(5);
    int los = 0;
    for (int i = 0; i < 10000; ++i)
        los += sample_link_state(1e6, rng) == LinkState::LoS;
    EXPECT_EQ(los, 0);
}

TEST(PathLoss, FreeSpaceAtReferenceDistance)
{
    // 20 log10(4 pi / 0.0107069) = 61.391
    EXPECT_NEAR(path_loss_db(1.0, LinkState::LoS, 0.0), 61.38, 0.05);
    EXPECT_NEAR(path_loss_db(1.0, LinkState::NLoS, 0.0), 61.38, 0.05);
    EXPECT_NEAR(reference_path_loss_db(), 61.39094384872776, 1e-9);
}

TEST(PathLoss, LosAtHundredMeters)
{
    EXPECT_NEAR(path_loss_db(100.0, LinkState::LoS, 0.0), 103.38, 0.05);
    EXPECT_NEAR(path_loss_db(100.0, LinkState::NLoS, 0.0), reference_path_loss_db() + 68.0, 1e-9);
}

TEST(PathLoss, RejectsDistanceBelowReference)
{
    Rng rng(1);
    EXPECT_THROW(path_loss_db(0.5, LinkState::LoS, rng), std::invalid_argument);
    EXPECT_THROW(path_loss_db(0.5, LinkState::LoS, 0.0), std::invalid_argument);
}

TEST(PathLoss, ShadowingStandardDeviation)
{
    for (const auto &[state, sigma] : {std::pair{LinkState::NLoS, 9.7}, std::pair{LinkState::LoS, 3.6}})
    {
        Rng rng(77);
        const int n = 100000;
        const double median = path_loss_db(80.0, state, 0.0);
        double sum = 0.0, sum2 = 0.0;
        for (int i = 0; i < n; ++i)
        {
            const double x = path_loss_db(80.0, state, rng) - median;
            sum += x;
            sum2 += x * x;
        }
        const double mean = sum / n;
        const double sd = std::sqrt(sum2 / n - mean * mean);
        EXPECT_NEAR(sd, sigma, 0.15);
        EXPECT_NEAR(mean, 0.0, 0.1);
    }
}

TEST(PathLoss, MedianIncreasesWithDistance)
{
    for (auto state : {LinkState::LoS, LinkState::NLoS})
    {
        double prev = path_loss_db(1.0, state, 0.0);
        for (double d = 1.5; d < 1000.0; d *= 1.1)
        {
            const double pl = path_loss_db(d, state, 0.0);
            EXPECT_GT(pl, prev);
            prev = pl;
        }
    }
}

TEST(ArrayResponse, BroadsideIsAllOnes)
{
    const ArrayGeometry g{8, 8, 0.5, wavelength(28e9)};
    const auto a = array_response(g, 0.0, kPi / 2.0);
    ASSERT_EQ(a.size(), 64);
    for (Eigen::Index i = 0; i < a.size(); ++i)
        EXPECT_NEAR(std::abs(a(i) - cplx(1.0, 0.0)), 0.0, 1e-12);
}

TEST(ArrayResponse, UnitModulusEntries)
{
    const ArrayGeometry g{8, 8, 0.5, wavelength(28e9)};
    Rng rng(8);
    std::uniform_real_distribution<double> az(0.0, 2.0 * kPi), el(0.0, kPi);
    for (int t = 0; t < 100; ++t)
    {
        const auto a = array_response(g, az(rng), el(rng));
        for (Eigen::Index i = 0; i < a.size(); ++i)
            EXPECT_NEAR(std::abs(a(i)), 1.0, 1e-12);
    }
}

TEST(ArrayResponse, HalfWavelengthPairAtEndfire)
{
    // Two elements along the row axis, phase k d u = pi u for u = 0, 1.
    const ArrayGeometry g{2, 1, 0.5, wavelength(28e9)};
    const auto a = array_response(g, kPi / 2.0, kPi / 2.0);
    ASSERT_EQ(a.size(), 2);
    EXPECT_NEAR(std::abs(a(0) - cplx(1.0, 0.0)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(a(1) - cplx(-1.0, 0.0)), 0.0, 1e-12);
}

TEST(ArrayResponse, FlatIndexIsRowMajor)
{
    // Column steps carry k d cos(theta); at theta = 0 only v contributes.
    const ArrayGeometry g{2, 3, 0.25, 1.0};
    const auto a = array_response(g, 0.3, 0.0);
    for (std::size_t u = 0; u < 2; ++u)
        for (std::size_t v = 0; v < 3; ++v)
            EXPECT_NEAR(std::arg(a(static_cast<Eigen::Index>(u * 3 + v)) * std::polar(1.0, -0.5 * kPi * v)), 0.0,
                        1e-12);
}

TEST(ClusterSet, ReferenceSizeAndNormalization)
{
    Rng rng(4);
    const auto cs = sample_cluster_set(ClusterParams{}, rng);
    EXPECT_EQ(cs.clusters, 4u);
    EXPECT_EQ(cs.subpaths, 7u);
    EXPECT_EQ(cs.subpath.size(), 28u);
    double sum = 0.0;
    for (double g : cs.gains)
    {
        EXPECT_GE(g, 0.0);
        sum += g;
    }
    EXPECT_NEAR(sum, 1.0, 1e-9);
    for (const auto &s : cs.subpath)
    {
        EXPECT_GE(s.aoa_azimuth, 0.0);
        EXPECT_LT(s.aoa_azimuth, 2.0 * kPi);
        EXPECT_GE(s.aod_azimuth, 0.0);
        EXPECT_LT(s.aod_azimuth, 2.0 * kPi);
        EXPECT_GE(s.aoa_elevation, 0.0);
        EXPECT_LE(s.aoa_elevation, kPi);
        EXPECT_GE(s.aod_elevation, 0.0);
        EXPECT_LE(s.aod_elevation, kPi);
    }
}

TEST(ClusterSet, SingleClusterHasUnitGain)
{
    Rng rng(4);
    ClusterParams p;
    p.clusters = 1;
    p.subpaths = 1;
    const auto cs = sample_cluster_set(p, rng);
    ASSERT_EQ(cs.gains.size(), 1u);
    EXPECT_DOUBLE_EQ(cs.gains[0], 1.0);
}

TEST(ClusterSet, RejectsEmptyCounts)
{
    Rng rng(4);
    ClusterParams p;
    p.clusters = 0;
    EXPECT_THROW(sample_cluster_set(p, rng), std::invalid_argument);
    p.clusters = 2;
    p.subpaths = 0;
    EXPECT_THROW(sample_cluster_set(p, rng), std::invalid_argument);
}

TEST(ClusterSet, AzimuthsPassKolmogorovSmirnov)
{
    Rng rng(31337);
    const int n = 10000;
    std::vector<double> aod, aoa;
    for (int i = 0; i < n; ++i)
    {
        const auto cs = sample_cluster_set(ClusterParams{}, rng);
        aod.push_back(cs.subpath[0].aod_azimuth / (2.0 * kPi));
        aoa.push_back(cs.subpath[0].aoa_azimuth / (2.0 * kPi));
    }
    const double critical = 1.628 / std::sqrt(static_cast<double>(n)); // 1% level
    for (auto *v : {&aod, &aoa})
    {
        std::sort(v->begin(), v->end());
        double d = 0.0;
        for (int i = 0; i < n; ++i)
        {
            const double x = (*v)[static_cast<std::size_t>(i)];
            d = std::max({d, std::abs(static_cast<double>(i + 1) / n - x), std::abs(x - static_cast<double>(i) / n)});
        }
        EXPECT_LT(d, critical);
    }
}

TEST(ClusterSet, LiteralModeHasZeroPhases)
{
    Rng rng(6);
    ClusterParams p;
    p.random_phase = false;
    for (const auto &s : sample_cluster_set(p, rng).subpath)
        EXPECT_EQ(s.phase, 0.0);
}

namespace
{
const ArrayGeometry kBs{8, 8, 0.5, wavelength(28e9)};
const ArrayGeometry kUe{4, 1, 0.5, wavelength(28e9)};

ClusterSet single_path(double aoa_az, double aoa_el, double aod_az, double aod_el)
{
    ClusterSet cs;
    cs.clusters = 1;
    cs.subpaths = 1;
    cs.gains = {1.0};
    cs.subpath = {SubpathAngles{aoa_az, aoa_el, aod_az, aod_el, 0.0}};
    return cs;
}
} // namespace

TEST(AssembleChannel, SinglePathIsOuterProduct)
{
    const auto cs = single_path(0.4, 1.3, 2.1, 1.7);
    const auto ch = assemble_channel(cs, kBs, kUe, 0.0);
    ASSERT_EQ(ch.H.rows(), 4);
    ASSERT_EQ(ch.H.cols(), 64);
    const CMatrix expected = array_response(kUe, 0.4, 1.3) * array_response(kBs, 2.1, 1.7).adjoint();
    EXPECT_LT((ch.H - expected).norm(), 1e-12);
    EXPECT_NEAR(ch.H.norm(), std::sqrt(4.0 * 64.0), 1e-10);
    Eigen::JacobiSVD<CMatrix> svd(ch.H);
    EXPECT_LT(svd.singularValues()(1), 1e-9 * svd.singularValues()(0));
}

TEST(AssembleChannel, RankBoundedByPathCount)
{
    Rng rng(12);
    ClusterParams p;
    p.clusters = 1;
    p.subpaths = 2;
    const auto ch = assemble_channel(sample_cluster_set(p, rng), kBs, kUe, 0.0);
    Eigen::JacobiSVD<CMatrix> svd(ch.H);
    const auto &s = svd.singularValues();
    EXPECT_LT(s(2), 1e-9 * s(0));
    EXPECT_GT(s(1), 1e-9 * s(0));
}

TEST(AssembleChannel, PathLossScalesAmplitude)
{
    Rng rng(13);
    const auto cs = sample_cluster_set(ClusterParams{}, rng);
    const auto h0 = assemble_channel(cs, kBs, kUe, 0.0);
    const auto h20 = assemble_channel(cs, kBs, kUe, 20.0);
    EXPECT_NEAR(h20.H.norm() / h0.H.norm(), 0.1, 1e-12);
    EXPECT_DOUBLE_EQ(h20.path_loss_db, 20.0);
}

TEST(AssembleChannel, DeterministicAndFinite)
{
    Rng rng(14);
    for (int t = 0; t < 50; ++t)
    {
        const auto cs = sample_cluster_set(ClusterParams{}, rng);
        const auto a = assemble_channel(cs, kBs, kUe, 95.0);
        const auto b = assemble_channel(cs, kBs, kUe, 95.0);
        EXPECT_TRUE(a.H == b.H);
        EXPECT_TRUE(a.H.allFinite());
        EXPECT_GT(a.H.norm(), 0.0);
    }
}

TEST(AssembleChannel, RejectsInconsistentInput)
{
    auto cs = single_path(0, 1, 0, 1);
    cs.gains.push_back(0.5);
    EXPECT_THROW(assemble_channel(cs, kBs, kUe, 0.0), std::invalid_argument);
    EXPECT_THROW(assemble_channel(single_path(0, 1, 0, 1), kBs, kUe, INFINITY), std::invalid_argument);
}

TEST(SynthesizeChannels, ShapesAndReproducibility)
{
    NetworkLayout layout;
    layout.bs_positions = deploy_grid_bs(300.0, 2, 2);
    Rng rng(3);
    layout.ue_positions = deploy_uniform_ues(300.0, 5, rng);
    const ChannelModel model;
    const auto a = synthesize_channels(layout, model, 99, 4);
    const auto b = synthesize_channels(layout, model, 99, 4);
    const auto c = synthesize_channels(layout, model, 99, 5);
    for (std::size_t k = 0; k < 5; ++k)
        for (std::size_t j = 0; j < 4; ++j)
        {
            EXPECT_EQ(a.H(k, j).rows(), 4);
            EXPECT_EQ(a.H(k, j).cols(), 64);
            EXPECT_TRUE(a.H(k, j) == b.H(k, j));
            EXPECT_FALSE(a.H(k, j) == c.H(k, j));
            EXPECT_GT(a.at(k, j).path_loss_db, 61.0);
        }
}
