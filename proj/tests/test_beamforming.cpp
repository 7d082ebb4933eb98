// SPDX-License-Identifier: Apache-2.0

#include "mmwi/beamforming.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace mmwi;
using mmwi::testing::random_gaussian;

namespace
{
// Orthogonal projector distance, for comparing subspaces when singular values tie.
double projector_distance(const CMatrix &a, const CMatrix &b)
{
    return (a * a.adjoint() - b * b.adjoint()).norm();
}

void expect_beamformer_invariants(const CMatrix &H, const LinkBeamformer &bf)
{
    const auto n = bf.precoder.cols();
    EXPECT_LE((bf.precoder.adjoint() * bf.precoder - CMatrix::Identity(n, n)).norm(), 1e-10);
    EXPECT_LE((bf.combiner.adjoint() * bf.combiner - CMatrix::Identity(n, n)).norm(), 1e-10);
    const CMatrix D = bf.combiner.adjoint() * H * bf.precoder;
    const double scale = std::max(1.0, H.norm());
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index c = 0; c < n; ++c)
            if (r != c)
            {
                EXPECT_LE(std::abs(D(r, c)), 1e-9 * scale);
            }
    for (Eigen::Index i = 0; i < n; ++i)
    {
        EXPECT_LE(std::abs(D(i, i).imag()), 1e-9 * scale);
        EXPECT_GE(D(i, i).real(), -1e-9 * scale);
        if (i > 0)
        {
            EXPECT_LE(D(i, i).real(), D(i - 1, i - 1).real() + 1e-9 * scale);
        }
    }
}
} // namespace

TEST(SvdBeamformers, DiagonalChannel)
{
    CMatrix H = CMatrix::Zero(4, 64);
    H(0, 0) = 3.0;
    H(1, 1) = 2.0;
    H(2, 2) = 1.0;
    const auto bf = svd_beamformers(H, 2);
    const CMatrix D = bf.combiner.adjoint() * H * bf.precoder;
    EXPECT_NEAR(std::abs(D(0, 0) - cplx(3.0, 0.0)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(D(1, 1) - cplx(2.0, 0.0)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(D(0, 1)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(D(1, 0)), 0.0, 1e-12);
    // Phase convention: first nonzero precoder entry is real positive.
    EXPECT_NEAR(bf.precoder(0, 0).real(), 1.0, 1e-12);
    EXPECT_NEAR(bf.precoder(1, 1).real(), 1.0, 1e-12);
}

TEST(SvdBeamformers, FullRankPreservesFrobeniusNorm)
{
    std::mt19937_64 rng(1);
    for (int t = 0; t < 50; ++t)
    {
        const CMatrix H = random_gaussian(4, 64, rng);
        const auto bf = svd_beamformers(H, 4);
        const CMatrix D = bf.combiner.adjoint() * H * bf.precoder;
        EXPECT_NEAR(D.squaredNorm(), H.squaredNorm(), 1e-9 * H.squaredNorm());
        expect_beamformer_invariants(H, bf);
    }
}

TEST(SvdBeamformers, RankOneChannel)
{
    std::mt19937_64 rng(2);
    CVector u = random_gaussian(4, 1, rng);
    CVector v = random_gaussian(64, 1, rng);
    u.normalize();
    v.normalize();
    const CMatrix H = 2.5 * u * v.adjoint();
    const auto bf = svd_beamformers(H, 1);
    EXPECT_LT(projector_distance(bf.precoder, v), 1e-10);
    EXPECT_LT(projector_distance(bf.combiner, u), 1e-10);
    EXPECT_NEAR(std::abs((bf.combiner.adjoint() * H * bf.precoder)(0, 0)), H.norm(), 1e-10);
}

TEST(SvdBeamformers, Errors)
{
    std::mt19937_64 rng(3);
    const CMatrix H = random_gaussian(4, 64, rng);
    EXPECT_THROW(svd_beamformers(H, 5), std::invalid_argument);
    EXPECT_THROW(svd_beamformers(H, 0), std::invalid_argument);
    EXPECT_THROW(svd_beamformers(CMatrix::Zero(4, 64), 2), DegenerateChannelError);
}

TEST(SvdBeamformers, ScaleEquivariant)
{
    std::mt19937_64 rng(4);
    for (int t = 0; t < 20; ++t)
    {
        const CMatrix H = random_gaussian(4, 64, rng);
        const auto a = svd_beamformers(H, 4);
        const auto b = svd_beamformers(7.25e-6 * H, 4);
        EXPECT_LT((a.precoder - b.precoder).norm(), 1e-8);
        EXPECT_LT((a.combiner - b.combiner).norm(), 1e-8);
    }
}

TEST(SvdBeamformers, RepeatedSingularValuesCompareSubspaces)
{
    CMatrix H = CMatrix::Zero(4, 8);
    H(0, 0) = 1.0;
    H(1, 1) = 1.0;
    H(2, 2) = 0.5;
    H(3, 3) = 0.25;
    const auto bf = svd_beamformers(H, 2);
    CMatrix expected = CMatrix::Zero(8, 2);
    expected(0, 0) = 1.0;
    expected(1, 1) = 1.0;
    EXPECT_LT(projector_distance(bf.precoder, expected), 1e-10);
}

TEST(BeamformerSet, ConcatenatesPrecodersPerBs)
{
    std::mt19937_64 rng(5);
    const auto channels = mmwi::testing::random_channel_set(3, 2, 4, 16, rng);
    ActivationVector act(3, 2);
    act.assign(0, 1);
    act.assign(2, 1);
    const auto set = compute_beamformers(channels, act, {2, 2, 2});
    EXPECT_TRUE(set.has(0));
    EXPECT_FALSE(set.has(1));
    EXPECT_THROW(set.at(1), std::invalid_argument);
    const CMatrix F = set.bs_precoder(act, 1);
    ASSERT_EQ(F.rows(), 16);
    ASSERT_EQ(F.cols(), 4);
    EXPECT_TRUE(F.leftCols(2) == set.precoder(0));
    EXPECT_TRUE(F.rightCols(2) == set.precoder(2));
    EXPECT_EQ(set.bs_precoder(act, 0).cols(), 0);
}
