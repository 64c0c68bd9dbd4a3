#include <gtest/gtest.h>

#include "sbs/generators.hpp"
#include "sbs/info.hpp"
#include "support.hpp"

namespace sbs {
namespace {

using testing::binary_entropy;
using testing::diag_state;

constexpr double kTol = 1e-9;

TEST(Entropy, Examples) {
    EXPECT_NEAR(entropy(DensityMatrix::validated(diag_state({0.5, 0.5}))).value, 1.0, kTol);

    Rng rng(1);
    Eigen::VectorXcd psi(4);
    for (auto& z : psi) z = rng.complex_normal();
    psi.normalize();
    EXPECT_NEAR(entropy(DensityMatrix::validated(testing::pure(psi))).value, 0.0, kTol);

    // relative state of the counter-example for s = 1: four orthogonal strings
    EXPECT_NEAR(entropy(odd_parity_state(3)).value, 2.0, kTol);
}

TEST(Entropy, ClampsRoundOffNegativeEigenvalues) {
    const auto m = DensityMatrix::validated(diag_state({1.0 + 5e-10, -5e-10}));
    const double h = entropy(m).value;
    EXPECT_TRUE(std::isfinite(h));
    EXPECT_NEAR(h, 0.0, 1e-8);
}

TEST(Entropy, EigenvalueAboveOneIsAnError) {
    const auto m = DensityMatrix::unchecked(diag_state({1.5, -0.5}));
    EXPECT_THROW(entropy(m), Error);
}

TEST(Entropy, AgreesWithGeneralEigensolverOracle) {
    Rng rng(4);
    for (int trial = 0; trial < 20; ++trial) {
        const auto m = random_density_matrix(5, rng);
        EXPECT_NEAR(entropy(m).value, testing::oracle_entropy(m.matrix()), 1e-10);
    }
}

TEST(MutualInformation, CounterexampleSystemFragment) {
    const auto half = partial_trace(counterexample(0.5), {0, 1});
    EXPECT_NEAR(mutual_information(half, {0}, {1}).value, 1.0, kTol);

    const auto quarter = partial_trace(counterexample(0.25), {0, 1});
    EXPECT_NEAR(binary_entropy(0.25), 0.811278124459133, 1e-12);
    EXPECT_NEAR(mutual_information(quarter, {0}, {1}).value, 0.811278124459133, kTol);
}

TEST(MutualInformation, ProductStateIsZero) {
    Rng rng(8);
    const auto s = testing::random_product_state({2, 3}, rng);
    EXPECT_NEAR(mutual_information(s, {0}, {1}).value, 0.0, kTol);
}

TEST(MutualInformation, OverlappingParts) {
    try {
        mutual_information(counterexample(0.5), {0, 1}, {1, 2});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::overlapping_parts);
    }
}

TEST(ConditionalMutualInformation, CounterexamplePairsVanish) {
    for (double p : {0.0, 0.2, 0.5, 0.9, 1.0}) {
        const auto s = counterexample(p);
        for (auto [i, j] : {std::pair<std::size_t, std::size_t>{1, 2}, {1, 3}, {2, 3}}) {
            EXPECT_NEAR(conditional_mutual_information(s, {i}, {j}, {0}).value, 0.0, kTol) << "p=" << p;
        }
    }
}

TEST(ConditionalMutualInformation, TrivialConditionReducesToMutualInformation) {
    Rng rng(9);
    const auto ab = random_state({2, 3}, rng);
    const auto one = MultipartiteState(DensityMatrix::validated(Matrix::Ones(1, 1)), {1}, {"C"});
    const auto abc = tensor(ab, one);
    EXPECT_NEAR(conditional_mutual_information(abc, {0}, {1}, {2}).value, mutual_information(ab, {0}, {1}).value,
                1e-12);
}

TEST(ConditionalMutualInformation, ClassicalGhzDiagonal) {
    Matrix m = Matrix::Zero(8, 8);
    m(0, 0) = m(7, 7) = 0.5;
    const auto s = make_state(m, {2, 2, 2}, {"A", "B", "C"});
    EXPECT_NEAR(conditional_mutual_information(s, {0}, {1}, {2}).value, 0.0, kTol);
}

TEST(MultipartiteMutualInformation, Examples) {
    const MultipartiteState rel(odd_parity_state(3), {3, 3, 3}, {"E1", "E2", "E3"});
    EXPECT_NEAR(multipartite_mutual_information(rel, {{0}, {1}, {2}}).value, 1.0, kTol);

    Rng rng(12);
    const auto prod = testing::random_product_state({2, 3, 2}, rng);
    EXPECT_NEAR(multipartite_mutual_information(prod, {{0}, {1}, {2}}).value, 0.0, kTol);

    const MultipartiteState zero(DensityMatrix::validated(basis_projector({3, 3, 3}, {0, 0, 0}).matrix()),
                                 {3, 3, 3});
    EXPECT_NEAR(multipartite_mutual_information(zero, {{0}, {1}, {2}}).value, 0.0, kTol);
}

TEST(MultipartiteMutualInformation, Errors) {
    const auto s = counterexample(0.5);
    EXPECT_THROW(multipartite_mutual_information(s, {{1}}), Error);
    try {
        multipartite_mutual_information(s, {{1, 2}, {2}});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::overlapping_parts);
    }
}

TEST(ConditionalMultipartiteMi, CounterexampleEqualsP) {
    for (int k = 0; k <= 10; ++k) {
        const double p = k / 10.0;
        const auto s = counterexample(p);
        const double oracle = testing::classical_cond_multipartite(s.matrix(), s.dims(), {{1}, {2}, {3}}, {0});
        EXPECT_NEAR(oracle, p, 1e-12);
        EXPECT_NEAR(conditional_multipartite_mi(s, {{1}, {2}, {3}}, {0}).value, p, kTol) << "p=" << p;
    }
}

TEST(ConditionalMultipartiteMi, SbsStateIsZero) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto s = random_sbs({2, 3, 3, 3}, 2, seed);
        EXPECT_NEAR(conditional_multipartite_mi(s, {{1}, {2}, {3}}, {0}).value, 0.0, kTol);
    }
}

TEST(HolevoChi, Examples) {
    const MultipartiteState zero(DensityMatrix::validated(basis_projector({3, 3, 3}, {0, 0, 0}).matrix()),
                                 {3, 3, 3});
    const Ensemble ce({0.5, 0.5}, {zero.density(), odd_parity_state(3)});
    EXPECT_NEAR(holevo_chi(ce).value, 1.0, kTol);

    Rng rng(2);
    const Ensemble single({1.0}, {random_density_matrix(3, rng)});
    EXPECT_NEAR(holevo_chi(single).value, 0.0, kTol);

    const Ensemble orthogonal({0.3, 0.7}, {DensityMatrix::validated(diag_state({1, 0})),
                                           DensityMatrix::validated(diag_state({0, 1}))});
    EXPECT_NEAR(binary_entropy(0.3), 0.881290899230693, 1e-12);
    EXPECT_NEAR(holevo_chi(orthogonal).value, 0.881290899230693, kTol);
}

TEST(Ensemble, Validation) {
    const auto a = DensityMatrix::validated(diag_state({1, 0}));
    EXPECT_THROW(Ensemble({0.5, 0.6}, {a, a}), Error);
    EXPECT_THROW(Ensemble({-0.1, 1.1}, {a, a}), Error);
    EXPECT_THROW(Ensemble({0.5, 0.5}, {a, DensityMatrix::validated(diag_state({1, 0, 0}))}), Error);
}

// --- properties ---------------------------------------------------------------

TEST(InfoProperty, StrongSubadditivity) {
    Rng rng(100);
    for (int trial = 0; trial < 500; ++trial) {
        const Dims dims = trial % 2 == 0 ? Dims{2, 2, 2} : Dims{2, 3, 2};
        // mix in low-rank states, where SSA is closest to tight
        MultipartiteState s = random_state(dims, rng);
        if (trial % 3 == 0) {
            Eigen::VectorXcd psi(static_cast<Eigen::Index>(s.dim()));
            for (auto& z : psi) z = rng.complex_normal();
            psi.normalize();
            s = MultipartiteState(DensityMatrix::unchecked(testing::pure(psi)), dims);
        }
        EXPECT_GE(conditional_mutual_information(s, {0}, {1}, {2}).value, -kTol);
    }
}

TEST(InfoProperty, MultipartiteMiVanishesIffProduct) {
    Rng rng(200);
    for (int trial = 0; trial < 50; ++trial) {
        const Dims dims = trial % 2 == 0 ? Dims{2, 2, 2} : Dims{2, 3};
        std::vector<Subsystems> parts;
        for (std::size_t k = 0; k < dims.size(); ++k) parts.push_back({k});

        const auto prod = testing::random_product_state(dims, rng);
        EXPECT_LE(max_abs(prod.matrix() - product_of_marginals(prod).matrix()), kTol);
        EXPECT_LE(multipartite_mutual_information(prod, parts).value, kTol);

        const auto corr = random_state(dims, rng);
        ASSERT_GT(max_abs(corr.matrix() - product_of_marginals(corr).matrix()), 1e-6);
        EXPECT_GT(multipartite_mutual_information(corr, parts).value, kTol);
    }
}

TEST(InfoProperty, CqMutualInformationEqualsHolevo) {
    Rng rng(300);
    for (int trial = 0; trial < 40; ++trial) {
        const auto cq = testing::random_cq(3, 4, {0, 1, 2}, rng);
        std::vector<DensityMatrix> states;
        for (auto g : cq.groups) states.push_back(cq.relatives[g]);
        const Ensemble e(cq.probs, states);
        EXPECT_NEAR(mutual_information(cq.state, {0}, {1}).value, holevo_chi(e).value, kTol);
    }
}

TEST(InfoProperty, ConditionalMultipartiteIsAverageOverRelativeStates) {
    Rng rng(400);
    for (int trial = 0; trial < 20; ++trial) {
        // sum_s p_s |s><s| (x) rho^(s) with correlated rho^(s) on (2, 2)
        const std::size_t ds = 2;
        const Dims env{2, 2};
        std::vector<MultipartiteState> rel;
        std::vector<double> probs{0.3 + 0.4 * rng.uniform()};
        probs.push_back(1.0 - probs[0]);
        Matrix rho = Matrix::Zero(8, 8);
        double expected = 0.0;
        for (std::size_t s = 0; s < ds; ++s) {
            rel.push_back(random_state(env, rng));
            Matrix proj = Matrix::Zero(2, 2);
            proj(detail::idx(s), detail::idx(s)) = 1.0;
            rho += probs[s] * kron(proj, rel.back().matrix());
            expected += probs[s] * multipartite_mutual_information(rel.back(), {{0}, {1}}).value;
        }
        const MultipartiteState cq(DensityMatrix::validated(rho), {2, 2, 2});
        EXPECT_NEAR(conditional_multipartite_mi(cq, {{1}, {2}}, {0}).value, expected, kTol);
    }
}

TEST(InfoProperty, EntropyInvariantUnderSubsystemPermutation) {
    Rng rng(500);
    for (int trial = 0; trial < 20; ++trial) {
        const auto s = random_state({2, 3, 2}, rng);
        const auto moved = permute_subsystems(s, {2, 0, 1});
        EXPECT_NEAR(entropy(s.density()).value, entropy(moved.density()).value, kTol);
        // subsystem 1 of s is subsystem 2 of moved
        EXPECT_NEAR(entropy(s, {1}).value, entropy(moved, {2}).value, kTol);
        EXPECT_NEAR(entropy(s, {0, 2}).value, entropy(moved, {0, 1}).value, kTol);
    }
}

}  // namespace
}  // namespace sbs
