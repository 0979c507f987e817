#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "dimercorr/hilbert.hpp"

using namespace dimercorr;
using namespace dimercorr::hilbert;

namespace {

Operator random_hermitian(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Operator a;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) a(i, j) = cd(n(rng), n(rng));
  return 0.5 * (a + a.adjoint());
}

Operator random_operator(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Operator a;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) a(i, j) = cd(n(rng), n(rng));
  return a;
}

}  // namespace

TEST(Hilbert, LadderActionOnBasis) {
  const Ket gg = basis_ket(BasisState::kGG), eg = basis_ket(BasisState::kEG);
  const Ket ge = basis_ket(BasisState::kGE), ee = basis_ket(BasisState::kEE);
  EXPECT_TRUE((site_operator(1, Ladder::kRaise) * gg).isApprox(eg));
  EXPECT_TRUE((site_operator(2, Ladder::kRaise) * gg).isApprox(ge));
  EXPECT_TRUE((site_operator(1, Ladder::kRaise) * ge).isApprox(ee));
  EXPECT_TRUE((site_operator(1, Ladder::kLower) * site_operator(2, Ladder::kLower) * ee).isApprox(gg));
  EXPECT_NEAR((site_operator(1, Ladder::kLower) * gg).norm(), 0.0, 0.0);
}

TEST(Hilbert, SiteOperatorAlgebra) {
  for (int m : {1, 2}) {
    const Operator up = site_operator(m, Ladder::kRaise), dn = site_operator(m, Ladder::kLower);
    EXPECT_TRUE(up.adjoint().isApprox(dn));
    EXPECT_TRUE((up * dn + dn * up).isApprox(Operator::Identity()));
    EXPECT_TRUE((up * dn).isApprox(site_operator(m, Ladder::kNumber)));
    EXPECT_NEAR((dn * dn).norm(), 0.0, 0.0);
  }
  // Different sites commute.
  const Operator a = site_operator(1, Ladder::kLower), b = site_operator(2, Ladder::kRaise);
  EXPECT_NEAR((a * b - b * a).norm(), 0.0, 1e-15);
  const Eigen::Vector4d diag = excitation_number().diagonal().real();
  EXPECT_EQ(diag, Eigen::Vector4d(0, 1, 1, 2));
}

TEST(Hilbert, SymmetricStatesOrthonormal) {
  EXPECT_NEAR(symmetric_state().norm(), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(symmetric_state().dot(antisymmetric_state())), 0.0, 1e-15);
  EXPECT_NEAR(projector(symmetric_state()).trace().real(), 1.0, 1e-15);
}

TEST(Hilbert, EigendecompositionReconstructs) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const Operator h = random_hermitian(rng);
    const auto eig = eigendecompose(h);
    for (int i = 1; i < 4; ++i) EXPECT_LE(eig.energies(i - 1), eig.energies(i));
    EXPECT_TRUE((eig.vectors.adjoint() * eig.vectors).isApprox(Operator::Identity(), 1e-12));
    const Operator back = eig.vectors * eig.energies.cast<cd>().asDiagonal() * eig.vectors.adjoint();
    EXPECT_TRUE(back.isApprox(h, 1e-12));
  }
}

TEST(Hilbert, DegenerateSinglesRotatedToSymmetricPair) {
  Operator h = Operator::Zero();
  h(1, 1) = h(2, 2) = 1.0;
  h(3, 3) = 2.0;
  const auto eig = eigendecompose(h);
  ASSERT_EQ(eig.groups.size(), 3u);
  bool found_s = false, found_a = false;
  for (int i = 0; i < 4; ++i) {
    found_s |= std::abs(std::abs(eig.vector(i).dot(symmetric_state())) - 1.0) < 1e-12;
    found_a |= std::abs(std::abs(eig.vector(i).dot(antisymmetric_state())) - 1.0) < 1e-12;
  }
  EXPECT_TRUE(found_s && found_a);
}

TEST(Hilbert, NonHermitianRejected) {
  Operator h = Operator::Zero();
  h(0, 1) = 1.0;
  EXPECT_THROW(eigendecompose(h), std::invalid_argument);
}

TEST(Hilbert, BohrDecompositionCompleteAndEigen) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const Operator h = random_hermitian(rng);
    const Operator a = random_operator(rng);
    const auto eig = eigendecompose(h);
    const auto parts = bohr_decompose(a, eig);
    Operator sum = Operator::Zero();
    for (const auto& p : parts) {
      sum += p.op;
      // [H, A(w)] = -w A(w): the component lowers the energy by w.
      EXPECT_LT((h * p.op - p.op * h + p.frequency * p.op).norm(), 1e-10 * (1.0 + a.norm()));
    }
    EXPECT_TRUE(sum.isApprox(a, 1e-12));
  }
}

TEST(Hilbert, BohrDecompositionOfDimerLowering) {
  // Coupled dimer: sigma_1^- splits into four transitions at w' +- J'/2.
  const double w = 10.0, j = 2.0;
  const Operator s1p = site_operator(1, Ladder::kRaise), s2p = site_operator(2, Ladder::kRaise);
  const Operator h = w * excitation_number() + 0.5 * j * (s1p * s2p.adjoint() + s2p * s1p.adjoint());
  const auto parts = bohr_decompose(site_operator(1, Ladder::kLower), eigendecompose(h));
  std::vector<double> freqs;
  for (const auto& p : parts)
    if (p.op.norm() > 1e-12) freqs.push_back(p.frequency);
  std::sort(freqs.begin(), freqs.end());
  ASSERT_EQ(freqs.size(), 2u);
  EXPECT_NEAR(freqs[0], w - 0.5 * j, 1e-12);
  EXPECT_NEAR(freqs[1], w + 0.5 * j, 1e-12);
}
