#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "dimercorr/dynamics.hpp"
#include "dimercorr/liouvillian.hpp"
#include "dimercorr/presets.hpp"
#include "oracles.hpp"

using namespace dimercorr;
using namespace dimercorr::liouvillian;

namespace {

Operator random_operator(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Operator a;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) a(i, j) = cd(n(rng), n(rng));
  return a;
}

Operator act(const Superoperator& l, const Operator& rho) { return unvectorize(l * vectorize(rho)); }

SystemConfig bare(const std::string& preset) {
  auto c = presets::get(preset).config;
  c.bath.lambda0_mev = 0.0;
  c.optical_temperature_k = 0.0;
  c.pump_rate_per_ps = 0.0;
  return c;
}

}  // namespace

TEST(Liouvillian, VectorizationConvention) {
  std::mt19937_64 rng(1);
  const Operator a = random_operator(rng), b = random_operator(rng), rho = random_operator(rng);
  EXPECT_TRUE(act(kron(b.transpose(), a), rho).isApprox(a * rho * b, 1e-12));
  EXPECT_TRUE(act(left_multiply(a), rho).isApprox(a * rho, 1e-12));
  EXPECT_TRUE(act(right_multiply(b), rho).isApprox(rho * b, 1e-12));
  EXPECT_TRUE(act(commutator(a), rho).isApprox(a * rho - rho * a, 1e-12));
  const Operator l = random_operator(rng);
  const Operator expected = l * rho * l.adjoint() - 0.5 * (l.adjoint() * l * rho + rho * l.adjoint() * l);
  EXPECT_TRUE(act(lindblad(l), rho).isApprox(expected, 1e-12));
  const Superoperator x = kron(b, a);
  EXPECT_TRUE(act(hermitian_conjugate_map(x), rho).isApprox(act(x, rho.adjoint()).adjoint(), 1e-12));
}

class PresetGenerators : public ::testing::TestWithParam<std::string> {};

TEST_P(PresetGenerators, TraceAndHermiticityPreserved) {
  auto c = presets::get(GetParam()).config;
  c.nonrad_rate_per_ps = 1e-4;
  c.eea_rate_per_ps = 1e-3;
  for (bool secular : {false, true}) {
    c.flags.secular = secular;
    const auto liou = assemble(c);
    const double scale = liou.matrix.norm();
    const auto tr = dynamics::trace_functional(Operator::Identity());
    EXPECT_LT((tr * liou.matrix).norm(), 1e-12 * scale);
    std::mt19937_64 rng(2);
    for (int i = 0; i < 5; ++i) {
      const Operator rho = random_operator(rng);
      EXPECT_LT((act(liou.matrix, rho.adjoint()) - act(liou.matrix, rho).adjoint()).norm(), 1e-12 * scale);
    }
  }
}

INSTANTIATE_TEST_SUITE_P(All, PresetGenerators,
                         ::testing::Values("h-dimer", "j-dimer", "orthogonal", "dimer-45", "magic-angle"));

TEST(Liouvillian, RenormalizedParameters) {
  auto c = presets::get("h-dimer").config;
  const auto liou = assemble(c);
  const double k0 = oracle::debye_waller(5.0, 90.0, 300.0);
  EXPECT_NEAR(liou.meta.kappa0, k0, 1e-9);
  EXPECT_NEAR(liou.meta.omega_prime_mev, 1800.0 - 5.0, 1e-9);
  const double j = oracle::dipole_coupling_mev(c.geometry.mu1_debye, c.geometry.mu2_debye, c.geometry.r_nm);
  EXPECT_NEAR(liou.meta.coupling_bare_mev, j, 1e-9);
  EXPECT_NEAR(liou.meta.coupling_prime_mev, k0 * k0 * j, 1e-9);
  // Single-excitation splitting equals |J'|.
  const auto& e = liou.eig.energies;
  EXPECT_NEAR(e(2) - e(1), std::abs(liou.meta.coupling_prime_mev), 1e-9);
  c.coupling_override_mev = 36.11;
  EXPECT_NEAR(assemble(c).meta.coupling_prime_mev, k0 * k0 * 36.11, 1e-9);
}

TEST(Liouvillian, SuperradiantAndSubradiantDecay) {
  const auto c = bare("h-dimer");
  const auto liou = assemble(c);
  const double j = liou.meta.coupling_prime_mev;
  const Operator s = hilbert::projector(hilbert::symmetric_state());
  const Operator a = hilbert::projector(hilbert::antisymmetric_state());
  const double ds = act(liou.matrix, s)(1, 1).real() + act(liou.matrix, s)(2, 2).real();
  const double da = act(liou.matrix, a)(1, 1).real() + act(liou.matrix, a)(2, 2).real();
  // H-dimer: the symmetric (bright) state sits J'/2 above the monomer line.
  const double gamma_s = oracle::spontaneous_rate_per_ps(1800.0 + 0.5 * j, 10.0);
  EXPECT_NEAR(-ds, 2.0 * gamma_s, 1e-9 * gamma_s);
  EXPECT_NEAR(da, 0.0, 1e-12 * gamma_s);
}

TEST(Liouvillian, OrthogonalDimerDecaysIndependently) {
  const auto liou = assemble(bare("orthogonal"));
  const Operator eg = hilbert::projector(hilbert::basis_ket(hilbert::BasisState::kEG));
  const Operator ee = hilbert::projector(hilbert::basis_ket(hilbert::BasisState::kEE));
  const double g = oracle::spontaneous_rate_per_ps(1800.0, 10.0);
  EXPECT_NEAR(act(liou.matrix, eg)(0, 0).real(), g, 1e-9 * g);
  EXPECT_NEAR(act(liou.matrix, ee)(3, 3).real(), -2.0 * g, 1e-9 * g);
  EXPECT_NEAR(liou.meta.gamma_opt_per_ps, g, 1e-9 * g);
}

TEST(Liouvillian, ThermalOpticalOccupation) {
  auto c = bare("orthogonal");
  c.optical_temperature_k = 5800.0;
  const auto liou = assemble(c);
  const double g = oracle::spontaneous_rate_per_ps(1800.0, 10.0);
  const double n = 1.0 / std::expm1(1800.0 / (oracle::kBoltzmannMev * 5800.0));
  const Operator gg = hilbert::projector(hilbert::basis_ket(hilbert::BasisState::kGG));
  // Absorption out of the ground state through both emitters.
  EXPECT_NEAR(act(liou.matrix, gg)(0, 0).real(), -2.0 * g * n, 1e-9 * g * n);
  EXPECT_NEAR(liou.meta.optical_occupation, n, 1e-12);
}

TEST(Liouvillian, PumpFeedsSymmetricState) {
  auto c = bare("h-dimer");
  c.pump_rate_per_ps = 1e-3;
  const auto liou = assemble(c);
  const Operator gg = hilbert::projector(hilbert::basis_ket(hilbert::BasisState::kGG));
  const Operator d = unvectorize(liou.pump * vectorize(gg));
  const Ket s = hilbert::symmetric_state();
  EXPECT_NEAR((s.adjoint() * d * s)(0).real(), 2.0 * 1e-3, 1e-12);
  EXPECT_NEAR(d(0, 0).real(), -2.0 * 1e-3, 1e-12);
  EXPECT_NEAR(liou.meta.pump_ladder_rate_per_ps, 2e-3, 0.0);
}

TEST(Liouvillian, ExtraChannels) {
  auto c = bare("orthogonal");
  c.optical_temperature_k = 0.0;
  c.nonrad_rate_per_ps = 0.0;
  c.eea_rate_per_ps = 0.5;
  const Operator ee = hilbert::projector(hilbert::basis_ket(hilbert::BasisState::kEE));
  const Operator d = unvectorize(extra_channels(c) * vectorize(ee));
  // Two channels out of |ee>, each at the configured rate.
  EXPECT_NEAR(d(3, 3).real(), -1.0, 1e-12);
  EXPECT_NEAR(d(1, 1).real(), 0.5, 1e-12);
  EXPECT_NEAR(d(2, 2).real(), 0.5, 1e-12);
  c.eea_rate_per_ps = 0.0;
  c.nonrad_rate_per_ps = 0.25;
  const Operator eg = hilbert::projector(hilbert::basis_ket(hilbert::BasisState::kEG));
  EXPECT_NEAR(unvectorize(extra_channels(c) * vectorize(eg))(0, 0).real(), 0.25, 1e-12);
}

TEST(Liouvillian, PhononRelaxationObeysDetailedBalance) {
  // Steady state of coherent + phonon parts alone: the single-excitation
  // eigenstates are thermally populated at the bath temperature.
  auto c = presets::get("h-dimer").config;
  const auto liou = assemble(c);
  Superoperator l = liou.coherent + liou.phonon;
  // Restrict to the single-excitation sector by starting there and evolving long.
  Operator rho = Operator::Zero();
  rho(1, 1) = 1.0;
  const dynamics::Propagator prop(l);
  const Operator late = unvectorize(prop.apply(vectorize(rho), 5e4));
  const Ket lo = liou.eig.vector(1), hi = liou.eig.vector(2);
  const double ratio = (hi.adjoint() * late * hi)(0).real() / (lo.adjoint() * late * lo)(0).real();
  const double de = liou.eig.energies(2) - liou.eig.energies(1);
  EXPECT_NEAR(ratio, std::exp(-de / (oracle::kBoltzmannMev * 300.0)), 1e-4);
}

TEST(Liouvillian, ValidationErrors) {
  auto c = presets::get("h-dimer").config;
  c.nonrad_rate_per_ps = -1.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = presets::get("h-dimer").config;
  c.pump_rate_per_ps = -1.0;
  EXPECT_THROW(assemble(c), std::invalid_argument);
  c = presets::get("h-dimer").config;
  c.pump_direction = Vec3::Zero();
  EXPECT_THROW(c.validate(), std::invalid_argument);
}
