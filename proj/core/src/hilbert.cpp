#include "dimercorr/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dimercorr::hilbert {

Ket basis_ket(BasisState s) {
  Ket k = Ket::Zero();
  k(static_cast<int>(s)) = 1.0;
  return k;
}

Operator projector(const Ket& psi) { return psi * psi.adjoint(); }

Ket symmetric_state() {
  return (basis_ket(BasisState::kEG) + basis_ket(BasisState::kGE)) / std::sqrt(2.0);
}

Ket antisymmetric_state() {
  return (basis_ket(BasisState::kEG) - basis_ket(BasisState::kGE)) / std::sqrt(2.0);
}

Operator site_operator(int emitter, Ladder kind) {
  if (emitter != 1 && emitter != 2) {
    throw std::invalid_argument("emitter index must be 1 or 2, got " + std::to_string(emitter));
  }
  // Emitter 1 is the first tensor factor: eg -> gg and ee -> ge.
  Operator lower = Operator::Zero();
  if (emitter == 1) {
    lower(0, 1) = 1.0;
    lower(2, 3) = 1.0;
  } else {
    lower(0, 2) = 1.0;
    lower(1, 3) = 1.0;
  }
  switch (kind) {
    case Ladder::kLower:
      return lower;
    case Ladder::kRaise:
      return lower.adjoint();
    case Ladder::kNumber:
      return lower.adjoint() * lower;
  }
  return lower;
}

Operator excitation_number() {
  return site_operator(1, Ladder::kNumber) + site_operator(2, Ladder::kNumber);
}

Operator EigenSystem::group_projector(std::size_t g) const {
  Operator p = Operator::Zero();
  for (int i : groups.at(g)) p += vectors.col(i) * vectors.col(i).adjoint();
  return p;
}

double EigenSystem::group_energy(std::size_t g) const {
  double e = 0.0;
  for (int i : groups.at(g)) e += energies(i);
  return e / static_cast<double>(groups.at(g).size());
}

namespace {

// Largest-magnitude component made real and positive, for deterministic output.
void fix_phase(Ket& v) {
  Eigen::Index k = 0;
  v.cwiseAbs().maxCoeff(&k);
  const cd c = v(k);
  if (std::abs(c) > 0.0) v *= std::conj(c) / std::abs(c);
}

void align_single_excitation(EigenSystem& es, const std::vector<int>& group) {
  if (group.size() < 2) return;
  Operator p = Operator::Zero();
  for (int i : group) p += es.vectors.col(i) * es.vectors.col(i).adjoint();
  const Ket eg = basis_ket(BasisState::kEG);
  const Ket ge = basis_ket(BasisState::kGE);
  if ((p * eg - eg).norm() > 1e-8 || (p * ge - ge).norm() > 1e-8) return;

  std::vector<Ket> basis = {symmetric_state(), antisymmetric_state()};
  // Complete the group with whatever remains after removing the pair.
  for (int i : group) {
    Ket v = es.vectors.col(i);
    for (const Ket& b : basis) v -= b * (b.adjoint() * v)(0);
    if (v.norm() > 1e-6) {
      v.normalize();
      fix_phase(v);
      basis.push_back(v);
    }
    if (basis.size() == group.size()) break;
  }
  for (std::size_t k = 0; k < group.size(); ++k) es.vectors.col(group[k]) = basis[k];
}

}  // namespace

EigenSystem eigendecompose(const Operator& h, double degeneracy_tol) {
  const double scale = std::max(1.0, h.norm());
  if ((h - h.adjoint()).norm() > 1e-12 * scale) {
    throw std::invalid_argument("eigendecompose: Hamiltonian is not Hermitian");
  }
  if (!(degeneracy_tol >= 0.0)) throw std::invalid_argument("degeneracy tolerance must be >= 0");

  Eigen::SelfAdjointEigenSolver<Operator> solver(h);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigendecompose: solver failed");

  EigenSystem es;
  es.degeneracy_tol = degeneracy_tol;
  es.energies = solver.eigenvalues();
  es.vectors = solver.eigenvectors();
  for (int i = 0; i < 4; ++i) {
    Ket v = es.vectors.col(i);
    fix_phase(v);
    es.vectors.col(i) = v;
  }

  std::vector<int> current = {0};
  for (int i = 1; i < 4; ++i) {
    if (es.energies(i) - es.energies(i - 1) <= degeneracy_tol) {
      current.push_back(i);
    } else {
      es.groups.push_back(current);
      current = {i};
    }
  }
  es.groups.push_back(current);
  for (const auto& g : es.groups) align_single_excitation(es, g);
  return es;
}

BohrDecomposition bohr_decompose(const Operator& a, const EigenSystem& eig) {
  const std::size_t n = eig.groups.size();
  std::vector<Operator> proj(n);
  for (std::size_t g = 0; g < n; ++g) proj[g] = eig.group_projector(g);

  BohrDecomposition out;
  const double drop = 1e-15 * std::max(1.0, a.norm());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      Operator c = proj[i] * a * proj[j];
      if (c.norm() <= drop) continue;
      const double w = eig.group_energy(j) - eig.group_energy(i);
      auto it = std::find_if(out.begin(), out.end(), [&](const BohrComponent& b) {
        return std::abs(b.frequency - w) <= eig.degeneracy_tol;
      });
      if (it == out.end()) {
        out.push_back({w, c});
      } else {
        it->op += c;
      }
    }
  }
  std::sort(out.begin(), out.end(),
            [](const BohrComponent& x, const BohrComponent& y) { return x.frequency < y.frequency; });
  return out;
}

}  // namespace dimercorr::hilbert
