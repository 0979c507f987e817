#pragma once

#include <vector>

#include "dimercorr/types.hpp"

namespace dimercorr::hilbert {

enum class BasisState : int { kGG = 0, kEG = 1, kGE = 2, kEE = 3 };
enum class Ladder { kRaise, kLower, kNumber };

inline constexpr double kDefaultDegeneracyTol = 1e-9;  // meV

Ket basis_ket(BasisState s);
Operator projector(const Ket& psi);

// (|eg> + |ge>)/sqrt2 and (|eg> - |ge>)/sqrt2.
Ket symmetric_state();
Ket antisymmetric_state();

// sigma_m^+, sigma_m^- or sigma_m^+ sigma_m^- for emitter m in {1, 2}.
Operator site_operator(int emitter, Ladder kind);

// n_1 + n_2.
Operator excitation_number();

struct EigenSystem {
  Eigen::Vector4d energies;             // ascending
  Operator vectors;                     // column i is the eigenvector of energies(i)
  std::vector<std::vector<int>> groups;  // degenerate index groups
  double degeneracy_tol = kDefaultDegeneracyTol;

  Ket vector(int i) const { return vectors.col(i); }
  Operator group_projector(std::size_t g) const;
  double group_energy(std::size_t g) const;
};

// Throws std::invalid_argument for non-Hermitian input. Degenerate groups that
// contain both single-excitation site states are rotated onto the
// symmetric/antisymmetric pair.
EigenSystem eigendecompose(const Operator& h, double degeneracy_tol = kDefaultDegeneracyTol);

// Component A(w) = sum over E_j - E_i = w of |i><i|A|j><j|; w > 0 lowers energy.
struct BohrComponent {
  double frequency;
  Operator op;
};
using BohrDecomposition = std::vector<BohrComponent>;

BohrDecomposition bohr_decompose(const Operator& a, const EigenSystem& eig);

}  // namespace dimercorr::hilbert
