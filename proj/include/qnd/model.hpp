#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "qnd/protocol.hpp"
#include "qnd/types.hpp"

namespace qnd {

// Energy levels of the measured system (hbar = 1; energies in inverse time).
struct SystemSpec {
  std::vector<double> energies;
  std::vector<std::string> labels;  // optional; empty or one per level

  std::size_t size() const { return energies.size(); }

  // omega_mn = E_m - E_n
  double transition_frequency(std::size_t m, std::size_t n) const {
    return energies.at(m) - energies.at(n);
  }

  void validate() const;
};

// Energy levels of the measuring device. They never enter the reduced
// dynamics (only eigenvalue gaps of the couplings do), but are carried for
// the composite-space oracle.
struct DeviceSpec {
  std::vector<double> energies;

  std::size_t size() const { return energies.size(); }
  void validate() const;
};

// Eigenvalue sheets of the measurement operators plus their pulse schedule.
// coupling(j)(n, k) is the joint eigenvalue of the j-th operator on level
// (n, k).
class InteractionSpec {
 public:
  InteractionSpec() = default;
  InteractionSpec(std::vector<RealMatrix> coupling, Protocol protocol);

  std::size_t acts() const { return coupling_.size(); }  // M
  const RealMatrix& coupling(std::size_t j) const { return coupling_.at(j); }
  const Protocol& protocol() const { return protocol_; }

  // x_jmnk = xi_j(m,k) - xi_j(n,k); antisymmetric in (m, n) by construction.
  double eigenvalue_gap(std::size_t j, std::size_t m, std::size_t n,
                        std::size_t k) const {
    const RealMatrix& xi = coupling_.at(j);
    return xi(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(k)) -
           xi(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k));
  }

  // Per-act mean gap; the atom position of the effect density.
  double mean_gap(std::size_t m, std::size_t n, std::size_t k) const;

  void validate(std::size_t levels, std::size_t device_levels) const;

 private:
  std::vector<RealMatrix> coupling_;
  Protocol protocol_;
};

enum class StateProvenance { Direct, Product, Composite };

// Device-diagonal slices of the initial composite state:
// element(m, n, k) = <mk| rho_AB(0) |nk>. These are the only matrix elements
// the reduced dynamics ever touch.
class RhoInitial {
 public:
  // diag_clamp: negative diagonal entries no lower than -diag_clamp are
  // clamped to zero; anything lower is rejected.
  RhoInitial(std::vector<Matrix> device_slices, StateProvenance provenance,
             double diag_clamp = kStateTol);

  std::size_t levels() const {
    return static_cast<std::size_t>(slices_.front().rows());
  }
  std::size_t device_levels() const { return slices_.size(); }

  const Matrix& slice(std::size_t k) const { return slices_.at(k); }

  cplx element(std::size_t m, std::size_t n, std::size_t k) const {
    return slices_.at(k)(static_cast<Eigen::Index>(m),
                         static_cast<Eigen::Index>(n));
  }

  // rho_mn = sum_k element(m, n, k); the weight of the (m, n) coherence.
  cplx coherence(std::size_t m, std::size_t n) const;

  // rho_nn; real, nonnegative, constant in time.
  double population(std::size_t n) const { return coherence(n, n).real(); }

  StateProvenance provenance() const { return provenance_; }

 private:
  std::vector<Matrix> slices_;
  StateProvenance provenance_;
};

RhoInitial rho_from_direct(std::vector<Matrix> device_slices);

// rho_{mnk} = system_state(m, n) * device_state(k, k) for disentangled
// initial conditions.
RhoInitial rho_from_product(const Matrix& system_state,
                            const Matrix& device_state);

// Extract the device-diagonal slices of a full composite matrix. Index
// flattening is system-major: row = m * K + k.
RhoInitial rho_from_full_composite(const Matrix& composite,
                                   std::size_t levels,
                                   std::size_t device_levels);

class CompositeModel {
 public:
  CompositeModel(SystemSpec system, DeviceSpec device,
                 InteractionSpec interaction, RhoInitial rho0);

  const SystemSpec& system() const { return system_; }
  const DeviceSpec& device() const { return device_; }
  const InteractionSpec& interaction() const { return interaction_; }
  const RhoInitial& rho0() const { return rho0_; }
  const Protocol& protocol() const { return interaction_.protocol(); }

  std::size_t levels() const { return system_.size(); }          // N
  std::size_t device_levels() const { return device_.size(); }   // K
  std::size_t acts() const { return interaction_.acts(); }       // M

  double transition_frequency(std::size_t m, std::size_t n) const {
    return system_.transition_frequency(m, n);
  }
  double eigenvalue_gap(std::size_t j, std::size_t m, std::size_t n,
                        std::size_t k) const {
    return interaction_.eigenvalue_gap(j, m, n, k);
  }
  double mean_gap(std::size_t m, std::size_t n, std::size_t k) const {
    return interaction_.mean_gap(m, n, k);
  }

  // Same model with replaced device energies (the reduced dynamics must not
  // depend on them).
  CompositeModel with_device_energies(std::vector<double> energies) const;

 private:
  SystemSpec system_;
  DeviceSpec device_;
  InteractionSpec interaction_;
  RhoInitial rho0_;
};

// Spectral mode: all operators given in a shared eigenbasis, so the
// nondestructiveness conditions hold by construction.
CompositeModel build_from_spectral(SystemSpec system, DeviceSpec device,
                                   InteractionSpec interaction,
                                   RhoInitial rho0);

// ---------------------------------------------------------------------------
// Matrix mode: arbitrary commuting Hermitian inputs on the composite space.

struct MatrixModelInput {
  std::size_t levels = 0;          // N
  std::size_t device_levels = 0;   // K
  // system_h may be N x N (lifted internally to H otimes 1) or NK x NK;
  // device_h likewise K x K or NK x NK. Couplings must be NK x NK.
  Matrix system_h;
  Matrix device_h;
  std::vector<Matrix> couplings;
  // Full composite initial state, NK x NK. May be empty (size 0) when only
  // validation / spectra recovery is wanted.
  Matrix composite_state;
};

struct CommutatorCheck {
  struct Entry {
    std::string first;
    std::string second;
    double absolute;  // Frobenius norm of the commutator
    double relative;  // absolute / (|P|_F * |Q|_F)
    bool pass;
  };
  std::vector<Entry> entries;
  bool all_pass = true;
  double tolerance = kCommutatorTol;
  double worst_absolute = 0.0;
  double worst_relative = 0.0;
};

struct SpectralDecomposition {
  std::vector<double> system_energies;           // ascending, with degeneracy
  std::vector<double> device_energies;           // ascending, with degeneracy
  std::vector<RealMatrix> coupling_eigenvalues;  // M sheets, N x K
  Matrix basis;  // joint eigenbasis; column n * K + k carries level (n, k)
};

Matrix lift_system(const Matrix& a, std::size_t device_levels);  // a otimes 1
Matrix lift_device(const Matrix& b, std::size_t levels);         // 1 otimes b

// Pairwise commutator residuals of {HA, HB, X_1..X_M}; never throws.
CommutatorCheck check_commuting_family(const MatrixModelInput& input);

// Throws CommutatorViolation / JointDiagonalizationFailure. Basis columns are
// phase-gauged so the largest-magnitude entry of each is real positive; for
// inputs assembled in a product basis this reproduces that basis exactly.
SpectralDecomposition joint_diagonalize(const MatrixModelInput& input);

CompositeModel build_from_matrices(const MatrixModelInput& input,
                                   Protocol protocol);

}  // namespace qnd
