#include "qnd/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <utility>

#include "qnd/errors.hpp"

namespace qnd {

namespace {

constexpr std::uint64_t kJointDiagSeed = 0x517cc1b727220a95ULL;

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

void require_finite_list(const std::vector<double>& values, const char* what) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw ValidationError(std::string(what) + "[" + std::to_string(i) +
                            "] is not finite");
    }
  }
}

Matrix hermitize(const Matrix& a) { return 0.5 * (a + a.adjoint()); }

// Hermiticity, unit trace, and positive semidefiniteness of a user-supplied
// density matrix. The eigenvalue check gets the looser slack.
void validate_density_matrix(const Matrix& rho, const std::string& name) {
  if (rho.rows() != rho.cols() || rho.rows() == 0) {
    throw ShapeError(name + " must be a nonempty square matrix");
  }
  if (!rho.allFinite()) {
    throw ValidationError(name + " has non-finite entries");
  }
  double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  if (herm > kStateTol) {
    throw ValidationError(name + " is not Hermitian (max deviation " +
                          std::to_string(herm) + ")");
  }
  cplx tr = rho.trace();
  if (std::abs(tr - cplx(1.0, 0.0)) > kStateTol) {
    throw ValidationError(name + " does not have unit trace (trace = " +
                          std::to_string(tr.real()) + " + " +
                          std::to_string(tr.imag()) + "i)");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitize(rho),
                                               Eigen::EigenvaluesOnly);
  double min_eig = solver.eigenvalues().minCoeff();
  if (min_eig < -kPsdTol) {
    throw ValidationError(name + " has negative eigenvalue " +
                          std::to_string(min_eig));
  }
}

}  // namespace

void SystemSpec::validate() const {
  if (energies.empty()) {
    throw ValidationError("system needs at least one level");
  }
  require_finite_list(energies, "system energy");
  if (!labels.empty() && labels.size() != energies.size()) {
    throw ShapeError("system labels must be empty or one per level");
  }
}

void DeviceSpec::validate() const {
  if (energies.empty()) {
    throw ValidationError("device needs at least one level");
  }
  require_finite_list(energies, "device energy");
}

InteractionSpec::InteractionSpec(std::vector<RealMatrix> coupling,
                                 Protocol protocol)
    : coupling_(std::move(coupling)), protocol_(std::move(protocol)) {
  if (coupling_.size() != protocol_.size()) {
    throw ShapeError("interaction has " + std::to_string(coupling_.size()) +
                     " coupling sheets but " + std::to_string(protocol_.size()) +
                     " pulses");
  }
}

double InteractionSpec::mean_gap(std::size_t m, std::size_t n,
                                 std::size_t k) const {
  if (coupling_.empty()) return 0.0;
  double acc = 0.0;
  for (std::size_t j = 0; j < coupling_.size(); ++j) {
    acc += eigenvalue_gap(j, m, n, k);
  }
  return acc / static_cast<double>(coupling_.size());
}

void InteractionSpec::validate(std::size_t levels,
                               std::size_t device_levels) const {
  for (std::size_t j = 0; j < coupling_.size(); ++j) {
    const RealMatrix& xi = coupling_[j];
    if (xi.rows() != idx(levels) || xi.cols() != idx(device_levels)) {
      throw ShapeError("coupling sheet " + std::to_string(j) + " is " +
                       std::to_string(xi.rows()) + "x" +
                       std::to_string(xi.cols()) + ", expected " +
                       std::to_string(levels) + "x" +
                       std::to_string(device_levels));
    }
    if (!xi.allFinite()) {
      throw ValidationError("coupling sheet " + std::to_string(j) +
                            " has non-finite entries");
    }
  }
}

RhoInitial::RhoInitial(std::vector<Matrix> device_slices,
                       StateProvenance provenance, double diag_clamp)
    : slices_(std::move(device_slices)), provenance_(provenance) {
  if (slices_.empty()) {
    throw ShapeError("initial state needs at least one device slice");
  }
  const Eigen::Index n = slices_.front().rows();
  if (n == 0) {
    throw ShapeError("initial state slices must be nonempty");
  }
  for (std::size_t k = 0; k < slices_.size(); ++k) {
    Matrix& s = slices_[k];
    if (s.rows() != n || s.cols() != n) {
      throw ShapeError("initial state slice " + std::to_string(k) +
                       " has inconsistent shape");
    }
    if (!s.allFinite()) {
      throw ValidationError("initial state slice " + std::to_string(k) +
                            " has non-finite entries");
    }
    for (Eigen::Index m = 0; m < n; ++m) {
      for (Eigen::Index p = 0; p < n; ++p) {
        if (std::abs(s(m, p) - std::conj(s(p, m))) > kStateTol) {
          throw ValidationError(
              "initial state violates Hermiticity at (m=" + std::to_string(m) +
              ", n=" + std::to_string(p) + ", k=" + std::to_string(k) + ")");
        }
      }
    }
  }
  double total = 0.0;
  for (const Matrix& s : slices_) total += s.real().trace();
  if (std::abs(total - 1.0) > kStateTol) {
    throw ValidationError("normalization violated: sum of populations is " +
                          std::to_string(total) + ", expected 1");
  }
  for (std::size_t k = 0; k < slices_.size(); ++k) {
    Matrix& s = slices_[k];
    for (Eigen::Index m = 0; m < n; ++m) {
      double d = s(m, m).real();
      if (d < -diag_clamp) {
        throw ValidationError("population at (n=" + std::to_string(m) +
                              ", k=" + std::to_string(k) + ") is negative: " +
                              std::to_string(d));
      }
      s(m, m) = cplx(std::max(d, 0.0), 0.0);
    }
  }
}

cplx RhoInitial::coherence(std::size_t m, std::size_t n) const {
  cplx acc = 0.0;
  for (std::size_t k = 0; k < slices_.size(); ++k) {
    acc += element(m, n, k);
  }
  return acc;
}

RhoInitial rho_from_direct(std::vector<Matrix> device_slices) {
  return RhoInitial(std::move(device_slices), StateProvenance::Direct);
}

RhoInitial rho_from_product(const Matrix& system_state,
                            const Matrix& device_state) {
  validate_density_matrix(system_state, "system state");
  validate_density_matrix(device_state, "device state");
  const Eigen::Index k_count = device_state.rows();
  std::vector<Matrix> slices;
  slices.reserve(static_cast<std::size_t>(k_count));
  for (Eigen::Index k = 0; k < k_count; ++k) {
    slices.push_back(system_state * device_state(k, k).real());
  }
  return RhoInitial(std::move(slices), StateProvenance::Product, kPsdTol);
}

RhoInitial rho_from_full_composite(const Matrix& composite, std::size_t levels,
                                   std::size_t device_levels) {
  if (levels == 0 || device_levels == 0) {
    throw ShapeError("factor dimensions must be positive");
  }
  const Eigen::Index total = idx(levels * device_levels);
  if (composite.rows() != total || composite.cols() != total) {
    throw ShapeError("composite state is " + std::to_string(composite.rows()) +
                     "x" + std::to_string(composite.cols()) +
                     ", not factorable as declared " + std::to_string(levels) +
                     " x " + std::to_string(device_levels));
  }
  validate_density_matrix(composite, "composite state");
  std::vector<Matrix> slices(device_levels);
  for (std::size_t k = 0; k < device_levels; ++k) {
    Matrix s(idx(levels), idx(levels));
    for (std::size_t m = 0; m < levels; ++m) {
      for (std::size_t n = 0; n < levels; ++n) {
        s(idx(m), idx(n)) =
            composite(idx(m * device_levels + k), idx(n * device_levels + k));
      }
    }
    slices[k] = std::move(s);
  }
  return RhoInitial(std::move(slices), StateProvenance::Composite, kPsdTol);
}

CompositeModel::CompositeModel(SystemSpec system, DeviceSpec device,
                               InteractionSpec interaction, RhoInitial rho0)
    : system_(std::move(system)),
      device_(std::move(device)),
      interaction_(std::move(interaction)),
      rho0_(std::move(rho0)) {
  system_.validate();
  device_.validate();
  interaction_.validate(system_.size(), device_.size());
  if (rho0_.levels() != system_.size() ||
      rho0_.device_levels() != device_.size()) {
    throw ShapeError("initial state shape (" + std::to_string(rho0_.levels()) +
                     ", " + std::to_string(rho0_.device_levels()) +
                     ") does not match model (" +
                     std::to_string(system_.size()) + ", " +
                     std::to_string(device_.size()) + ")");
  }
}

CompositeModel CompositeModel::with_device_energies(
    std::vector<double> energies) const {
  return CompositeModel(system_, DeviceSpec{std::move(energies)}, interaction_,
                        rho0_);
}

CompositeModel build_from_spectral(SystemSpec system, DeviceSpec device,
                                   InteractionSpec interaction,
                                   RhoInitial rho0) {
  return CompositeModel(std::move(system), std::move(device),
                        std::move(interaction), std::move(rho0));
}

// ---------------------------------------------------------------------------
// Matrix mode

Matrix lift_system(const Matrix& a, std::size_t device_levels) {
  const Eigen::Index n = a.rows();
  const Eigen::Index k = idx(device_levels);
  Matrix out = Matrix::Zero(n * k, n * k);
  for (Eigen::Index m = 0; m < n; ++m) {
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = 0; q < k; ++q) {
        out(m * k + q, p * k + q) = a(m, p);
      }
    }
  }
  return out;
}

Matrix lift_device(const Matrix& b, std::size_t levels) {
  const Eigen::Index k = b.rows();
  const Eigen::Index n = idx(levels);
  Matrix out = Matrix::Zero(n * k, n * k);
  for (Eigen::Index m = 0; m < n; ++m) {
    for (Eigen::Index q = 0; q < k; ++q) {
      for (Eigen::Index r = 0; r < k; ++r) {
        out(m * k + q, m * k + r) = b(q, r);
      }
    }
  }
  return out;
}

namespace {

struct LiftedFamily {
  std::vector<std::string> names;
  std::vector<Matrix> ops;  // all NK x NK, Hermitian
};

LiftedFamily assemble_family(const MatrixModelInput& input) {
  if (input.levels == 0 || input.device_levels == 0) {
    throw ShapeError("factor dimensions must be positive");
  }
  const Eigen::Index total = idx(input.levels * input.device_levels);

  LiftedFamily family;
  auto add = [&](const std::string& name, const Matrix& raw, bool is_system,
                 bool is_device) {
    Matrix lifted;
    if (raw.rows() == total && raw.cols() == total) {
      lifted = raw;
    } else if (is_system && raw.rows() == idx(input.levels) &&
               raw.cols() == idx(input.levels)) {
      lifted = lift_system(raw, input.device_levels);
    } else if (is_device && raw.rows() == idx(input.device_levels) &&
               raw.cols() == idx(input.device_levels)) {
      lifted = lift_device(raw, input.levels);
    } else {
      throw ShapeError(name + " has shape " + std::to_string(raw.rows()) + "x" +
                       std::to_string(raw.cols()) +
                       "; expected factor or composite shape");
    }
    if (!lifted.allFinite()) {
      throw ValidationError(name + " has non-finite entries");
    }
    double herm = (lifted - lifted.adjoint()).norm();
    if (herm > kPsdTol * std::max(1.0, lifted.norm())) {
      throw ValidationError(name + " is not Hermitian");
    }
    family.names.push_back(name);
    family.ops.push_back(hermitize(lifted));
  };

  add("HA", input.system_h, true, false);
  add("HB", input.device_h, false, true);
  for (std::size_t j = 0; j < input.couplings.size(); ++j) {
    add("X" + std::to_string(j + 1), input.couplings[j], false, false);
  }
  return family;
}

CommutatorCheck run_commutator_check(const LiftedFamily& family) {
  CommutatorCheck report;
  for (std::size_t i = 0; i < family.ops.size(); ++i) {
    for (std::size_t j = i + 1; j < family.ops.size(); ++j) {
      const Matrix& p = family.ops[i];
      const Matrix& q = family.ops[j];
      double absolute = (p * q - q * p).norm();
      double scale = p.norm() * q.norm();
      double relative = scale > 0.0 ? absolute / scale : 0.0;
      bool pass = relative <= kCommutatorTol;
      report.entries.push_back(
          {family.names[i], family.names[j], absolute, relative, pass});
      report.all_pass = report.all_pass && pass;
      if (relative > report.worst_relative) {
        report.worst_relative = relative;
        report.worst_absolute = absolute;
      }
    }
  }
  return report;
}

// Worst relative off-diagonal mass of the family in the given basis.
double diagonality_residual(const LiftedFamily& family, const Matrix& basis) {
  double worst = 0.0;
  for (const Matrix& p : family.ops) {
    Matrix transformed = basis.adjoint() * p * basis;
    Matrix off = transformed;
    off.diagonal().setZero();
    worst = std::max(worst, off.norm() / std::max(1.0, p.norm()));
  }
  return worst;
}

// Sequential refinement: diagonalize each operator inside the subspaces left
// degenerate by the previous ones. Guaranteed to terminate.
Matrix blockwise_diagonalize(const LiftedFamily& family, Eigen::Index total) {
  Matrix basis = Matrix::Identity(total, total);
  std::vector<std::pair<Eigen::Index, Eigen::Index>> blocks{{0, total}};
  for (const Matrix& p : family.ops) {
    double gap_tol = 1e-8 * std::max(1.0, p.norm());
    std::vector<std::pair<Eigen::Index, Eigen::Index>> next_blocks;
    for (auto [start, len] : blocks) {
      if (len == 1) {
        next_blocks.emplace_back(start, len);
        continue;
      }
      Matrix sub = basis.middleCols(start, len).adjoint() * p *
                   basis.middleCols(start, len);
      Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitize(sub));
      if (solver.info() != Eigen::Success) {
        throw JointDiagonalizationFailure(
            std::numeric_limits<double>::quiet_NaN());
      }
      basis.middleCols(start, len) =
          basis.middleCols(start, len) * solver.eigenvectors();
      const RealVector& vals = solver.eigenvalues();
      Eigen::Index sub_start = 0;
      for (Eigen::Index i = 1; i <= len; ++i) {
        if (i == len || vals(i) - vals(i - 1) > gap_tol) {
          next_blocks.emplace_back(start + sub_start, i - sub_start);
          sub_start = i;
        }
      }
    }
    blocks = std::move(next_blocks);
  }
  return basis;
}

void canonical_gauge(Matrix& basis) {
  for (Eigen::Index c = 0; c < basis.cols(); ++c) {
    Eigen::Index best = 0;
    double best_mag = 0.0;
    for (Eigen::Index r = 0; r < basis.rows(); ++r) {
      double mag = std::abs(basis(r, c));
      if (mag > best_mag) {
        best_mag = mag;
        best = r;
      }
    }
    if (best_mag > 0.0) {
      basis.col(c) *= std::conj(basis(best, c)) / best_mag;
    }
  }
}

// Group sorted values into clusters separated by more than tol; returns the
// cluster id per original index and the cluster means.
struct Clustering {
  std::vector<std::size_t> cluster_of;
  std::vector<double> means;
  std::vector<std::size_t> counts;
};

Clustering cluster_values(const std::vector<double>& values, double tol) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  Clustering out;
  out.cluster_of.assign(values.size(), 0);
  double last = 0.0;
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    double v = values[order[pos]];
    if (pos == 0 || v - last > tol) {
      out.means.push_back(0.0);
      out.counts.push_back(0);
    }
    std::size_t c = out.means.size() - 1;
    out.cluster_of[order[pos]] = c;
    out.means[c] += v;
    out.counts[c] += 1;
    last = v;
  }
  for (std::size_t c = 0; c < out.means.size(); ++c) {
    out.means[c] /= static_cast<double>(out.counts[c]);
  }
  return out;
}

}  // namespace

CommutatorCheck check_commuting_family(const MatrixModelInput& input) {
  return run_commutator_check(assemble_family(input));
}

SpectralDecomposition joint_diagonalize(const MatrixModelInput& input) {
  LiftedFamily family = assemble_family(input);
  const Eigen::Index total = idx(input.levels * input.device_levels);

  CommutatorCheck commutators = run_commutator_check(family);
  if (!commutators.all_pass) {
    for (const auto& e : commutators.entries) {
      if (!e.pass) {
        throw CommutatorViolation(e.first, e.second, e.absolute, e.relative,
                                  kCommutatorTol);
      }
    }
  }

  // Random combination lifts accidental degeneracies with probability one;
  // jointly degenerate subspaces are scalar for every operator, so any basis
  // of them is fine.
  std::mt19937_64 rng(kJointDiagSeed);
  auto draw = [&rng]() {
    double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    double mag = 0.5 + u;
    return (rng() & 1u) ? mag : -mag;
  };

  Matrix basis;
  bool found = false;
  double last_residual = 0.0;
  for (int attempt = 0; attempt < 5 && !found; ++attempt) {
    Matrix combo = Matrix::Zero(total, total);
    for (const Matrix& p : family.ops) {
      combo += (draw() / std::max(1.0, p.norm())) * p;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitize(combo));
    if (solver.info() != Eigen::Success) continue;
    Matrix candidate = solver.eigenvectors();
    last_residual = diagonality_residual(family, candidate);
    if (last_residual <= kDiagonalityTol) {
      basis = std::move(candidate);
      found = true;
    }
  }
  if (!found) {
    basis = blockwise_diagonalize(family, total);
    last_residual = diagonality_residual(family, basis);
    if (last_residual > kDiagonalityTol) {
      throw JointDiagonalizationFailure(last_residual);
    }
  }
  canonical_gauge(basis);

  // Values of the lifted Hamiltonians on each joint vector.
  const Matrix& ha = family.ops[0];
  const Matrix& hb = family.ops[1];
  std::vector<double> sys_vals(static_cast<std::size_t>(total));
  std::vector<double> dev_vals(static_cast<std::size_t>(total));
  for (Eigen::Index c = 0; c < total; ++c) {
    sys_vals[static_cast<std::size_t>(c)] =
        (basis.col(c).adjoint() * ha * basis.col(c))(0).real();
    dev_vals[static_cast<std::size_t>(c)] =
        (basis.col(c).adjoint() * hb * basis.col(c))(0).real();
  }

  auto scale_of = [](const std::vector<double>& v) {
    double s = 1.0;
    for (double x : v) s = std::max(s, std::abs(x));
    return s;
  };
  Clustering e_clusters = cluster_values(sys_vals, 1e-8 * scale_of(sys_vals));
  Clustering b_clusters = cluster_values(dev_vals, 1e-8 * scale_of(dev_vals));

  const std::size_t k_count = input.device_levels;
  const std::size_t n_count = input.levels;
  std::vector<std::size_t> e_mult(e_clusters.means.size());
  std::vector<std::size_t> b_mult(b_clusters.means.size());
  for (std::size_t c = 0; c < e_clusters.means.size(); ++c) {
    if (e_clusters.counts[c] % k_count != 0) {
      throw ValidationError(
          "recovered system spectrum is incompatible with declared factor "
          "dimensions (eigenvalue multiplicity " +
          std::to_string(e_clusters.counts[c]) + " not divisible by K = " +
          std::to_string(k_count) + ")");
    }
    e_mult[c] = e_clusters.counts[c] / k_count;
  }
  for (std::size_t c = 0; c < b_clusters.means.size(); ++c) {
    if (b_clusters.counts[c] % n_count != 0) {
      throw ValidationError(
          "recovered device spectrum is incompatible with declared factor "
          "dimensions (eigenvalue multiplicity " +
          std::to_string(b_clusters.counts[c]) + " not divisible by N = " +
          std::to_string(n_count) + ")");
    }
    b_mult[c] = b_clusters.counts[c] / n_count;
  }

  std::vector<std::size_t> n_offset(e_mult.size(), 0);
  for (std::size_t c = 1; c < e_mult.size(); ++c) {
    n_offset[c] = n_offset[c - 1] + e_mult[c - 1];
  }
  std::vector<std::size_t> k_offset(b_mult.size(), 0);
  for (std::size_t c = 1; c < b_mult.size(); ++c) {
    k_offset[c] = k_offset[c - 1] + b_mult[c - 1];
  }

  // Ordering key inside a degenerate cell: coupling eigenvalues, then column.
  const std::size_t m_count = input.couplings.size();
  std::vector<std::vector<double>> xi_vals(m_count);
  for (std::size_t j = 0; j < m_count; ++j) {
    const Matrix& x = family.ops[2 + j];
    xi_vals[j].resize(static_cast<std::size_t>(total));
    for (Eigen::Index c = 0; c < total; ++c) {
      xi_vals[j][static_cast<std::size_t>(c)] =
          (basis.col(c).adjoint() * x * basis.col(c))(0).real();
    }
  }

  std::vector<std::vector<std::size_t>> cells(e_mult.size() * b_mult.size());
  for (std::size_t c = 0; c < static_cast<std::size_t>(total); ++c) {
    std::size_t cell =
        e_clusters.cluster_of[c] * b_mult.size() + b_clusters.cluster_of[c];
    cells[cell].push_back(c);
  }

  std::vector<Eigen::Index> column_of(static_cast<std::size_t>(total));
  for (std::size_t ce = 0; ce < e_mult.size(); ++ce) {
    for (std::size_t cb = 0; cb < b_mult.size(); ++cb) {
      auto& members = cells[ce * b_mult.size() + cb];
      if (members.size() != e_mult[ce] * b_mult[cb]) {
        throw ValidationError(
            "joint spectrum does not factor as a product grid for the "
            "declared dimensions");
      }
      std::sort(members.begin(), members.end(),
                [&](std::size_t a, std::size_t b) {
                  for (std::size_t j = 0; j < m_count; ++j) {
                    if (xi_vals[j][a] != xi_vals[j][b]) {
                      return xi_vals[j][a] < xi_vals[j][b];
                    }
                  }
                  return a < b;
                });
      for (std::size_t p = 0; p < members.size(); ++p) {
        std::size_t n = n_offset[ce] + p / b_mult[cb];
        std::size_t k = k_offset[cb] + p % b_mult[cb];
        column_of[n * k_count + k] = idx(members[p]);
      }
    }
  }

  SpectralDecomposition out;
  out.basis = Matrix(total, total);
  for (std::size_t slot = 0; slot < static_cast<std::size_t>(total); ++slot) {
    out.basis.col(idx(slot)) = basis.col(column_of[slot]);
  }
  out.system_energies.reserve(n_count);
  for (std::size_t ce = 0; ce < e_mult.size(); ++ce) {
    for (std::size_t r = 0; r < e_mult[ce]; ++r) {
      out.system_energies.push_back(e_clusters.means[ce]);
    }
  }
  out.device_energies.reserve(k_count);
  for (std::size_t cb = 0; cb < b_mult.size(); ++cb) {
    for (std::size_t r = 0; r < b_mult[cb]; ++r) {
      out.device_energies.push_back(b_clusters.means[cb]);
    }
  }
  out.coupling_eigenvalues.resize(m_count);
  for (std::size_t j = 0; j < m_count; ++j) {
    RealMatrix sheet(idx(n_count), idx(k_count));
    for (std::size_t n = 0; n < n_count; ++n) {
      for (std::size_t k = 0; k < k_count; ++k) {
        sheet(idx(n), idx(k)) =
            xi_vals[j][static_cast<std::size_t>(column_of[n * k_count + k])];
      }
    }
    out.coupling_eigenvalues[j] = std::move(sheet);
  }
  return out;
}

CompositeModel build_from_matrices(const MatrixModelInput& input,
                                   Protocol protocol) {
  if (input.couplings.size() != protocol.size()) {
    throw ShapeError("matrix mode has " + std::to_string(input.couplings.size()) +
                     " coupling operators but " + std::to_string(protocol.size()) +
                     " pulses");
  }
  SpectralDecomposition spectral = joint_diagonalize(input);
  const Eigen::Index total = idx(input.levels * input.device_levels);
  if (input.composite_state.rows() != total ||
      input.composite_state.cols() != total) {
    throw ShapeError("matrix mode needs a full composite initial state of "
                     "shape " + std::to_string(total) + "x" +
                     std::to_string(total));
  }
  validate_density_matrix(input.composite_state, "composite state");
  Matrix transformed =
      spectral.basis.adjoint() * input.composite_state * spectral.basis;
  // The transform preserves Hermiticity/trace/PSD up to rounding; extraction
  // revalidates against the state tolerances.
  RhoInitial rho = rho_from_full_composite(hermitize(transformed), input.levels,
                                           input.device_levels);
  return CompositeModel(SystemSpec{spectral.system_energies, {}},
                        DeviceSpec{spectral.device_energies},
                        InteractionSpec(spectral.coupling_eigenvalues,
                                        std::move(protocol)),
                        std::move(rho));
}

}  // namespace qnd
