// Copyright 2026 The gpbec Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GPBEC_OPERATORS_HPP
#define GPBEC_OPERATORS_HPP

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gpbec/fock_basis.hpp"
#include "gpbec/potential.hpp"
#include "gpbec/scattering.hpp"

namespace gpbec {

enum class OperatorTag { H0, H1, H2, Q2, Q3, Q4, Hmu, Nplus, Nzero, Ntotal, Bgen, Gamma1, Gamma2 };

std::string to_string(OperatorTag tag);
OperatorTag parse_operator_tag(std::string_view name);

enum class Symmetry { symmetric, antisymmetric, general };

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Real sparse operator on a Fock basis.
struct SparseHermitianOperator {
  std::string name;
  Symmetry symmetry = Symmetry::symmetric;
  SparseMatrix matrix;

  std::size_t dim() const { return std::size_t(matrix.rows()); }
  bool hermitian() const { return symmetry == Symmetry::symmetric; }

  /// y = A x.
  void apply(std::span<const double> x, std::span<double> y) const;
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const { return matrix * x; }

  /// Largest |A_ij - s A_ji| with s = +1 (symmetric) or -1 (antisymmetric).
  double symmetry_defect() const;
};

struct AssemblyParams {
  PotentialSpec potential;
  int N = 1;
  double mu = 0.0;
  /// Required for Bgen, Gamma1 and Gamma2; must live on the basis momenta.
  const ScatteringSolution* phi = nullptr;
};

/// Assembles one term of the grand-canonical Hamiltonian
///   H_mu = sum_p p^2 a_p^+ a_p - mu N
///        + (kappa/2N) sum_{p,q,r} V^(r/N) a_{p+r}^+ a_q^+ a_{q+r} a_p
/// or of its rotation. Interaction sums keep a momentum tuple only when every
/// creation and annihilation momentum lies in {0} U momenta. Hmu itself is
/// built from the four-index sum above, independently of the split terms.
SparseHermitianOperator assemble(OperatorTag tag, const FockBasis& basis, const AssemblyParams& params);

/// Component `axis` (0, 1, 2) of the total momentum sum_p p a_p^+ a_p.
SparseHermitianOperator total_momentum_operator(const FockBasis& basis, int axis);

/// (1/N) sum_p phi_p (a_p^+ a_-p^+ a_0 a_0 + h.c.), the commutator [N_+, B].
SparseHermitianOperator nplus_generator_commutator(const FockBasis& basis, const ScatteringSolution& phi,
                                                   int N);

/// a_0^+ a_0^+ a_0 a_0 computed from the occupations.
SparseHermitianOperator zero_mode_pair_density(const FockBasis& basis);

/// AB - BA.
SparseHermitianOperator commutator(const SparseHermitianOperator& a, const SparseHermitianOperator& b);

/// gamma(i, j) = <psi, a_j^+ a_i psi> over all modes.
Eigen::MatrixXd one_particle_density_matrix(std::span<const double> state, const FockBasis& basis);

/// Writes `row col value` lines sorted by row, then column.
void write_coo(const SparseHermitianOperator& op, const std::filesystem::path& path);

}  // namespace gpbec

#endif  // GPBEC_OPERATORS_HPP
