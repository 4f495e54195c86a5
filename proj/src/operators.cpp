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

#include "gpbec/operators.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <unordered_map>

#include "gpbec/errors.hpp"
#include "kernel_table.hpp"

namespace gpbec {

namespace {

// Normal-ordered monomial c1^+ .. ck^+ a1 .. al with k, l <= 3, grouped by the
// sorted annihilation modes so that each basis state only visits the terms
// that can act on it.
class MonomialTable {
 public:
  struct Term {
    std::array<int, 3> cre{};
    int ncre = 0;
    double coef = 0.0;
  };

  void add(std::initializer_list<int> cre, std::initializer_list<int> ann, double coef) {
    if (coef == 0.0) return;
    std::array<int, 3> a{};
    std::copy(ann.begin(), ann.end(), a.begin());
    std::sort(a.begin(), a.begin() + ann.size());
    Term t;
    std::copy(cre.begin(), cre.end(), t.cre.begin());
    t.ncre = int(cre.size());
    t.coef = coef;
    terms_[key(a.data(), int(ann.size()))].push_back(t);
    max_ann_ = std::max(max_ann_, int(ann.size()));
  }

  const std::vector<Term>* find(const int* ann, int n) const {
    auto it = terms_.find(key(ann, n));
    return it == terms_.end() ? nullptr : &it->second;
  }
  int max_ann() const { return max_ann_; }

 private:
  static std::uint64_t key(const int* a, int n) {
    std::uint64_t k = std::uint64_t(n);
    for (int i = 0; i < n; ++i) k |= std::uint64_t(a[i]) << (2 + 20 * i);
    return k;
  }
  std::unordered_map<std::uint64_t, std::vector<Term>> terms_;
  int max_ann_ = 0;
};

SparseMatrix from_triplets(std::size_t dim, std::vector<Eigen::Triplet<double>>& trip) {
  SparseMatrix m{Eigen::Index(dim), Eigen::Index(dim)};
  m.setFromTriplets(trip.begin(), trip.end());
  m.prune(0.0);
  m.makeCompressed();
  return m;
}

SparseHermitianOperator apply_table(const MonomialTable& table, const FockBasis& basis, std::string name,
                                    Symmetry symmetry) {
  if (basis.num_modes() >= (std::size_t(1) << 20))
    throw std::invalid_argument("too many modes for operator assembly");
  const std::size_t M = basis.num_modes();
  std::vector<Eigen::Triplet<double>> trip;
  std::vector<std::uint8_t> work(M);
  std::vector<int> occ_modes;
  std::vector<int> occ_count;
  std::array<int, 3> ann{};

  for (std::size_t i = 0; i < basis.dim(); ++i) {
    const auto s = basis.state(i);
    occ_modes.clear();
    occ_count.clear();
    for (std::size_t m = 0; m < M; ++m)
      if (s[m]) {
        occ_modes.push_back(int(m));
        occ_count.push_back(s[m]);
      }

    auto act = [&](int n) {
      const auto* terms = table.find(ann.data(), n);
      if (!terms) return;
      for (const auto& t : *terms) {
        std::copy(s.begin(), s.end(), work.begin());
        double amp = 1.0;
        for (int k = 0; k < n; ++k) amp *= std::sqrt(double(work[std::size_t(ann[std::size_t(k)])]--));
        for (int k = 0; k < t.ncre; ++k) {
          auto& w = work[std::size_t(t.cre[std::size_t(k)])];
          if (w == 255) throw std::overflow_error("mode occupation above 255");
          amp *= std::sqrt(double(++w));
        }
        auto j = basis.index_of(work);
        if (!j) throw std::logic_error(name + " maps a basis state outside the basis");
        trip.emplace_back(Eigen::Index(*j), Eigen::Index(i), t.coef * amp);
      }
    };

    // Sorted sub-multisets of the occupied modes of size 1..max_ann.
    const int K = int(occ_modes.size());
    for (int a = 0; a < K; ++a) {
      ann[0] = occ_modes[std::size_t(a)];
      act(1);
      if (table.max_ann() < 2) continue;
      for (int b = a; b < K; ++b) {
        if (b == a && occ_count[std::size_t(a)] < 2) continue;
        ann[1] = occ_modes[std::size_t(b)];
        act(2);
        if (table.max_ann() < 3) continue;
        for (int c = b; c < K; ++c) {
          const int need = 1 + (c == b) + (c == a);
          if (occ_count[std::size_t(c)] < need) continue;
          ann[2] = occ_modes[std::size_t(c)];
          act(3);
        }
      }
    }
  }
  return {std::move(name), symmetry, from_triplets(basis.dim(), trip)};
}

template <typename F>
SparseHermitianOperator diagonal(const FockBasis& basis, std::string name, F&& value) {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(basis.dim());
  for (std::size_t i = 0; i < basis.dim(); ++i)
    trip.emplace_back(Eigen::Index(i), Eigen::Index(i), value(i));
  return {std::move(name), Symmetry::symmetric, from_triplets(basis.dim(), trip)};
}

const ScatteringSolution& require_phi(const FockBasis& basis, const ScatteringSolution* phi) {
  if (!phi) throw MissingPhi("this operator needs a scattering solution");
  if (!phi->momenta || (phi->momenta != basis.momenta() && !(*phi->momenta == *basis.momenta())))
    throw std::invalid_argument("scattering solution lives on a different momentum set");
  return *phi;
}

struct Context {
  const FockBasis& basis;
  const MomentumSet& set;
  detail::KernelTable vhat;
  double kappa;
  int N;

  Context(const FockBasis& b, const AssemblyParams& p)
      : basis(b),
        set(*b.momenta()),
        vhat(p.potential, p.N, 12L * (set.extent() + 1) * (set.extent() + 1)),
        kappa(p.potential.kappa),
        N(p.N) {}

  int mode(const LatticeVector& p) const { return int(basis.mode_of(p)); }
  const LatticeVector& point(std::size_t i) const { return set[i]; }
};

double kinetic(const FockBasis& basis, std::size_t i) {
  double e = 0.0;
  for (std::size_t m = 1; m < basis.num_modes(); ++m)
    if (int nu = basis.occupation(i, m)) e += nu * basis.mode_momentum(m).momentum_norm2();
  return e;
}

}  // namespace

std::string to_string(OperatorTag tag) {
  switch (tag) {
    case OperatorTag::H0: return "H0";
    case OperatorTag::H1: return "H1";
    case OperatorTag::H2: return "H2";
    case OperatorTag::Q2: return "Q2";
    case OperatorTag::Q3: return "Q3";
    case OperatorTag::Q4: return "Q4";
    case OperatorTag::Hmu: return "Hmu";
    case OperatorTag::Nplus: return "Nplus";
    case OperatorTag::Nzero: return "Nzero";
    case OperatorTag::Ntotal: return "Ntotal";
    case OperatorTag::Bgen: return "Bgen";
    case OperatorTag::Gamma1: return "Gamma1";
    case OperatorTag::Gamma2: return "Gamma2";
  }
  return "unknown";
}

OperatorTag parse_operator_tag(std::string_view name) {
  for (int t = 0; t <= int(OperatorTag::Gamma2); ++t)
    if (to_string(OperatorTag(t)) == name) return OperatorTag(t);
  throw std::invalid_argument("unknown operator tag '" + std::string(name) + "'");
}

void SparseHermitianOperator::apply(std::span<const double> x, std::span<double> y) const {
  if (x.size() != dim() || y.size() != dim()) throw std::invalid_argument("vector size does not match operator");
  Eigen::Map<const Eigen::VectorXd> xm(x.data(), Eigen::Index(x.size()));
  Eigen::Map<Eigen::VectorXd> ym(y.data(), Eigen::Index(y.size()));
  ym.noalias() = matrix * xm;
}

double SparseHermitianOperator::symmetry_defect() const {
  const double s = symmetry == Symmetry::antisymmetric ? -1.0 : 1.0;
  const SparseMatrix t = matrix.transpose();
  const SparseMatrix d = matrix - s * t;
  double m = 0.0;
  for (Eigen::Index k = 0; k < d.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(d, k); it; ++it) m = std::max(m, std::abs(it.value()));
  return m;
}

SparseHermitianOperator assemble(OperatorTag tag, const FockBasis& basis, const AssemblyParams& params) {
  params.potential.validate();
  if (params.N < 1) throw std::invalid_argument("N must be a positive integer");
  const std::string name = to_string(tag);
  const double kappa = params.potential.kappa;
  const double vhat0 = fourier_coefficient(params.potential, 0.0);
  const double N = params.N;

  switch (tag) {
    case OperatorTag::Ntotal:
      return diagonal(basis, name, [&](std::size_t i) { return double(basis.particle_number(i)); });
    case OperatorTag::Nzero:
      return diagonal(basis, name, [&](std::size_t i) { return double(basis.occupation(i, 0)); });
    case OperatorTag::Nplus:
      return diagonal(basis, name, [&](std::size_t i) { return double(basis.excited_number(i)); });
    case OperatorTag::H1:
      return diagonal(basis, name, [&](std::size_t i) { return kinetic(basis, i); });
    case OperatorTag::H0:
      return diagonal(basis, name, [&](std::size_t i) {
        const double n = basis.particle_number(i);
        return kappa * vhat0 / (2.0 * N) * n * (n - 1.0) - params.mu * n;
      });
    default:
      break;
  }

  const Context ctx(basis, params);
  const std::size_t S = ctx.set.size();
  const double c2 = kappa / (2.0 * N);

  if (tag == OperatorTag::H2) {
    return diagonal(basis, name, [&](std::size_t i) {
      const double nu0 = basis.occupation(i, 0);
      double e = 0.0;
      for (std::size_t m = 1; m < basis.num_modes(); ++m)
        if (int nu = basis.occupation(i, m)) e += ctx.vhat(basis.mode_momentum(m)) * nu;
      const double np = basis.excited_number(i);
      return kappa / N * e * nu0 - c2 * vhat0 * np * (np - 1.0);
    });
  }

  MonomialTable table;
  Symmetry symmetry = Symmetry::symmetric;
  switch (tag) {
    case OperatorTag::Q2:
      for (std::size_t i = 0; i < S; ++i) {
        const int p = int(i) + 1, mp = int(ctx.set.negated(i)) + 1;
        const double c = c2 * ctx.vhat(ctx.point(i));
        table.add({p, mp}, {0, 0}, c);
        table.add({0, 0}, {p, mp}, c);
      }
      break;
    case OperatorTag::Q3:
      // a_{p+r}^+ a_{-r}^+ a_p a_0 + h.c. with p, r, p + r nonzero and kept.
      for (std::size_t i = 0; i < S; ++i)
        for (std::size_t k = 0; k < S; ++k) {
          const LatticeVector& p = ctx.point(i);
          const LatticeVector& r = ctx.point(k);
          const int pr = ctx.mode(p + r);
          if (pr <= 0) continue;
          const int p_mode = int(i) + 1, mr = int(ctx.set.negated(k)) + 1;
          const double c = kappa / N * ctx.vhat(r);
          table.add({pr, mr}, {p_mode, 0}, c);
          table.add({p_mode, 0}, {pr, mr}, c);
        }
      break;
    case OperatorTag::Q4:
      // a_{p+r}^+ a_q^+ a_{q+r} a_p with p, q, p + r, q + r all nonzero and kept.
      for (std::size_t i = 0; i < S; ++i)
        for (std::size_t j = 0; j < S; ++j)
          for (std::size_t l = 0; l < S; ++l) {
            const LatticeVector r = ctx.point(l) - ctx.point(i);
            const int qr = ctx.mode(ctx.point(j) + r);
            if (qr <= 0) continue;
            table.add({int(l) + 1, int(j) + 1}, {qr, int(i) + 1}, c2 * ctx.vhat(r));
          }
      break;
    case OperatorTag::Hmu: {
      // Full four-index sum over {0} U momenta.
      const std::size_t M = basis.num_modes();
      for (std::size_t p = 0; p < M; ++p)
        for (std::size_t q = 0; q < M; ++q)
          for (std::size_t pr = 0; pr < M; ++pr) {
            const LatticeVector r = basis.mode_momentum(pr) - basis.mode_momentum(p);
            const int qr = ctx.mode(basis.mode_momentum(q) + r);
            if (qr < 0) continue;
            table.add({int(pr), int(q)}, {qr, int(p)}, c2 * ctx.vhat(r));
          }
      break;
    }
    case OperatorTag::Bgen: {
      const auto& phi = require_phi(basis, params.phi);
      symmetry = Symmetry::antisymmetric;
      for (std::size_t i = 0; i < S; ++i) {
        const int p = int(i) + 1, mp = int(ctx.set.negated(i)) + 1;
        const double c = phi.phi[i] / (2.0 * N);
        table.add({p, mp}, {0, 0}, c);
        table.add({0, 0}, {p, mp}, -c);
      }
      break;
    }
    case OperatorTag::Gamma1:
    case OperatorTag::Gamma2: {
      const auto& phi = require_phi(basis, params.phi);
      const double c3 = kappa / (2.0 * N * N);
      // p, q, p + r, q + r nonzero and kept.
      for (std::size_t i = 0; i < S; ++i)
        for (std::size_t j = 0; j < S; ++j)
          for (std::size_t l = 0; l < S; ++l) {
            const LatticeVector& p = ctx.point(i);
            const LatticeVector& q = ctx.point(j);
            const LatticeVector r = ctx.point(l) - p;
            const int qr = ctx.mode(q + r);
            if (qr <= 0) continue;
            const int p_mode = int(i) + 1, q_mode = int(j) + 1, pr = int(l) + 1;
            if (tag == OperatorTag::Gamma1) {
              // a_{p+r}^+ a_q^+ a_{-p}^+ a_{q+r} a_0 a_0 + h.c.
              const int mp = int(ctx.set.negated(i)) + 1;
              const double c = c3 * ctx.vhat(r) * phi.phi[i];
              table.add({pr, q_mode, mp}, {qr, 0, 0}, c);
              table.add({qr, 0, 0}, {pr, q_mode, mp}, c);
            } else {
              // a_{p+r}^+ a_q^+ a_{-q-r}^+ a_p a_0 a_0 + h.c.
              const int mqr = int(ctx.set.negated(std::size_t(qr - 1))) + 1;
              const double c = c3 * ctx.vhat(r) * phi.phi[std::size_t(qr - 1)];
              table.add({pr, q_mode, mqr}, {p_mode, 0, 0}, c);
              table.add({p_mode, 0, 0}, {pr, q_mode, mqr}, c);
            }
          }
      break;
    }
    default:
      throw std::logic_error("unhandled operator tag");
  }

  auto op = apply_table(table, basis, name, symmetry);
  if (tag == OperatorTag::Hmu) {
    auto one_body = diagonal(basis, name, [&](std::size_t i) {
      return kinetic(basis, i) - params.mu * basis.particle_number(i);
    });
    op.matrix += one_body.matrix;
  }
  return op;
}

SparseHermitianOperator total_momentum_operator(const FockBasis& basis, int axis) {
  if (axis < 0 || axis > 2) throw std::invalid_argument("axis must be 0, 1 or 2");
  return diagonal(basis, std::string("P") + "xyz"[axis], [&](std::size_t i) {
    LatticeVector s{};
    for (std::size_t m = 1; m < basis.num_modes(); ++m)
      if (int nu = basis.occupation(i, m)) s = s + basis.mode_momentum(m) * nu;
    return s.momentum()[std::size_t(axis)];
  });
}

SparseHermitianOperator nplus_generator_commutator(const FockBasis& basis, const ScatteringSolution& phi, int N) {
  const auto& sol = require_phi(basis, &phi);
  const auto& set = *basis.momenta();
  MonomialTable table;
  for (std::size_t i = 0; i < set.size(); ++i) {
    const int p = int(i) + 1, mp = int(set.negated(i)) + 1;
    const double c = sol.phi[i] / N;
    table.add({p, mp}, {0, 0}, c);
    table.add({0, 0}, {p, mp}, c);
  }
  return apply_table(table, basis, "[Nplus,Bgen]", Symmetry::symmetric);
}

SparseHermitianOperator zero_mode_pair_density(const FockBasis& basis) {
  return diagonal(basis, "a0+a0+a0a0", [&](std::size_t i) {
    const double nu = basis.occupation(i, 0);
    return nu * (nu - 1.0);
  });
}

SparseHermitianOperator commutator(const SparseHermitianOperator& a, const SparseHermitianOperator& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("operator dimensions differ");
  Symmetry s = Symmetry::general;
  if (a.symmetry != Symmetry::general && b.symmetry != Symmetry::general)
    s = a.symmetry == b.symmetry ? Symmetry::antisymmetric : Symmetry::symmetric;
  SparseMatrix ab = a.matrix * b.matrix;
  SparseMatrix ba = b.matrix * a.matrix;
  SparseMatrix m = ab - ba;
  m.makeCompressed();
  return {"[" + a.name + "," + b.name + "]", s, std::move(m)};
}

Eigen::MatrixXd one_particle_density_matrix(std::span<const double> state, const FockBasis& basis) {
  if (state.size() != basis.dim()) throw std::invalid_argument("state size does not match basis");
  const std::size_t M = basis.num_modes();
  Eigen::MatrixXd gamma = Eigen::MatrixXd::Zero(Eigen::Index(M), Eigen::Index(M));
  std::vector<std::uint8_t> work(M);
  for (std::size_t k = 0; k < basis.dim(); ++k) {
    if (state[k] == 0.0) continue;
    const auto s = basis.state(k);
    for (std::size_t i = 0; i < M; ++i) {
      if (!s[i]) continue;
      for (std::size_t j = 0; j < M; ++j) {
        // <psi, a_j^+ a_i psi> collects psi_l * <l| a_j^+ a_i |k> psi_k.
        std::copy(s.begin(), s.end(), work.begin());
        double amp = std::sqrt(double(work[i]--));
        amp *= std::sqrt(double(++work[j]));
        auto l = basis.index_of(work);
        if (!l) continue;
        gamma(Eigen::Index(i), Eigen::Index(j)) += state[*l] * amp * state[k];
      }
    }
  }
  return gamma;
}

void write_coo(const SparseHermitianOperator& op, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  char buf[96];
  for (Eigen::Index r = 0; r < op.matrix.outerSize(); ++r)
    for (SparseMatrix::InnerIterator it(op.matrix, r); it; ++it) {
      std::snprintf(buf, sizeof buf, "%ld %ld %.17g\n", long(it.row()), long(it.col()), it.value());
      out << buf;
    }
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace gpbec
