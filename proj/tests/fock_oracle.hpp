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

#ifndef GPBEC_TESTS_FOCK_ORACLE_HPP
#define GPBEC_TESTS_FOCK_ORACLE_HPP

// Brute-force second quantization on the full product space of M modes with
// occupations 0..L each. Mode 0 is the zero momentum, mode i + 1 is momenta[i].

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cmath>
#include <map>
#include <vector>

#include "gpbec/fock_basis.hpp"
#include "gpbec/momentum_set.hpp"
#include "gpbec/scattering.hpp"

namespace oracle {

using Sp = Eigen::SparseMatrix<double>;
using gpbec::LatticeVector;

class ProductSpace {
 public:
  ProductSpace(const gpbec::MomentumSet& set, int L) : L_(L) {
    modes_.push_back(LatticeVector{});
    for (const auto& p : set.points()) modes_.push_back(p);
    for (std::size_t m = 0; m < modes_.size(); ++m) index_[modes_[m]] = int(m);
    dim_ = 1;
    for (std::size_t m = 0; m < modes_.size(); ++m) dim_ *= (L + 1);
    for (std::size_t m = 0; m < modes_.size(); ++m) {
      std::vector<Eigen::Triplet<double>> t;
      const long stride = stride_of(m);
      for (long s = 0; s < dim_; ++s) {
        const int occ = int((s / stride) % (L + 1));
        if (occ > 0) t.emplace_back(s - stride, s, std::sqrt(double(occ)));
      }
      Sp a(dim_, dim_);
      a.setFromTriplets(t.begin(), t.end());
      ann_.push_back(a);
      cre_.push_back(Sp(a.transpose()));
    }
  }

  int modes() const { return int(modes_.size()); }
  const LatticeVector& momentum(int m) const { return modes_[std::size_t(m)]; }
  /// -1 when p is not a mode.
  int mode(const LatticeVector& p) const {
    auto it = index_.find(p);
    return it == index_.end() ? -1 : it->second;
  }

  /// c1^+ c2^+ ... a1 a2 ...
  Sp word(const std::vector<int>& cre, const std::vector<int>& ann) const {
    Sp out(dim_, dim_);
    out.setIdentity();
    for (int c : cre) out = Sp(out * cre_[std::size_t(c)]);
    for (int a : ann) out = Sp(out * ann_[std::size_t(a)]);
    return out;
  }

  Sp number(int m) const { return word({m}, {m}); }

  long product_index(const gpbec::FockBasis& b, std::size_t i) const {
    long s = 0;
    for (std::size_t m = 0; m < b.num_modes(); ++m) s += b.occupation(i, m) * stride_of(m);
    return s;
  }

  /// Restriction of a product-space operator to the basis states.
  Eigen::MatrixXd restrict(const Sp& op, const gpbec::FockBasis& b) const {
    std::map<long, std::size_t> pos;
    for (std::size_t i = 0; i < b.dim(); ++i) pos[product_index(b, i)] = i;
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(Eigen::Index(b.dim()), Eigen::Index(b.dim()));
    for (int k = 0; k < op.outerSize(); ++k)
      for (Sp::InnerIterator it(op, k); it; ++it) {
        auto r = pos.find(it.row());
        auto c = pos.find(it.col());
        if (r != pos.end() && c != pos.end()) out(Eigen::Index(r->second), Eigen::Index(c->second)) = it.value();
      }
    return out;
  }

 private:
  long stride_of(std::size_t m) const {
    long s = 1;
    for (std::size_t k = 0; k < m; ++k) s *= (L_ + 1);
    return s;
  }

  int L_;
  long dim_ = 0;
  std::vector<LatticeVector> modes_;
  std::map<LatticeVector, int> index_;
  std::vector<Sp> ann_, cre_;
};

}  // namespace oracle

#endif  // GPBEC_TESTS_FOCK_ORACLE_HPP
