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

#ifndef GPBEC_SRC_FFTW_BUFFER_HPP
#define GPBEC_SRC_FFTW_BUFFER_HPP

#include <fftw3.h>

#include <cstddef>
#include <memory>
#include <new>

namespace gpbec::detail {

struct FftwFree {
  void operator()(void* p) const noexcept { fftw_free(p); }
};

template <typename T>
using FftwArray = std::unique_ptr<T[], FftwFree>;

template <typename T>
FftwArray<T> fftw_array(std::size_t n) {
  void* p = fftw_malloc(sizeof(T) * n);
  if (!p) throw std::bad_alloc();
  return FftwArray<T>(static_cast<T*>(p));
}

/// Owning wrapper for an fftw_plan.
class FftwPlan {
 public:
  FftwPlan() = default;
  explicit FftwPlan(fftw_plan plan) : plan_(plan) {}
  FftwPlan(const FftwPlan&) = delete;
  FftwPlan& operator=(const FftwPlan&) = delete;
  FftwPlan(FftwPlan&& o) noexcept : plan_(o.plan_) { o.plan_ = nullptr; }
  FftwPlan& operator=(FftwPlan&& o) noexcept {
    if (this != &o) {
      reset();
      plan_ = o.plan_;
      o.plan_ = nullptr;
    }
    return *this;
  }
  ~FftwPlan() { reset(); }

  void execute() const { fftw_execute(plan_); }
  fftw_plan get() const { return plan_; }

 private:
  void reset() {
    if (plan_) fftw_destroy_plan(plan_);
    plan_ = nullptr;
  }
  fftw_plan plan_ = nullptr;
};

}  // namespace gpbec::detail

#endif  // GPBEC_SRC_FFTW_BUFFER_HPP
