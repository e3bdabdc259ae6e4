#pragma once

#include <functional>
#include <utility>

#include "ensflow/types.hpp"

namespace ensflow {

/// Frequency map omega: actions -> R^n with gradient access. The gradient is
/// analytic when registered, otherwise central finite differences with
/// step 1e-5 * max(1, |I|).
class FrequencyField {
 public:
  using EvalFn = std::function<Vec(const Vec&)>;
  using GradFn = std::function<Mat(const Vec&)>;

  FrequencyField() = default;
  explicit FrequencyField(EvalFn evaluate, GradFn gradient = nullptr)
      : eval_(std::move(evaluate)), grad_(std::move(gradient)) {}

  Vec operator()(const Vec& I) const { return eval_(I); }

  Mat gradient(const Vec& I) const {
    if (grad_) return grad_(I);
    const double h = 1e-5 * std::max(1.0, I.norm());
    const int n = static_cast<int>(I.size());
    Mat g(n, n);
    Vec probe = I;
    for (int j = 0; j < n; ++j) {
      probe[j] = I[j] + h;
      const Vec up = eval_(probe);
      probe[j] = I[j] - h;
      const Vec dn = eval_(probe);
      probe[j] = I[j];
      g.col(j) = (up - dn) / (2.0 * h);
    }
    return g;
  }

  bool has_analytic_gradient() const { return static_cast<bool>(grad_); }

  /// omega(I) = A I + b.
  static FrequencyField linear(Mat A, Vec b) {
    return FrequencyField([A, b](const Vec& I) -> Vec { return A * I + b; },
                          [A](const Vec&) -> Mat { return A; });
  }

  /// Scalar convenience: omega(I) = a*I + b in one degree of freedom.
  static FrequencyField linear1d(double a, double b) {
    Mat A(1, 1);
    A(0, 0) = a;
    Vec off(1);
    off[0] = b;
    return linear(std::move(A), std::move(off));
  }

  static FrequencyField constant(Vec value) {
    const int n = static_cast<int>(value.size());
    return FrequencyField([value](const Vec&) -> Vec { return value; },
                          [n](const Vec&) -> Mat { return Mat::Zero(n, n); });
  }

 private:
  EvalFn eval_;
  GradFn grad_;
};

}  // namespace ensflow
