#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "fisher_noise/errors.hpp"

namespace fisher_noise {

// Quality (distortion) function g: even in w, nonnegative, nondecreasing in
// |w|. The expected value of g under the noise density is the quality
// functional; a response is useful when that expectation is small.
class QualityFn {
 public:
  enum class Kind { Zero, Quadratic, EvenPower, EvenPolynomial };

  static QualityFn zero() { return QualityFn(Kind::Zero, 0, {}); }
  static QualityFn quadratic() { return QualityFn(Kind::Quadratic, 2, {}); }

  static QualityFn even_power(int k) {
    if (k < 2 || k % 2 != 0)
      throw InvalidQuality("even_power exponent must be a positive even integer");
    return QualityFn(Kind::EvenPower, k, {});
  }

  // coeffs[j] multiplies w^(2(j+1)); all must be >= 0 and at least one > 0.
  static QualityFn even_polynomial(std::vector<double> coeffs) {
    bool any_positive = false;
    for (double c : coeffs) {
      if (!(c >= 0.0) || !std::isfinite(c))
        throw InvalidQuality("even_polynomial coefficients must be finite and nonnegative");
      any_positive = any_positive || c > 0.0;
    }
    if (!any_positive)
      throw InvalidQuality("even_polynomial needs at least one positive coefficient");
    return QualityFn(Kind::EvenPolynomial, 0, std::move(coeffs));
  }

  Kind kind() const { return kind_; }
  int power() const { return power_; }
  const std::vector<double>& coeffs() const { return coeffs_; }
  bool is_zero() const { return kind_ == Kind::Zero; }
  bool is_quadratic() const { return kind_ == Kind::Quadratic; }

  double operator()(double w) const {
    switch (kind_) {
      case Kind::Zero:
        return 0.0;
      case Kind::Quadratic:
        return w * w;
      case Kind::EvenPower: {
        double w2 = w * w;
        double r = 1.0;
        for (int i = 0; i < power_ / 2; ++i) r *= w2;
        return r;
      }
      case Kind::EvenPolynomial: {
        // Horner in w^2.
        double w2 = w * w;
        double r = 0.0;
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
          r = r * w2 + *it;
        return r * w2;
      }
    }
    return 0.0;
  }

  friend bool operator==(const QualityFn& a, const QualityFn& b) {
    return a.kind_ == b.kind_ && a.power_ == b.power_ && a.coeffs_ == b.coeffs_;
  }

 private:
  QualityFn(Kind kind, int power, std::vector<double> coeffs)
      : kind_(kind), power_(power), coeffs_(std::move(coeffs)) {}

  Kind kind_;
  int power_;
  std::vector<double> coeffs_;
};

inline double eval_quality_fn(const QualityFn& g, double w) { return g(w); }

}  // namespace fisher_noise
