// Scalar diffusion coefficient a(x) > 0 and its pointwise inverse c = 1/a.
// The analytic descriptor tag drives the quadrature-order policy: constant
// and affine coefficients keep polynomial integrands exact where possible,
// generic callbacks fall back to the fixed high-order rule.

#ifndef WG_COEFFICIENT_HPP
#define WG_COEFFICIENT_HPP

#include <functional>
#include <string>

#include "wg/mesh.hpp"

namespace wg {

class CoefficientField {
public:
  enum class Kind { Constant, Affine, Generic };

  static CoefficientField constant(double value);
  /// a(x, y) = a0 + ax*x + ay*y
  static CoefficientField affine(double a0, double ax, double ay);
  static CoefficientField generic(std::function<double(const Vec2&)> fn);

  /// Parse "const:<v>" or "affine:<a0>,<ax>,<ay>".
  static CoefficientField parse(const std::string& descriptor);

  double operator()(const Vec2& x) const;
  double inverse_at(const Vec2& x) const { return 1.0 / (*this)(x); }

  Kind kind() const { return kind_; }
  bool is_constant() const { return kind_ == Kind::Constant; }
  /// True when a(x) itself is a polynomial (inverse still is not, unless constant).
  bool is_polynomial() const { return kind_ != Kind::Generic; }
  int poly_degree() const { return kind_ == Kind::Constant ? 0 : 1; }

  /// Gradient, available for constant/affine descriptors (used by
  /// manufactured right-hand sides).
  Vec2 gradient() const;

  std::string describe() const;

private:
  Kind kind_ = Kind::Constant;
  double a0_ = 1.0, ax_ = 0.0, ay_ = 0.0;
  std::function<double(const Vec2&)> fn_;
};

}  // namespace wg

#endif
