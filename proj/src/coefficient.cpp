#include "wg/coefficient.hpp"

#include <sstream>
#include <stdexcept>

namespace wg {

CoefficientField CoefficientField::constant(double value) {
  if (value <= 0.0) throw std::invalid_argument("coefficient: constant value must be positive");
  CoefficientField c;
  c.kind_ = Kind::Constant;
  c.a0_ = value;
  return c;
}

CoefficientField CoefficientField::affine(double a0, double ax, double ay) {
  CoefficientField c;
  c.kind_ = Kind::Affine;
  c.a0_ = a0;
  c.ax_ = ax;
  c.ay_ = ay;
  return c;
}

CoefficientField CoefficientField::generic(std::function<double(const Vec2&)> fn) {
  CoefficientField c;
  c.kind_ = Kind::Generic;
  c.fn_ = std::move(fn);
  return c;
}

CoefficientField CoefficientField::parse(const std::string& descriptor) {
  const auto colon = descriptor.find(':');
  const std::string tag = descriptor.substr(0, colon);
  const std::string args = (colon == std::string::npos) ? "" : descriptor.substr(colon + 1);
  if (tag == "const") {
    if (args.empty()) throw std::invalid_argument("coefficient: expected const:<v>");
    return constant(std::stod(args));
  }
  if (tag == "affine") {
    std::istringstream ss(args);
    double a0, ax, ay;
    char c1, c2;
    if (!(ss >> a0 >> c1 >> ax >> c2 >> ay) || c1 != ',' || c2 != ',')
      throw std::invalid_argument("coefficient: expected affine:<a0>,<ax>,<ay>");
    return affine(a0, ax, ay);
  }
  throw std::invalid_argument("coefficient: unknown descriptor '" + descriptor +
                              "' (valid: const:<v>, affine:<a0>,<ax>,<ay>)");
}

double CoefficientField::operator()(const Vec2& x) const {
  switch (kind_) {
    case Kind::Constant:
      return a0_;
    case Kind::Affine:
      return a0_ + ax_ * x.x() + ay_ * x.y();
    case Kind::Generic:
      return fn_(x);
  }
  return a0_;
}

Vec2 CoefficientField::gradient() const {
  if (kind_ == Kind::Generic)
    throw std::invalid_argument("coefficient: gradient unavailable for generic callbacks");
  return Vec2(ax_, ay_);
}

std::string CoefficientField::describe() const {
  std::ostringstream ss;
  switch (kind_) {
    case Kind::Constant:
      ss << "const:" << a0_;
      break;
    case Kind::Affine:
      ss << "affine:" << a0_ << "," << ax_ << "," << ay_;
      break;
    case Kind::Generic:
      ss << "generic";
      break;
  }
  return ss.str();
}

}  // namespace wg
