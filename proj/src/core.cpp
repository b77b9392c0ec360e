#include "hyperkin/core.hpp"

#include <cmath>

namespace hyperkin {

namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw PreconditionError(std::string("PhysicalParams.") + name +
                            " must be positive and finite");
  }
}

}  // namespace

void PhysicalParams::validate() const {
  require_positive(hbar, "hbar");
  require_positive(mass, "mass");
  require_positive(kappa, "kappa");
  require_positive(beta, "beta");
  require_positive(omega, "omega");
}

PhysicalParams PhysicalParams::natural(double bk) {
  PhysicalParams p;
  p.beta = bk / p.kappa;
  p.validate();
  return p;
}

double epsilon(const PhysicalParams& params) {
  params.validate();
  return params.epsilon();
}

HyperDimension::HyperDimension(int d) : d_(d) {
  if (d < 1) {
    throw PreconditionError("dimension D must be >= 1, got " + std::to_string(d));
  }
}

HyperDimension HyperDimension::from_particles(int n) {
  if (n < 1) {
    throw PreconditionError("particle count N must be >= 1, got " + std::to_string(n));
  }
  return HyperDimension(3 * n);
}

int HyperDimension::particles() const {
  if (!has_particles()) {
    throw PreconditionError("D = " + std::to_string(d_) +
                            " is not a multiple of 3; particle count undefined");
  }
  return d_ / 3;
}

long long strength(HyperDimension dim) { return dim.strength(); }

void Tolerance::validate() const {
  if (!(rel > 0.0) || !(abs > 0.0)) {
    throw PreconditionError("tolerances must be positive");
  }
  if (max_subdivisions < 1) {
    throw PreconditionError("max_subdivisions must be >= 1");
  }
}

}  // namespace hyperkin
