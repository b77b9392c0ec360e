#pragma once

#include <stdexcept>
#include <string>

namespace hyperkin {

// Error hierarchy. The CLI maps these onto exit codes:
// DomainError/PreconditionError -> 2, NumericalError -> 3.

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what, std::string diagnostics = {})
      : std::runtime_error(what), diagnostics_(std::move(diagnostics)) {}

  const std::string& diagnostics() const noexcept { return diagnostics_; }

 private:
  std::string diagnostics_;
};

/// Raised when an expectation value such as <r^-2> does not exist for a state.
class DivergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Physical constants of the problem. Natural units are the defaults.
struct PhysicalParams {
  double hbar = 1.0;
  double mass = 1.0;
  double kappa = 1.0;  // inverse length
  double beta = 1.0;   // length; only the product beta*kappa shapes u2
  double omega = 1.0;  // trap frequency for the fermion reference only

  /// Throws PreconditionError unless every field is strictly positive and finite.
  void validate() const;

  /// (hbar*kappa)^2 / (2 M)
  double epsilon() const noexcept { return (hbar * kappa) * (hbar * kappa) / (2.0 * mass); }

  /// hbar^2 / (2 M)
  double kinetic_prefactor() const noexcept { return hbar * hbar / (2.0 * mass); }

  double beta_kappa() const noexcept { return beta * kappa; }

  /// Natural units with beta chosen so that beta*kappa = bk.
  static PhysicalParams natural(double bk = 1.0);

  friend bool operator==(const PhysicalParams&, const PhysicalParams&) = default;
};

double epsilon(const PhysicalParams& params);

/// Dimension D of configuration space. D = 3N for N particles in three dimensions.
class HyperDimension {
 public:
  explicit HyperDimension(int d);

  static HyperDimension from_particles(int n);

  int value() const noexcept { return d_; }

  /// (D-1)(D-3): zero at D = 1, 3; -1 at D = 2; positive for D >= 4.
  long long strength() const noexcept {
    return static_cast<long long>(d_ - 1) * static_cast<long long>(d_ - 3);
  }

  bool has_particles() const noexcept { return d_ % 3 == 0; }

  /// D/3. Throws PreconditionError when D is not a multiple of 3.
  int particles() const;

  friend bool operator==(HyperDimension, HyperDimension) = default;

 private:
  int d_;
};

long long strength(HyperDimension dim);

struct Tolerance {
  double rel = 1e-10;
  double abs = 1e-12;
  int max_subdivisions = 15;

  void validate() const;
};

}  // namespace hyperkin
