#pragma once

#include <cstddef>
#include <vector>

#include "polar/interval.hpp"
#include "polar/polynomial.hpp"
#include "polar/taylor_model.hpp"

namespace polar {

/// x' = f(x) with polynomial right-hand sides. Control inputs are ordinary
/// variables whose right-hand side is zero.
struct PolynomialODE {
  std::vector<Polynomial> rhs;  ///< rhs[i] is over dim() variables

  PolynomialODE() = default;
  /// Throws DimensionError unless every rhs has rhs.size() variables.
  explicit PolynomialODE(std::vector<Polynomial> rhs);

  std::size_t dim() const noexcept { return rhs.size(); }

  /// Appends `count` static variables (zero derivative). The given right-hand
  /// sides must already range over states followed by those variables.
  static PolynomialODE with_static_inputs(std::vector<Polynomial> state_rhs, std::size_t count);
};

/// One Picard step: x0 + integral_0^t f(g(., s)) ds. g ranges over (z, t)
/// with t the last variable; x0 ranges over z. Terms above order k move into
/// the remainder.
TMVector picard_apply(const PolynomialODE& f, const TMVector& g, const TMVector& x0, unsigned k);

/// Order-k Taylor expansion in t of the flow from x_local over [0, delta],
/// obtained from k+1 Picard steps on polynomial parts. Remainders are zero.
TMVector solution_expansion(const PolynomialODE& f, const TMVector& x_local, double delta, unsigned k);

struct CertifyConfig {
  unsigned max_inflations = 30;
  unsigned refinements = 2;
};

/// Remainder R with picard(phi + R) contained in phi + R component-wise.
/// Throws ContractionFailure when no candidate works.
IntervalVector remainder_certify(const PolynomialODE& f, const TMVector& phi, const TMVector& x_local, unsigned k,
                                 const CertifyConfig& cfg = {});

struct Flowpipe {
  TMVector tm;              ///< state components over (z, t), t in [0, delta]
  std::size_t step_index = 0;  ///< index within the control step
  double t_offset = 0.0;    ///< start time relative to the control step
  double delta = 0.0;
};

struct ControlStepResult {
  std::vector<Flowpipe> flowpipes;
  TMVector next;  ///< state TM at the end of the control step, over z
};

/// N flowpipe steps of size delta_c / N with the controls held constant.
/// Throws ContractionFailure tagged with the failing flowpipe step.
ControlStepResult integrate_control_step(const PolynomialODE& f, const TMVector& x, const TMVector& u, double delta_c,
                                         unsigned N, unsigned k, const CertifyConfig& cfg = {});

}  // namespace polar
