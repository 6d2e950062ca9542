#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vhj/fields.hpp"
#include "vhj/util.hpp"

namespace vhj {

/// Structural constants of the Hamiltonian class: growth envelope
///   alpha0 |p|^gamma - 1/alpha0 <= H(x,p) <= alpha1 (|p|^gamma + 1),
/// momentum Lipschitz scale alpha1, x-Lipschitz scale alpha1, and the
/// Lipschitz constant kappa of sqrt(a).
struct ClassParams {
  double alpha0 = 1.0;
  double alpha1 = 1.0;
  double gamma = 2.0;
  double kappa = 0.0;
  double a_min = 1.0;
  void validate() const;
};

enum class HamForm { separable, pinned, double_well, general_sum };

std::string ham_form_name(HamForm f);
HamForm ham_form_from_name(const std::string& s);

/// Declarative description of a random environment family: the Hamiltonian
/// form, its coefficient-field models, and the diffusion model. The diffusion
/// field is built sqrt-first (sample s in [sqrt(a_min),1], set a = s^2) so the
/// Lipschitz requirement on sqrt(a) holds by construction.
struct EnvironmentSpec {
  HamForm form = HamForm::separable;
  double gamma = 2.0;       // momentum exponent for separable/pinned/general_sum
  FieldSpec potential;      // V(x)
  FieldSpec pin;            // c(x) >= 0 for pinned; second coefficient for general_sum
  double general_c0_lo = 0.5, general_c0_hi = 1.5;  // range of the leading coefficient
  FieldSpec diffusion;      // raw field, post-composed into [a_min, 1]
  double a_min = 1.0;

  void validate() const;
  /// Conservative class constants valid for every realization of this spec.
  ClassParams derive_class() const;
};

struct TruncationParams {
  double n = 0.0;  // level of the quartic floor |p|^4 - n
  double K = 0.0;  // gradient window on which the original H is untouched
};

/// One sampled environment: concrete coefficient fields plus evaluation
/// transforms (shift implements the x-translation action; reflection is used
/// internally to compute minimal solutions through the maximal-solution path).
/// Immutable after construction and cheap to copy (fields are shared).
class Realization {
 public:
  Realization(EnvironmentSpec spec, uint64_t seed);

  double a(double x) const;
  double sqrt_a(double x) const;
  double H(double x, double p) const;

  /// min_p H(x, p) at fixed x (exact for separable-type forms, numeric else).
  double min_over_p(double x) const;
  /// sup over x in the window and |p| <= p_abs of |dH/dp| (safe overestimate).
  double dHdp_bound(double p_abs) const;

  const EnvironmentSpec& spec() const { return spec_; }
  const ClassParams& klass() const { return klass_; }
  uint64_t seed() const { return seed_; }
  double shift() const { return shift_; }
  bool is_reflected() const { return reflected_; }
  const std::optional<TruncationParams>& truncation() const { return trunc_; }

  /// Environment translated by y: shifted(y).H(x,p) == H(x+y, p).
  Realization shifted(double y) const;
  /// Environment with x -> -x, p -> -p: reflected().H(x,p) == H(-x,-p).
  Realization reflected() const;

  std::string manifest_json() const;

 private:
  friend Realization truncate_superquadratic(const Realization& r, double K);
  double xeval(double x) const { return shift_ + (reflected_ ? -x : x); }
  double H_base(double xe, double pe) const;
  double pin_value(double xe) const;
  double c0_value(double xe) const;

  EnvironmentSpec spec_;
  uint64_t seed_ = 0;
  double shift_ = 0.0;
  bool reflected_ = false;
  ClassParams klass_;
  std::shared_ptr<const Field> V_, pin_, diff_;
  double smin_ = 1.0;  // sqrt(a_min)
  std::optional<TruncationParams> trunc_;
};

Realization sample_realization(const EnvironmentSpec& spec, uint64_t seed);

/// Superquadratic truncation: H~ = max(H, |p|^4 - n) with the smallest n that
/// leaves H untouched for |p| <= K. The resulting class has gamma~ = max(gamma,4).
Realization truncate_superquadratic(const Realization& r, double K);

struct ClassCheckLine {
  std::string condition;   // "H1-lower", "H1-upper", "H2", "H3", "A2", "A-range"
  double worst_margin = 0; // amount by which the inequality was violated (<=0 passes)
  double slack = 0;        // grid-resolution slack granted
  bool pass = true;
  double witness_x = 0, witness_p = 0, witness_q = 0;
};

struct ClassReport {
  std::vector<ClassCheckLine> lines;
  bool pass = true;
  std::string summary() const;
};

/// Empirical verification of the growth/Lipschitz envelope on a grid.
ClassReport verify_class(const Realization& r, Interval x_window, Interval p_window,
                         double dx, double dp);

}  // namespace vhj
