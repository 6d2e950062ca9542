#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "vhj/util.hpp"

namespace vhj {

enum class FieldModel { constant, periodic_cosine, random_fourier, poisson_bumps };

std::string field_model_name(FieldModel m);
FieldModel field_model_from_name(const std::string& s);

/// Parameters of one scalar random-field model. Interpretation depends on the
/// model; unset members are ignored.
struct FieldSpec {
  FieldModel model = FieldModel::constant;
  double constant_value = 0.0;
  double amplitude = 1.0;          // sup-norm budget of the sampled field
  double period = 1.0;             // base period of cosine / fourier models
  std::vector<double> harmonics{1.0};  // periodic_cosine: weights of cos(2*pi*k*x/P)
  int modes = 16;                  // random_fourier: number of modes
  double decay = 2.0;              // random_fourier: |c_k| ~ k^-decay, must be >= 2
  double bump_density = 1.0;       // poisson_bumps: expected bumps per unit length
  double bump_width = 0.35;        // poisson_bumps: half-width of one bump
  void validate(const std::string& where) const;
};

/// A sampled scalar field on the real line with certified bounds.
class Field {
 public:
  virtual ~Field() = default;
  virtual double value(double x) const = 0;
  /// sup_x |value|, guaranteed by construction.
  double sup_abs() const { return sup_abs_; }
  /// Lipschitz bound of value().
  double lip() const { return lip_; }

 protected:
  double sup_abs_ = 0.0;
  double lip_ = 0.0;
};

class ConstantField final : public Field {
 public:
  explicit ConstantField(double v) : v_(v) {
    sup_abs_ = std::abs(v);
    lip_ = 0.0;
  }
  double value(double) const override { return v_; }

 private:
  double v_;
};

/// Deterministic cosine series: sum_k w_k cos(2 pi k x / P).
class CosineSeriesField final : public Field {
 public:
  CosineSeriesField(double period, std::vector<double> weights);
  double value(double x) const override;

 private:
  double period_;
  std::vector<double> w_;
};

/// Random-phase Fourier series with power-law amplitude decay. The phases are
/// the only randomness; uniform phases make the field a stationary process on
/// the circle of circumference `period`.
class RandomFourierField final : public Field {
 public:
  RandomFourierField(double period, int modes, double amplitude, double decay, uint64_t seed);
  double value(double x) const override;
  const std::vector<double>& amplitudes() const { return amp_; }
  const std::vector<double>& phases() const { return phase_; }

 private:
  double period_;
  std::vector<double> amp_, phase_;
};

/// Homogeneous Poisson field of compactly supported C^2 bumps. Bump centers are
/// materialized lazily per unit cell from a per-cell seed, so evaluations are
/// reproducible regardless of query order. The bump sum is clamped at a fixed
/// cap so the declared sup bound holds for every seed.
class PoissonBumpField final : public Field {
 public:
  PoissonBumpField(double density, double width, double amplitude, uint64_t seed);
  double value(double x) const override;
  double cap() const { return cap_; }
  /// Centers materialized so far (for manifests).
  std::vector<double> materialized_centers() const;

 private:
  const std::vector<double>& cell(long m) const;
  double density_, width_, amplitude_, cap_;
  uint64_t seed_;
  mutable std::map<long, std::vector<double>> cells_;
  mutable std::mutex mu_;
};

std::shared_ptr<const Field> make_field(const FieldSpec& spec, uint64_t seed, uint64_t stream);

}  // namespace vhj
