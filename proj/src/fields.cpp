#include "vhj/fields.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace vhj {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

std::string field_model_name(FieldModel m) {
  switch (m) {
    case FieldModel::constant: return "constant";
    case FieldModel::periodic_cosine: return "periodic_cosine";
    case FieldModel::random_fourier: return "random_fourier";
    case FieldModel::poisson_bumps: return "poisson_bumps";
  }
  return "?";
}

FieldModel field_model_from_name(const std::string& s) {
  if (s == "constant") return FieldModel::constant;
  if (s == "periodic_cosine") return FieldModel::periodic_cosine;
  if (s == "random_fourier") return FieldModel::random_fourier;
  if (s == "poisson_bumps") return FieldModel::poisson_bumps;
  throw ConfigError("unknown field model: " + s);
}

void FieldSpec::validate(const std::string& where) const {
  auto bad = [&](const std::string& msg) { throw ConfigError(where + ": " + msg); };
  switch (model) {
    case FieldModel::constant:
      break;
    case FieldModel::periodic_cosine:
      if (period <= 0) bad("period must be positive");
      if (harmonics.empty()) bad("empty harmonic list");
      break;
    case FieldModel::random_fourier:
      if (period <= 0) bad("period must be positive");
      if (modes < 1) bad("modes must be >= 1");
      if (decay < 2.0) bad("decay must be >= 2 (keeps the x-Lipschitz constant finite)");
      if (amplitude < 0) bad("amplitude must be nonnegative");
      break;
    case FieldModel::poisson_bumps:
      if (bump_density <= 0) bad("bump density must be positive");
      if (bump_width <= 0) bad("bump width must be positive");
      if (amplitude < 0) bad("amplitude must be nonnegative");
      break;
  }
}

CosineSeriesField::CosineSeriesField(double period, std::vector<double> weights)
    : period_(period), w_(std::move(weights)) {
  double s = 0, l = 0;
  for (size_t k = 0; k < w_.size(); ++k) {
    s += std::abs(w_[k]);
    l += std::abs(w_[k]) * kTwoPi * static_cast<double>(k + 1) / period_;
  }
  sup_abs_ = s;
  lip_ = l;
}

double CosineSeriesField::value(double x) const {
  double v = 0;
  for (size_t k = 0; k < w_.size(); ++k)
    v += w_[k] * std::cos(kTwoPi * static_cast<double>(k + 1) * x / period_);
  return v;
}

RandomFourierField::RandomFourierField(double period, int modes, double amplitude, double decay,
                                       uint64_t seed)
    : period_(period) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uphase(0.0, kTwoPi);
  amp_.resize(static_cast<size_t>(modes));
  phase_.resize(static_cast<size_t>(modes));
  double z = 0;
  for (int k = 1; k <= modes; ++k) z += std::pow(static_cast<double>(k), -decay);
  double l = 0;
  for (int k = 1; k <= modes; ++k) {
    const size_t i = static_cast<size_t>(k - 1);
    amp_[i] = amplitude * std::pow(static_cast<double>(k), -decay) / z;
    phase_[i] = uphase(rng);
    l += amp_[i] * kTwoPi * k / period_;
  }
  sup_abs_ = amplitude;  // sum of |amp_k| = amplitude by normalization
  lip_ = l;
}

double RandomFourierField::value(double x) const {
  double v = 0;
  for (size_t i = 0; i < amp_.size(); ++i)
    v += amp_[i] * std::cos(kTwoPi * static_cast<double>(i + 1) * x / period_ + phase_[i]);
  return v;
}

namespace {
// C^2 compact bump on (-1,1), max 1 at 0. max |d/dt| = 1.71... at t = 1/sqrt(5).
inline double bump(double t) {
  const double q = 1.0 - t * t;
  return q > 0 ? q * q * q : 0.0;
}
constexpr double kBumpLip = 1.7184;  // slightly above 96/(25*sqrt(5))
}  // namespace

PoissonBumpField::PoissonBumpField(double density, double width, double amplitude, uint64_t seed)
    : density_(density), width_(width), amplitude_(amplitude), seed_(seed) {
  const double mean_overlap = 2.0 * density * width;
  cap_ = mean_overlap + 6.0 * std::sqrt(std::max(mean_overlap, 1.0)) + 2.0;
  sup_abs_ = amplitude_ * cap_;
  // Lipschitz bound of the clamped sum; the cap bounds how many bumps can
  // contribute before clamping freezes the value.
  lip_ = amplitude_ * kBumpLip / width_ * cap_;
}

const std::vector<double>& PoissonBumpField::cell(long m) const {
  {
    std::lock_guard<std::mutex> lk(mu_);
    auto it = cells_.find(m);
    if (it != cells_.end()) return it->second;
  }
  // Materialize outside the lock, insert once. Per-cell seed makes the result
  // independent of which window asked first.
  std::mt19937_64 rng(splitmix64(seed_ ^ splitmix64(static_cast<uint64_t>(m) * 0x9e3779b97f4a7c15ull)));
  std::poisson_distribution<int> pois(density_);
  std::uniform_real_distribution<double> upos(0.0, 1.0);
  const int n = pois(rng);
  std::vector<double> centers(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) centers[static_cast<size_t>(i)] = static_cast<double>(m) + upos(rng);
  std::lock_guard<std::mutex> lk(mu_);
  return cells_.emplace(m, std::move(centers)).first->second;
}

double PoissonBumpField::value(double x) const {
  const long m_lo = static_cast<long>(std::floor(x - width_));
  const long m_hi = static_cast<long>(std::floor(x + width_));
  double s = 0;
  for (long m = m_lo; m <= m_hi; ++m)
    for (double c : cell(m)) s += bump((x - c) / width_);
  if (s > cap_) s = cap_;
  return amplitude_ * s;
}

std::vector<double> PoissonBumpField::materialized_centers() const {
  std::lock_guard<std::mutex> lk(mu_);
  std::vector<double> out;
  for (const auto& [m, cs] : cells_) out.insert(out.end(), cs.begin(), cs.end());
  return out;
}

std::shared_ptr<const Field> make_field(const FieldSpec& spec, uint64_t seed, uint64_t stream) {
  const uint64_t s = splitmix64(seed ^ splitmix64(stream));
  switch (spec.model) {
    case FieldModel::constant:
      return std::make_shared<ConstantField>(spec.constant_value);
    case FieldModel::periodic_cosine: {
      std::vector<double> w = spec.harmonics;
      for (auto& v : w) v *= spec.amplitude;
      return std::make_shared<CosineSeriesField>(spec.period, std::move(w));
    }
    case FieldModel::random_fourier:
      return std::make_shared<RandomFourierField>(spec.period, spec.modes, spec.amplitude,
                                                  spec.decay, s);
    case FieldModel::poisson_bumps:
      return std::make_shared<PoissonBumpField>(spec.bump_density, spec.bump_width, spec.amplitude,
                                                s);
  }
  throw ConfigError("unhandled field model");
}

}  // namespace vhj
