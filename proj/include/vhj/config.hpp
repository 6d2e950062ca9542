#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "vhj/env.hpp"
#include "vhj/theta.hpp"

namespace vhj {

/// Line-oriented run configuration: `section.key = value` entries, '#'
/// comments, unknown keys rejected at load time.
class RunConfig {
 public:
  static RunConfig from_file(const std::string& path);
  static RunConfig from_text(const std::string& text);

  bool has(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  std::vector<double> get_list(const std::string& key,
                               const std::vector<double>& fallback) const;

  EnvironmentSpec environment() const;
  ThetaConfig theta_config() const;
  std::vector<uint64_t> seeds() const;
  std::vector<double> lambda_grid(double lambda0) const;
  std::vector<double> theta_grid() const;
  std::string output_dir() const;
  unsigned workers() const;

  /// FNV-1a hash of the normalized key/value content (order independent).
  std::string hash() const;
  const std::map<std::string, std::string>& entries() const { return kv_; }

 private:
  void validate_keys() const;
  std::map<std::string, std::string> kv_;
};

/// Named environments used across tests and the acceptance suite.
///   xfree_p2, xfree_p3, xfree_dw, cosine, doublewell, random_fourier, pinned
EnvironmentSpec preset_env(const std::string& name);

}  // namespace vhj
