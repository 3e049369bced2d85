#pragma once

#include <cmath>
#include <string>

#include "iqplab/counting/stockmeyer.hpp"
#include "iqplab/error.hpp"
#include "json.hpp"

namespace iqplab {

/// Constants of the additive-error chain. tau, xi, u, v and w are derived.
struct ChainParams {
  double eps = 0.05;
  double delta = 0.1;
  double sigma = 0.9;
  int alpha = 16;
  int r = 5;  // amplification parameter of every A_k call

  double tau() const { return eps / (sigma * delta); }
  double xi() const { return xi_for_alpha(alpha); }
  double u() const { return sigma + (1.0 + sigma) * xi(); }
  double v() const {
    const double s = 1.0 - tau();
    return s * s / 3.0 - delta;
  }
  /// Success probability of one estimate over T random bits.
  double w(int randomness_bits) const { return stockmeyer_success_bound(alpha, randomness_bits, r); }

  double u_lower_note() const { return eps / (1.0 + std::sqrt(3.0)); }
  double v_upper_note() const { return 1.0 - eps / (u() * (1.0 + std::sqrt(3.0))); }

  /// Throws ConfigError on infeasible constants: tau >= 1, or v <= 0 unless allowed.
  void validate(bool allow_nonpositive_v = false) const {
    if (!(eps >= 0.0) || !std::isfinite(eps)) throw ConfigError("chain: eps must be finite and >= 0");
    if (!(delta > 0.0) || !std::isfinite(delta)) throw ConfigError("chain: delta must be > 0");
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ConfigError("chain: sigma must be > 0");
    if (alpha < 1) throw ConfigError("chain: alpha must be >= 1");
    if (r < 1) throw ConfigError("chain: r must be >= 1");
    if (tau() >= 1.0) throw ConfigError("chain: tau = eps/(sigma delta) = " + std::to_string(tau()) + " must be < 1");
    if (!allow_nonpositive_v && v() <= 0.0) {
      throw ConfigError("chain: v = (1-tau)^2/3 - delta = " + std::to_string(v()) + " must be > 0");
    }
  }

  nlohmann::json to_json(int randomness_bits) const {
    return {{"eps", eps},   {"delta", delta}, {"sigma", sigma}, {"alpha", alpha},
            {"r", r},       {"tau", tau()},   {"xi", xi()},     {"u", u()},
            {"v", v()},     {"w", w(randomness_bits)},
            {"u_lower_note", u_lower_note()}, {"v_upper_note", v_upper_note()}};
  }
};

}  // namespace iqplab
