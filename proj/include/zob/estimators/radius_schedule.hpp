#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>

#include "zob/types.hpp"

namespace zob {

/// Smoothing radii r_k = min(r0 / (k+1)^decay, cap) for k = 0..horizon.
///
/// Construction enforces sum_{k<=horizon} r_k^2 <= kSafety / b, which keeps
/// the strict form of the condition as well.
template <typename Scalar>
class RadiusSchedule {
 public:
  static constexpr double kSafety = 0.99;
  static constexpr std::int64_t kExactTerms = 2000000;

  /// Validates the constants as given; throws InvalidRadiusError when the
  /// squared-sum budget is exceeded.
  static RadiusSchedule make(Scalar r0, Scalar decay, Scalar cap, Index block_size, std::int64_t horizon) {
    RadiusSchedule s(r0, decay, cap, block_size, horizon);
    const Scalar sum = s.squared_sum();
    const Scalar budget = s.budget();
    if (sum > budget) {
      std::ostringstream os;
      os << "radius schedule violates sum_{k<=K} r_k^2 <= 1/b (with safety " << kSafety << "): sum = " << sum
         << " > " << budget << " for b = " << block_size << ", K = " << horizon;
      throw InvalidRadiusError(os.str());
    }
    return s;
  }

  /// Scales r0 and cap by a common factor (only ever shrinking) so the
  /// squared-sum budget holds for the horizon.
  static RadiusSchedule auto_rescaled(Scalar r0, Scalar decay, Scalar cap, Index block_size,
                                      std::int64_t horizon) {
    RadiusSchedule s(r0, decay, cap, block_size, horizon);
    const Scalar sum = s.squared_sum();
    const Scalar budget = s.budget();
    if (sum > budget) {
      // A hair under the exact factor so rounding cannot push the sum over.
      const Scalar scale = std::sqrt(budget / sum) * Scalar(1 - 1e-12);
      s.r0_ *= scale;
      s.cap_ *= scale;
    }
    return s;
  }

  /// Constant radius; convenient for tests.
  static RadiusSchedule constant(Scalar r, Index block_size, std::int64_t horizon) {
    return make(r, Scalar(0), r, block_size, horizon);
  }

  Scalar operator()(std::int64_t k) const {
    if (k < 0) throw InvalidParameterError("radius schedule: k must be >= 0");
    const Scalar decayed = r0_ / std::pow(Scalar(k + 1), decay_);
    return decayed < cap_ ? decayed : cap_;
  }

  Scalar squared_sum() const { return squared_sum(horizon_); }

  /// Exact for moderate horizons. Past kExactTerms decaying terms the tail is
  /// replaced by its integral upper bound, so the result never undercounts.
  Scalar squared_sum(std::int64_t last) const {
    if (last < 0) return Scalar(0);
    if (decay_ == Scalar(0)) {
      const Scalar r = (*this)(0);
      return Scalar(last + 1) * r * r;
    }
    std::int64_t k = 0;
    Scalar sum(0);
    if (r0_ > cap_) {
      const double cross = std::pow(static_cast<double>(r0_ / cap_), 1.0 / static_cast<double>(decay_));
      std::int64_t saturated = cross >= double(last + 1) ? last + 1 : std::int64_t(cross) - 1;
      saturated = std::max<std::int64_t>(saturated - 2, 0);
      sum += Scalar(saturated) * cap_ * cap_;
      k = saturated;
    }
    const std::int64_t exact_end = std::min(last, k + kExactTerms);
    for (; k <= exact_end; ++k) {
      const Scalar r = (*this)(k);
      sum += r * r;
    }
    if (k <= last) {
      // Terms r0^2 n^{-2 decay} with n = k + 1, decreasing and below the cap.
      const double e = 2.0 * static_cast<double>(decay_);
      const double lo = double(k);
      const double hi = double(last + 1);
      const double r02 = static_cast<double>(r0_ * r0_);
      const double tail = std::abs(e - 1.0) < 1e-12 ? r02 * std::log(hi / lo)
                                                    : r02 * (std::pow(hi, 1.0 - e) - std::pow(lo, 1.0 - e)) / (1.0 - e);
      sum += Scalar(tail);
    }
    return sum;
  }

  Scalar budget() const { return Scalar(kSafety) / Scalar(block_size_); }

  Scalar r0() const { return r0_; }
  Scalar decay() const { return decay_; }
  Scalar cap() const { return cap_; }
  Index block_size() const { return block_size_; }
  std::int64_t horizon() const { return horizon_; }

 private:
  RadiusSchedule(Scalar r0, Scalar decay, Scalar cap, Index block_size, std::int64_t horizon)
      : r0_(r0), decay_(decay), cap_(cap), block_size_(block_size), horizon_(horizon) {
    if (!(r0 > Scalar(0)) || !std::isfinite(static_cast<double>(r0)))
      throw InvalidRadiusError("radius schedule: r0 must be finite and > 0");
    if (!(cap > Scalar(0)) || !std::isfinite(static_cast<double>(cap)))
      throw InvalidRadiusError("radius schedule: cap must be finite and > 0");
    if (!(decay >= Scalar(0))) throw InvalidRadiusError("radius schedule: decay exponent must be >= 0");
    if (block_size < 1) throw InvalidBlockError("radius schedule: block size must be >= 1");
    if (horizon < 0) throw InvalidParameterError("radius schedule: horizon must be >= 0");
  }

  Scalar r0_;
  Scalar decay_;
  Scalar cap_;
  Index block_size_;
  std::int64_t horizon_;
};

}  // namespace zob
