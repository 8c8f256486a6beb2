#ifndef FRADEX_GL_COEFF_HPP
#define FRADEX_GL_COEFF_HPP

#include <cstddef>
#include <stdexcept>

namespace fradex {

/// Fractional differentiation order, restricted to (1, 2].
class FractionalOrder {
public:
  explicit FractionalOrder(double alpha) : value_(alpha) {
    if (!(alpha > 1.0 && alpha <= 2.0))
      throw std::invalid_argument("fractional order must lie in (1, 2]");
  }

  double value() const noexcept { return value_; }

private:
  double value_;
};

/*
 * Stream of Grunwald-Letnikov weights g_k = (-1)^k * binom(alpha, k),
 * generated with the multiplicative recurrence
 *
 *     g_0 = 1,   g_k = g_{k-1} * (k - 1 - alpha) / k,
 *
 * which avoids gamma evaluations at negative arguments and is exact for
 * alpha = 2 (the stream degenerates to 1, -2, 1, 0, 0, ...).
 *
 * The weights sum to zero over k = 0..infinity and satisfy g_1 = -alpha,
 * g_k >= 0 otherwise. The stream therefore tracks the running partial sum:
 * its negation is the exact remaining tail mass sum_{l>k} g_l, which equals
 * sum_{l>k} |g_l| once g_1 has been consumed. Series truncation decisions
 * are based on that exact tail, not on an asymptotic estimate.
 */
class GlCoefficientStream {
public:
  explicit GlCoefficientStream(FractionalOrder order) : order_(order) {}

  /// Emits g_0, g_1, g_2, ... on successive calls and returns the new weight.
  double next() {
    if (emitted_ == 0) {
      current_ = 1.0;
    } else {
      const double k = static_cast<double>(emitted_);
      current_ *= (k - 1.0 - order_.value()) / k;
    }
    partial_sum_ += current_;
    ++emitted_;
    return current_;
  }

  FractionalOrder order() const noexcept { return order_; }

  /// Index k of the most recently emitted weight.
  std::size_t index() const {
    require_emitted(1);
    return emitted_ - 1;
  }

  /// The most recently emitted weight g_k.
  double current() const {
    require_emitted(1);
    return current_;
  }

  /// sum_{l=0}^{k} g_l, accumulated in extended precision.
  double partial_sum() const {
    require_emitted(1);
    return static_cast<double>(partial_sum_);
  }

  /// Exact remaining tail sum_{l>k} g_l = sum_{l>k} |g_l|. Requires k >= 1.
  double tail_magnitude() const {
    require_emitted(2);
    return static_cast<double>(-partial_sum_);
  }

private:
  void require_emitted(std::size_t min_count) const {
    if (emitted_ < min_count)
      throw std::logic_error("GlCoefficientStream: not enough coefficients emitted");
  }

  FractionalOrder order_;
  std::size_t emitted_ = 0;
  double current_ = 0.0;
  long double partial_sum_ = 0.0L;
};

} // namespace fradex

#endif
