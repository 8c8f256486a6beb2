#ifndef FRADEX_EXTENSION_HPP
#define FRADEX_EXTENSION_HPP

#include <cstdint>
#include <cstddef>
#include <span>
#include <stdexcept>

namespace fradex {

/*
 * Periodic reflection maps that pull an arbitrary integer grid index back to
 * a base-vector index. Both extensions are 2-periodic in physical units,
 * i.e. period 2N+2 in index units; no extended vector is ever materialized.
 */

/// Even (mirror) extension of a cell-centered vector v_0..v_N about the
/// walls: the mirror axes sit between indices -1,0 and N,N+1. Enforces the
/// zero-flux reflection v_{-j-1} = v_j.
class NeumannIndexMap {
public:
  explicit NeumannIndexMap(std::size_t n_points) : n_(n_points) {
    if (n_points == 0)
      throw std::invalid_argument("NeumannIndexMap: empty base vector");
  }

  std::size_t n_points() const noexcept { return n_; }
  std::int64_t period() const noexcept { return 2 * static_cast<std::int64_t>(n_); }

  /// Base index in {0..N} for any j in Z.
  std::size_t map(std::int64_t j) const noexcept {
    const std::int64_t p = period();
    std::int64_t m = j % p;
    if (m < 0) m += p;
    const std::int64_t last = static_cast<std::int64_t>(n_) - 1;
    return static_cast<std::size_t>(m <= last ? m : p - 1 - m);
  }

  double sample(std::span<const double> v, std::int64_t j) const {
    if (v.size() != n_)
      throw std::invalid_argument("NeumannIndexMap: base vector length mismatch");
    return v[map(j)];
  }

private:
  std::size_t n_;
};

/// Odd (sign-flipping) extension of a vector v_0..v_{N+1} whose endpoints
/// are the zero-valued boundary entries. map() returns the base index plus
/// the sign picked up by the reflection.
class DirichletIndexMap {
public:
  struct SignedIndex {
    std::size_t index;
    int sign; // +1 or -1
  };

  explicit DirichletIndexMap(std::size_t n_points) : n_(n_points) {
    if (n_points < 2)
      throw std::invalid_argument("DirichletIndexMap: base vector needs both endpoints");
  }

  std::size_t n_points() const noexcept { return n_; }
  std::int64_t period() const noexcept { return 2 * (static_cast<std::int64_t>(n_) - 1); }

  SignedIndex map(std::int64_t j) const noexcept {
    const std::int64_t p = period();
    std::int64_t m = j % p;
    if (m < 0) m += p;
    const std::int64_t top = static_cast<std::int64_t>(n_) - 1; // N+1
    if (m <= top) return {static_cast<std::size_t>(m), +1};
    return {static_cast<std::size_t>(p - m), -1};
  }

  double sample(std::span<const double> v, std::int64_t j) const {
    if (v.size() != n_)
      throw std::invalid_argument("DirichletIndexMap: base vector length mismatch");
    const SignedIndex s = map(j);
    return s.sign * v[s.index];
  }

private:
  std::size_t n_;
};

} // namespace fradex

#endif
