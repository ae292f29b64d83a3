#pragma once

#include <cstdint>
#include <string>

#include "qse/channel.hpp"
#include "qse/state.hpp"

namespace qse {

// Counter-based random stream (Weyl counter + SplitMix64 finalizer). Streams
// are keyed by (seed, stream, substream) so that per-trial generators in the
// verification suites are independent and replayable in any execution order.
class SplitStream {
 public:
  explicit SplitStream(uint64_t seed);
  SplitStream(uint64_t seed, uint64_t stream, uint64_t substream);

  uint64_t next_u64();
  double next_double();    // uniform [0, 1)
  double next_gaussian();  // standard normal via Box-Muller
  cxd next_complex_gaussian();
  int next_int(int lo, int hi);  // uniform in [lo, hi]

  static uint64_t mix(uint64_t z);
  static uint64_t stream_key(const std::string& name);

 private:
  uint64_t counter_;
  bool has_cached_ = false;
  double cached_ = 0.0;
};

CMat random_unitary(int d, SplitStream& g);
CMat random_hermitian(int d, SplitStream& g);  // GUE-style, unnormalized

PureState random_pure(const SystemLayout& layout, SplitStream& g);
PureState random_pure(const SystemLayout& layout, uint64_t seed);

// Marginal of a Haar-random pure state on layout (x) rank-dim ancilla.
// subnorm_min < 1 additionally scales by a uniform factor in (subnorm_min, 1].
State random_state(const SystemLayout& layout, int rank, SplitStream& g,
                   double subnorm_min = 1.0);
State random_state(const SystemLayout& layout, int rank, uint64_t seed,
                   double subnorm_min = 1.0);

// Haar isometry from an n-dim source into an m-dim target (m >= n).
Isometry random_isometry(int n, int m, SplitStream& g);
Isometry random_isometry(int n, int m, uint64_t seed);

// Stinespring dilation of a Haar isometry; the trace non-increasing variant
// composes with a Haar-random projector of rank in [1, d_out] on the output.
Channel random_channel(const SystemLayout& in, const SystemLayout& out, int env_dim,
                       SplitStream& g, bool trace_preserving = true);
Channel random_channel(const SystemLayout& in, const SystemLayout& out, int env_dim,
                       uint64_t seed, bool trace_preserving = true);

}  // namespace qse
