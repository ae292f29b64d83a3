#include "qse/random.hpp"

#include <Eigen/QR>
#include <cmath>

namespace qse {

namespace {
constexpr uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
}

uint64_t SplitStream::mix(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

uint64_t SplitStream::stream_key(const std::string& name) {
  uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char c : name) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

SplitStream::SplitStream(uint64_t seed) : counter_(mix(seed + kGolden)) {}

SplitStream::SplitStream(uint64_t seed, uint64_t stream, uint64_t substream)
    : counter_(mix(mix(mix(seed + kGolden) ^ stream) ^ substream)) {}

uint64_t SplitStream::next_u64() {
  counter_ += kGolden;
  return mix(counter_);
}

double SplitStream::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double SplitStream::next_gaussian() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  // u1 in (0, 1] so the log is finite.
  double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  double u2 = next_double();
  double r = std::sqrt(-2.0 * std::log(u1));
  double a = 2.0 * M_PI * u2;
  cached_ = r * std::sin(a);
  has_cached_ = true;
  return r * std::cos(a);
}

cxd SplitStream::next_complex_gaussian() {
  double re = next_gaussian();
  double im = next_gaussian();
  return cxd(re, im);
}

int SplitStream::next_int(int lo, int hi) {
  if (hi < lo) throw ContractError("next_int: empty range");
  uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
  return lo + static_cast<int>(next_u64() % span);
}

namespace {

CMat gaussian_matrix(int rows, int cols, SplitStream& g) {
  CMat m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = g.next_complex_gaussian();
  return m;
}

// QR with the phase convention that makes the distribution Haar.
CMat haar_columns(int rows, int cols, SplitStream& g) {
  CMat a = gaussian_matrix(rows, cols, g);
  Eigen::HouseholderQR<CMat> qr(a);
  CMat q = qr.householderQ() * CMat::Identity(rows, cols);
  CMat r = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
  for (int c = 0; c < cols; ++c) {
    cxd d = r(c, c);
    double mag = std::abs(d);
    q.col(c) *= (mag > 0) ? (d / mag) : cxd(1.0, 0.0);
  }
  return q;
}

}  // namespace

CMat random_unitary(int d, SplitStream& g) { return haar_columns(d, d, g); }

CMat random_hermitian(int d, SplitStream& g) {
  CMat a = gaussian_matrix(d, d, g);
  return 0.5 * (a + a.adjoint().eval());
}

PureState random_pure(const SystemLayout& layout, SplitStream& g) {
  CVec v(layout.total_dim());
  for (long i = 0; i < v.size(); ++i) v(i) = g.next_complex_gaussian();
  v /= v.norm();
  return PureState(layout, std::move(v));
}

PureState random_pure(const SystemLayout& layout, uint64_t seed) {
  SplitStream g(seed);
  return random_pure(layout, g);
}

State random_state(const SystemLayout& layout, int rank, SplitStream& g, double subnorm_min) {
  if (rank < 1) throw ContractError("random_state: rank must be >= 1");
  if (!(subnorm_min > 0.0 && subnorm_min <= 1.0))
    throw ContractError("random_state: subnorm_min must lie in (0, 1]");
  SystemLayout joint = layout.tensor(SystemLayout({Factor{"__anc", rank}}));
  PureState psi = random_pure(joint, g);
  CMat reduced = partial_trace(psi.to_state().matrix(), joint, {"__anc"});
  double scale = 1.0;
  if (subnorm_min < 1.0) scale = 1.0 - g.next_double() * (1.0 - subnorm_min);
  return State(layout, scale * reduced);
}

State random_state(const SystemLayout& layout, int rank, uint64_t seed, double subnorm_min) {
  SplitStream g(seed);
  return random_state(layout, rank, g, subnorm_min);
}

Isometry random_isometry(int n, int m, SplitStream& g) {
  if (m < n) throw ContractError("random_isometry: target dim must be >= source dim");
  CMat v = haar_columns(m, n, g);
  return Isometry(std::move(v), SystemLayout({Factor{"in", n}}), SystemLayout({Factor{"out", m}}));
}

Isometry random_isometry(int n, int m, uint64_t seed) {
  SplitStream g(seed);
  return random_isometry(n, m, g);
}

Channel random_channel(const SystemLayout& in, const SystemLayout& out, int env_dim,
                       SplitStream& g, bool trace_preserving) {
  if (env_dim < 1) throw ContractError("random_channel: env_dim must be >= 1");
  const int din = in.total_dim(), dout = out.total_dim();
  if (dout * env_dim < din)
    throw ContractError("random_channel: output*env dimension too small for an isometry");
  CMat v = haar_columns(dout * env_dim, din, g);  // rows indexed by (out, env)
  CMat proj;
  if (!trace_preserving) {
    int r = g.next_int(1, dout);
    CMat cols = haar_columns(dout, r, g);
    proj = cols * cols.adjoint();
  }
  std::vector<CMat> kraus;
  kraus.reserve(env_dim);
  for (int e = 0; e < env_dim; ++e) {
    CMat k(dout, din);
    for (int i = 0; i < dout; ++i) k.row(i) = v.row(static_cast<long>(i) * env_dim + e);
    if (!trace_preserving) k = proj * k;
    kraus.push_back(std::move(k));
  }
  return Channel(in, out, std::move(kraus), trace_preserving);
}

Channel random_channel(const SystemLayout& in, const SystemLayout& out, int env_dim,
                       uint64_t seed, bool trace_preserving) {
  SplitStream g(seed);
  return random_channel(in, out, env_dim, g, trace_preserving);
}

}  // namespace qse
