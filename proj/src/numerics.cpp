#include "aircomp/numerics.hpp"

#include <cmath>
#include <numbers>

#include "aircomp/error.hpp"

namespace aircomp {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = a;
  std::uint64_t h = splitmix64(s);
  s = h ^ (b + 0x632be59bd9b4e019ULL);
  return splitmix64(s);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

CVec hermitian_solve(const CMat& a, const CVec& b) {
  if (a.rows() != a.cols() || a.rows() != b.size() || a.rows() == 0) {
    throw InvalidInputError("hermitian_solve: dimension mismatch");
  }
  if (!a.allFinite() || !b.allFinite()) {
    throw InvalidInputError("hermitian_solve: non-finite input");
  }
  const double scale = a.norm();
  if ((a - a.adjoint()).norm() > 1e-12 * scale) {
    throw InvalidInputError("hermitian_solve: matrix is not Hermitian");
  }
  Eigen::LLT<CMat> llt(a);
  if (llt.info() != Eigen::Success) {
    throw SingularMatrixError("hermitian_solve: Cholesky factorization failed");
  }
  CVec x = llt.solve(b);
  if (!x.allFinite()) {
    throw SingularMatrixError("hermitian_solve: non-finite solution");
  }
  return x;
}

RandomStream::RandomStream(std::uint64_t key) : key_(key) {
  std::uint64_t state = key;
  for (auto& word : s_) word = splitmix64(state);
}

std::uint64_t RandomStream::next_u64() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double RandomStream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform();
}

double RandomStream::standard_normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // 1 - U lies in (0, 1], so the log is finite.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

RandomStream RandomStream::substream(std::uint64_t id) const {
  return RandomStream(mix(key_, id));
}

RandomStream derive_trial_stream(const SeedSpec& spec) {
  return RandomStream(mix(spec.master_seed, spec.trial_index));
}

cd sample_complex_gaussian(RandomStream& stream, double variance) {
  if (!(variance > 0.0) || !std::isfinite(variance)) {
    throw InvalidInputError("sample_complex_gaussian: variance must be positive");
  }
  const double sd = std::sqrt(variance / 2.0);
  const double re = stream.standard_normal();
  const double im = stream.standard_normal();
  return {sd * re, sd * im};
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

}  // namespace aircomp
