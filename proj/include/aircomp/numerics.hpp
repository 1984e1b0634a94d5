#ifndef AIRCOMP_NUMERICS_HPP_
#define AIRCOMP_NUMERICS_HPP_

#include <complex>
#include <cstdint>

#include <Eigen/Dense>

namespace aircomp {

using cd = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

// Solves A x = b for Hermitian positive definite A via Cholesky.
// Throws InvalidInputError on non-finite or non-Hermitian input and
// SingularMatrixError when the factorization fails.
CVec hermitian_solve(const CMat& a, const CVec& b);

struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t trial_index = 0;
};

// Deterministic random stream. The bit-level output is fixed by this file:
// xoshiro256** seeded through SplitMix64, uniforms from the top 53 bits,
// Gaussians by Box-Muller. Nothing depends on <random> distributions, whose
// output is implementation-defined.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t key);

  std::uint64_t next_u64();
  // Uniform on [0, 1).
  double uniform();
  // Uniform on [lo, hi).
  double uniform(double lo, double hi);
  double standard_normal();

  // An independent stream keyed by this stream's key and `id`. Does not
  // advance this stream.
  RandomStream substream(std::uint64_t id) const;

  std::uint64_t key() const { return key_; }

 private:
  std::uint64_t key_;
  std::uint64_t s_[4];
  bool has_spare_ = false;
  double spare_ = 0.0;
};

RandomStream derive_trial_stream(const SeedSpec& spec);

// Circularly symmetric complex Gaussian CN(0, variance).
cd sample_complex_gaussian(RandomStream& stream, double variance);

double db_to_linear(double db);
double dbm_to_watts(double dbm);

}  // namespace aircomp

#endif  // AIRCOMP_NUMERICS_HPP_
