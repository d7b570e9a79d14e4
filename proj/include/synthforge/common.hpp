#ifndef SYNTHFORGE_COMMON_HPP
#define SYNTHFORGE_COMMON_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace synthforge {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr const char* kToolVersion = "0.1.0";

// Deterministic seed derivation: every pipeline stage draws from its own
// stream so that adding a stage never perturbs the others.
std::uint64_t deriveSeed(std::uint64_t seed, std::uint64_t tag);

namespace seedtag {
inline constexpr std::uint64_t stage1 = 1;
inline constexpr std::uint64_t cvFolds = 2;
inline constexpr std::uint64_t scenarioTrain = 3;
inline constexpr std::uint64_t scenarioTest = 4;
inline constexpr std::uint64_t scenarioPublic = 5;
inline constexpr std::uint64_t nwBandwidth = 6;
}  // namespace seedtag

// mt19937_64 with hand-rolled draw helpers. The standard distributions are
// implementation-defined bit-for-bit, so everything downstream of a seed goes
// through these to keep outputs identical across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // strictly inside (0,1)
  double uniform01() {
    return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  std::uint64_t below(std::uint64_t n);  // unbiased integer in [0, n)

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[below(i)]);
    }
  }

  double normal01();  // inverse-CDF draw

 private:
  std::mt19937_64 gen_;
};

// Runs fn(i) for i in [0, count). Each index owns its output slot, so results
// do not depend on the thread count.
void parallelFor(Index count, int threads, const std::function<void(Index)>& fn);

int defaultThreadCount();

}  // namespace synthforge

#endif
