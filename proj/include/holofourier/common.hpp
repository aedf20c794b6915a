#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace hf {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kDetTol = 1e-12;

/// Library error with an exit-code category: Input maps to CLI exit 2,
/// Numeric to exit 1.
class Error : public std::runtime_error {
public:
    enum class Kind { Input, Numeric };
    Error(Kind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

inline Error input_error(const std::string& msg) { return Error(Error::Kind::Input, msg); }
inline Error numeric_error(const std::string& msg) { return Error(Error::Kind::Numeric, msg); }

/// FNV-1a 64-bit hash, used for config hashes embedded in reports.
inline std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(std::uint64_t v);

/// Deterministic RNG. std::mt19937_64 is fully specified by the standard;
/// the value mappings below avoid std::uniform_real_distribution, whose
/// output is implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform01() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }
    double uniform(double a, double b) { return a + (b - a) * uniform01(); }
    double normal() {
        // Box-Muller; draws two uniforms per call and discards the pair state.
        double u1 = uniform01();
        double u2 = uniform01();
        if (u1 < 1e-300) u1 = 1e-300;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
    }

private:
    std::mt19937_64 eng_;
};

/// Worker cap from HOLOFOURIER_THREADS (default 1). Parallel loops partition
/// work into fixed blocks and merge per-block results in block order, so the
/// number of workers never changes any numeric output.
unsigned worker_count();

/// Runs fn(block) for block in [0, nblocks). Blocks may run on worker
/// threads; fn must only touch per-block state.
void parallel_blocks(std::size_t nblocks, const std::function<void(std::size_t)>& fn);

}  // namespace hf
