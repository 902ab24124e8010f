#ifndef OPM_KERNELS_HPP
#define OPM_KERNELS_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace opm::kernels {

// Structure-of-arrays point set. Lane d holds coordinate d of every point,
// padded to a multiple of the SIMD width with copies of point 0 so that
// max-reductions over the padded tail are no-ops.
class PointBlock {
public:
    PointBlock() = default;
    PointBlock(std::size_t dim, std::size_t count);

    void set(std::size_t point, std::size_t d, double value);
    double get(std::size_t point, std::size_t d) const;
    void finalize();  // fills the padded tail; call once after all set()

    std::size_t dim() const { return dim_; }
    std::size_t count() const { return count_; }
    std::size_t padded() const { return padded_; }
    const double* lane(std::size_t d) const { return lanes_.data() + d * padded_; }

    static constexpr std::size_t width = 4;  // doubles per vector lane

private:
    std::size_t dim_ = 0;
    std::size_t count_ = 0;
    std::size_t padded_ = 0;
    std::vector<double> lanes_;
};

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
double max_dot(const PointBlock& pts, const double* dir);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define OPM_HAVE_AVX2_KERNELS 1
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
double max_dot(const PointBlock& pts, const double* dir);
}  // namespace avx2
#endif

// Runtime-dispatched entry points. The backend is picked once per process:
// AVX2+FMA when the CPU supports it, scalar otherwise. ORLICZ_POLAR_KERNEL
// (values "scalar" or "avx2") overrides the choice.
double dot(const double* a, const double* b, std::size_t n);
inline double dot(std::span<const double> a, std::span<const double> b) {
    return dot(a.data(), b.data(), a.size());
}

// max over points p of <p, dir>; dir has pts.dim() entries.
double max_dot(const PointBlock& pts, const double* dir);

const std::string& active_backend();
bool avx2_available();

}  // namespace opm::kernels

#endif
