#include "opm/kernels.hpp"

#include <cstdlib>
#include <limits>
#include <stdexcept>

namespace opm::kernels {

PointBlock::PointBlock(std::size_t dim, std::size_t count)
    : dim_(dim), count_(count), padded_((count + width - 1) / width * width) {
    if (dim == 0) throw std::invalid_argument("PointBlock: dim must be positive");
    lanes_.assign(dim_ * padded_, 0.0);
}

void PointBlock::set(std::size_t point, std::size_t d, double value) {
    lanes_[d * padded_ + point] = value;
}

double PointBlock::get(std::size_t point, std::size_t d) const {
    return lanes_[d * padded_ + point];
}

void PointBlock::finalize() {
    if (count_ == 0) return;
    for (std::size_t d = 0; d < dim_; ++d)
        for (std::size_t j = count_; j < padded_; ++j)
            lanes_[d * padded_ + j] = lanes_[d * padded_];
}

namespace scalar {

double dot(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

double max_dot(const PointBlock& pts, const double* dir) {
    const std::size_t dim = pts.dim();
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < pts.count(); ++j) {
        double s = 0.0;
        for (std::size_t d = 0; d < dim; ++d) s += dir[d] * pts.lane(d)[j];
        if (s > best) best = s;
    }
    return best;
}

}  // namespace scalar

namespace {

enum class Backend { Scalar, Avx2 };

bool cpu_has_avx2() {
#if defined(OPM_HAVE_AVX2_KERNELS) && defined(__GNUC__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Backend pick_backend() {
    if (const char* env = std::getenv("ORLICZ_POLAR_KERNEL")) {
        std::string v(env);
        if (v == "scalar") return Backend::Scalar;
        if (v == "avx2" && cpu_has_avx2()) return Backend::Avx2;
    }
    return cpu_has_avx2() ? Backend::Avx2 : Backend::Scalar;
}

Backend g_backend = pick_backend();

}  // namespace

bool avx2_available() { return cpu_has_avx2(); }

const std::string& active_backend() {
    static const std::string name = (g_backend == Backend::Avx2) ? "avx2" : "scalar";
    return name;
}

double dot(const double* a, const double* b, std::size_t n) {
#ifdef OPM_HAVE_AVX2_KERNELS
    if (g_backend == Backend::Avx2) return avx2::dot(a, b, n);
#endif
    return scalar::dot(a, b, n);
}

double max_dot(const PointBlock& pts, const double* dir) {
#ifdef OPM_HAVE_AVX2_KERNELS
    if (g_backend == Backend::Avx2) return avx2::max_dot(pts, dir);
#endif
    return scalar::max_dot(pts, dir);
}

}  // namespace opm::kernels
