#include "opm/sphere.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

#include "opm/errors.hpp"

namespace opm {

double dot(const Vec& a, const Vec& b) {
    return kernels::dot(a.data(), b.data(), a.size());
}

double norm(const Vec& v) { return std::sqrt(dot(v, v)); }

Vec scaled(const Vec& v, double s) {
    Vec out(v);
    for (double& x : out) x *= s;
    return out;
}

Vec normalized(const Vec& v) {
    double n = norm(v);
    if (!(n > 0.0)) throw NumericError("cannot normalize a zero vector");
    return scaled(v, 1.0 / n);
}

UnitVector::UnitVector(Vec coords) : coords_(std::move(coords)) {
    if (coords_.size() < 2) throw SchemaError("UnitVector: dimension must be >= 2");
    double n = norm(coords_);
    if (std::abs(n - 1.0) > 1e-12) {
        std::ostringstream os;
        os << "UnitVector: norm " << n << " deviates from 1 by more than 1e-12";
        throw SchemaError(os.str());
    }
}

UnitVector UnitVector::axis(std::size_t n, std::size_t k, double sign) {
    Vec v(n, 0.0);
    v[k] = sign;
    return UnitVector(std::move(v));
}

UnitVector UnitVector::normalize(Vec v) { return UnitVector(normalized(v)); }

double dot(const UnitVector& a, const UnitVector& b) { return dot(a.coords(), b.coords()); }
double dot(const UnitVector& a, const Vec& b) { return dot(a.coords(), b); }

Rotation::Rotation(std::size_t n, std::vector<double> row_major)
    : n_(n), m_(std::move(row_major)) {
    if (m_.size() != n_ * n_) throw SchemaError("Rotation: matrix size mismatch");
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = 0; j < n_; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < n_; ++k) s += entry(i, k) * entry(j, k);
            double target = (i == j) ? 1.0 : 0.0;
            if (std::abs(s - target) > 1e-10)
                throw SchemaError("Rotation: T T^t deviates from identity beyond 1e-10");
        }
    }
}

Rotation Rotation::identity(std::size_t n) {
    std::vector<double> m(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) m[i * n + i] = 1.0;
    return Rotation(n, std::move(m));
}

Vec Rotation::apply(const Vec& v) const {
    Vec out(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) out[i] += entry(i, j) * v[j];
    return out;
}

Vec Rotation::apply_transpose(const Vec& v) const {
    Vec out(n_, 0.0);
    for (std::size_t j = 0; j < n_; ++j)
        for (std::size_t i = 0; i < n_; ++i) out[j] += entry(i, j) * v[i];
    return out;
}

UnitVector Rotation::apply(const UnitVector& u) const {
    return UnitVector::normalize(apply(u.coords()));
}

UnitVector Rotation::apply_transpose(const UnitVector& u) const {
    return UnitVector::normalize(apply_transpose(u.coords()));
}

namespace {

// Completes v (assumed unit) to an orthonormal basis with v as first column;
// returns the basis as columns of a row-major matrix.
std::vector<double> complete_basis(const Vec& v) {
    std::size_t n = v.size();
    std::vector<Vec> cols;
    cols.push_back(v);
    for (std::size_t k = 0; k < n && cols.size() < n; ++k) {
        Vec e(n, 0.0);
        e[k] = 1.0;
        for (const Vec& c : cols) {
            double p = dot(e, c);
            for (std::size_t i = 0; i < n; ++i) e[i] -= p * c[i];
        }
        double len = norm(e);
        if (len > 1e-8) cols.push_back(scaled(e, 1.0 / len));
    }
    if (cols.size() != n) throw NumericError("basis completion failed");
    std::vector<double> m(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m[i * n + j] = cols[j][i];
    return m;
}

}  // namespace

Rotation rotation_sending(const UnitVector& a, const UnitVector& b) {
    if (a.dim() != b.dim()) throw SchemaError("rotation_sending: dimension mismatch");
    std::size_t n = a.dim();
    std::vector<double> A = complete_basis(a.coords());
    std::vector<double> B = complete_basis(b.coords());
    // T = A B^t maps b -> a, so T^t a = b.
    std::vector<double> m(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k) s += A[i * n + k] * B[j * n + k];
            m[i * n + j] = s;
        }
    return Rotation(n, std::move(m));
}

QuadratureRule::QuadratureRule(std::size_t dimension, std::vector<UnitVector> nodes,
                               std::vector<double> weights)
    : dim_(dimension), nodes_(std::move(nodes)), weights_(std::move(weights)) {
    if (nodes_.size() != weights_.size() || nodes_.empty())
        throw SchemaError("QuadratureRule: nodes/weights mismatch");
    for (double w : weights_) {
        if (!(w > 0.0)) throw SchemaError("QuadratureRule: weights must be positive");
        weight_sum_ += w;
    }
    double area = sphere_surface_area(dim_);
    if (std::abs(weight_sum_ - area) > 1e-6 * area)
        throw SchemaError("QuadratureRule: weight sum misses the sphere surface area");
    block_ = kernels::PointBlock(dim_, nodes_.size());
    for (std::size_t j = 0; j < nodes_.size(); ++j)
        for (std::size_t d = 0; d < dim_; ++d) block_.set(j, d, nodes_[j][d]);
    block_.finalize();
}

double sphere_surface_area(std::size_t n) {
    return 2.0 * std::pow(std::numbers::pi, 0.5 * double(n)) / std::tgamma(0.5 * double(n));
}

double unit_ball_volume(std::size_t n) { return sphere_surface_area(n) / double(n); }

void gauss_legendre(std::size_t k, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.assign(k, 0.0);
    weights.assign(k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
        // Chebyshev-based initial guess, then Newton on P_k.
        double x = std::cos(std::numbers::pi * (double(i) + 0.75) / (double(k) + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (std::size_t j = 2; j <= k; ++j) {
                double p2 = ((2.0 * double(j) - 1.0) * x * p1 - (double(j) - 1.0) * p0) / double(j);
                p0 = p1;
                p1 = p2;
            }
            dp = double(k) * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
}

namespace {

// GL panel on [a, b], returning k nodes/weights.
void gl_panel(double a, double b, std::size_t k, std::vector<double>& x, std::vector<double>& w) {
    std::vector<double> n0, w0;
    gauss_legendre(k, n0, w0);
    x.resize(k);
    w.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
        x[i] = 0.5 * (b - a) * n0[i] + 0.5 * (a + b);
        w[i] = 0.5 * (b - a) * w0[i];
    }
}

}  // namespace

QuadratureRule product_rule(std::size_t n, std::size_t resolution) {
    if (n < 2) throw SchemaError("product_rule: dimension must be >= 2");
    if (resolution < 4) throw SchemaError("product_rule: resolution must be >= 4");
    if (n == 2) {
        std::vector<UnitVector> nodes;
        std::vector<double> weights;
        nodes.reserve(resolution);
        double w = 2.0 * std::numbers::pi / double(resolution);
        for (std::size_t k = 0; k < resolution; ++k) {
            double ang = 2.0 * std::numbers::pi * double(k) / double(resolution);
            nodes.push_back(UnitVector::normalize({std::cos(ang), std::sin(ang)}));
        }
        weights.assign(resolution, w);
        return QuadratureRule(2, std::move(nodes), std::move(weights));
    }
    QuadratureRule sub = product_rule(n - 1, resolution);
    std::size_t half = resolution / 2;
    std::vector<double> th, wth, th2, wth2;
    gl_panel(0.0, 0.5 * std::numbers::pi, half, th, wth);
    gl_panel(0.5 * std::numbers::pi, std::numbers::pi, resolution - half, th2, wth2);
    th.insert(th.end(), th2.begin(), th2.end());
    wth.insert(wth.end(), wth2.begin(), wth2.end());

    std::vector<UnitVector> nodes;
    std::vector<double> weights;
    nodes.reserve(sub.size() * th.size());
    weights.reserve(sub.size() * th.size());
    for (std::size_t t = 0; t < th.size(); ++t) {
        double st = std::sin(th[t]), ct = std::cos(th[t]);
        double wt = wth[t] * std::pow(st, double(n - 2));
        for (std::size_t j = 0; j < sub.size(); ++j) {
            Vec v(n);
            for (std::size_t d = 0; d + 1 < n; ++d) v[d] = sub.node(j)[d] * st;
            v[n - 1] = ct;
            nodes.push_back(UnitVector::normalize(std::move(v)));
            weights.push_back(sub.weight(j) * wt);
        }
    }
    return QuadratureRule(n, std::move(nodes), std::move(weights));
}

std::size_t default_resolution(std::size_t n) { return n <= 3 ? 48 : 24; }

const QuadratureRule& default_rule(std::size_t n) {
    static std::mutex mu;
    static std::map<std::size_t, QuadratureRule> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end())
        it = cache.emplace(n, product_rule(n, default_resolution(n))).first;
    return it->second;
}

double integrate(const QuadratureRule& rule, const std::function<double(const UnitVector&)>& f) {
    std::vector<double> values(rule.size());
    for (std::size_t i = 0; i < rule.size(); ++i) {
        double v = f(rule.node(i));
        if (!std::isfinite(v)) {
            std::ostringstream os;
            os << "integrate: non-finite integrand at node " << i << " = (";
            for (std::size_t d = 0; d < rule.dimension(); ++d)
                os << (d ? ", " : "") << rule.node(i)[d];
            os << ")";
            throw NumericError(os.str());
        }
        values[i] = v;
    }
    return integrate_values(rule, values);
}

double integrate_values(const QuadratureRule& rule, const std::vector<double>& values) {
    if (values.size() != rule.size())
        throw SchemaError("integrate_values: value count does not match rule");
    return kernels::dot(rule.weights().data(), values.data(), values.size());
}

}  // namespace opm
