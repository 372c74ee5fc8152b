#include "censtest/kernels.hpp"

#include <cmath>

#include "censtest/error.hpp"

namespace censtest {

double euclidean_distance(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw Error("distance: dimension mismatch");
    double ss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        ss += d * d;
    }
    return std::sqrt(ss);
}

double eval_distance(std::span<const double> x, std::span<const double> y, double alpha) {
    if (!(alpha > 0.0 && alpha <= 2.0)) throw Error("alpha must lie in (0, 2]");
    const double d = euclidean_distance(x, y);
    if (alpha == 1.0) return d;
    if (alpha == 2.0) return d * d;
    return std::pow(d, alpha);
}

void validate_kernel(const KernelSpec& k) {
    std::visit(
        [](const auto& kk) {
            using T = std::decay_t<decltype(kk)>;
            if constexpr (std::is_same_v<T, GaussianKernel> ||
                          std::is_same_v<T, LaplacianKernel>) {
                if (kk.sigma && !(*kk.sigma > 0.0)) throw Error("sigma must be positive");
            } else if constexpr (std::is_same_v<T, RationalQuadraticKernel>) {
                if (!(kk.c > 0.0)) throw Error("rational quadratic: c must be positive");
                if (!(kk.beta > 0.0)) throw Error("rational quadratic: beta must be positive");
            } else if constexpr (std::is_same_v<T, MaternKernel>) {
                if (kk.nu != 0.5 && kk.nu != 1.5 && kk.nu != 2.5)
                    throw Error("matern: nu must be one of 1/2, 3/2, 5/2");
                if (kk.sigma && !(*kk.sigma > 0.0)) throw Error("sigma must be positive");
            } else if constexpr (std::is_same_v<T, DistanceInducedKernel>) {
                if (!(kk.alpha > 0.0 && kk.alpha <= 2.0)) throw Error("alpha must lie in (0, 2]");
                if (!std::isfinite(kk.origin)) throw Error("origin must be finite");
            }
        },
        k);
}

bool kernel_needs_sigma(const KernelSpec& k) {
    return std::visit(
        [](const auto& kk) {
            using T = std::decay_t<decltype(kk)>;
            if constexpr (std::is_same_v<T, GaussianKernel> ||
                          std::is_same_v<T, LaplacianKernel> ||
                          std::is_same_v<T, MaternKernel>) {
                return !kk.sigma.has_value();
            } else {
                return false;
            }
        },
        k);
}

KernelSpec resolve_kernel(const KernelSpec& k, double sigma) {
    KernelSpec out = k;
    std::visit(
        [&](auto& kk) {
            using T = std::decay_t<decltype(kk)>;
            if constexpr (std::is_same_v<T, GaussianKernel> ||
                          std::is_same_v<T, LaplacianKernel> ||
                          std::is_same_v<T, MaternKernel>) {
                if (!kk.sigma) kk.sigma = sigma;
            }
        },
        out);
    return out;
}

std::optional<double> kernel_sigma(const KernelSpec& k) {
    return std::visit(
        [](const auto& kk) -> std::optional<double> {
            using T = std::decay_t<decltype(kk)>;
            if constexpr (std::is_same_v<T, GaussianKernel> ||
                          std::is_same_v<T, LaplacianKernel> ||
                          std::is_same_v<T, MaternKernel>) {
                return kk.sigma;
            } else {
                return std::nullopt;
            }
        },
        k);
}

namespace {
double require_sigma(const std::optional<double>& sigma) {
    if (!sigma) throw Error("kernel sigma unresolved: set it or use the median heuristic");
    if (!(*sigma > 0.0)) throw Error("sigma must be positive");
    return *sigma;
}
}  // namespace

double eval_kernel(const KernelSpec& k, std::span<const double> x, std::span<const double> y) {
    const double d = euclidean_distance(x, y);
    return std::visit(
        [&](const auto& kk) -> double {
            using T = std::decay_t<decltype(kk)>;
            if constexpr (std::is_same_v<T, GaussianKernel>) {
                const double r = d / require_sigma(kk.sigma);
                return std::exp(-r * r);
            } else if constexpr (std::is_same_v<T, LaplacianKernel>) {
                return std::exp(-d / require_sigma(kk.sigma));
            } else if constexpr (std::is_same_v<T, RationalQuadraticKernel>) {
                return std::pow(d + kk.c, -kk.beta);
            } else if constexpr (std::is_same_v<T, MaternKernel>) {
                const double r = d / require_sigma(kk.sigma);
                if (kk.nu == 0.5) return std::exp(-r);
                if (kk.nu == 1.5) {
                    const double z = std::sqrt(3.0) * r;
                    return (1.0 + z) * std::exp(-z);
                }
                const double z = std::sqrt(5.0) * r;
                return (1.0 + z + z * z / 3.0) * std::exp(-z);
            } else {
                static_assert(std::is_same_v<T, DistanceInducedKernel>);
                double so = 0.0, to = 0.0;
                for (double v : x) {
                    const double dd = v - kk.origin;
                    so += dd * dd;
                }
                for (double v : y) {
                    const double dd = v - kk.origin;
                    to += dd * dd;
                }
                auto pw = [&](double dist) {
                    if (kk.alpha == 1.0) return dist;
                    if (kk.alpha == 2.0) return dist * dist;
                    return std::pow(dist, kk.alpha);
                };
                return pw(std::sqrt(so)) + pw(std::sqrt(to)) - pw(d);
            }
        },
        k);
}

}  // namespace censtest
