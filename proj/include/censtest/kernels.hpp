#pragma once

#include <optional>
#include <span>
#include <variant>

namespace censtest {

// ||x - y||^alpha with alpha in (0, 2].
double eval_distance(std::span<const double> x, std::span<const double> y, double alpha);
double euclidean_distance(std::span<const double> x, std::span<const double> y);

// Kernels are parameterized by a length scale sigma where applicable; an
// unset sigma means "resolve from data via the median heuristic" and must be
// filled in (resolve_kernel) before evaluation.
struct GaussianKernel {
    std::optional<double> sigma;
};

struct LaplacianKernel {
    std::optional<double> sigma;
};

struct RationalQuadraticKernel {
    double c = 1.0;
    double beta = 1.0;
};

// nu restricted to 1/2, 3/2, 5/2 where the Matern form is elementary.
struct MaternKernel {
    double nu = 1.5;
    std::optional<double> sigma;
};

// k(x, y) = ||x - o||^alpha + ||y - o||^alpha - ||x - y||^alpha. With this
// kernel the MMD coincides with the energy distance of the same alpha, for
// any finite origin o (broadcast across coordinates).
struct DistanceInducedKernel {
    double alpha = 1.0;
    double origin = 0.0;
};

using KernelSpec = std::variant<GaussianKernel, LaplacianKernel, RationalQuadraticKernel,
                                MaternKernel, DistanceInducedKernel>;

// Throws Error on invalid parameters or an unresolved sigma.
void validate_kernel(const KernelSpec& k);
bool kernel_needs_sigma(const KernelSpec& k);

// Returns a copy with sigma filled in. No-op for kernels without sigma or
// with sigma already set.
KernelSpec resolve_kernel(const KernelSpec& k, double sigma);
std::optional<double> kernel_sigma(const KernelSpec& k);

double eval_kernel(const KernelSpec& k, std::span<const double> x, std::span<const double> y);

}  // namespace censtest
