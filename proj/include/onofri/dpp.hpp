#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "onofri/inequalities.hpp"
#include "onofri/sphere.hpp"

namespace onofri {

/// One sample of the N-point spherical ensemble plus the seed that made it.
struct PointConfiguration {
    std::vector<SpherePoint> points;
    std::uint64_t seed = 0;
    std::string sampler;  // "random-matrix" | "kernel-projection"

    int size() const { return static_cast<int>(points.size()); }
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    int n_samples = 0;
};

/// Generalized-eigenvalue sampler: the zeroes of det(G1 - z G2) for two iid
/// complex Ginibre matrices, lifted to the sphere. Deterministic given seed.
PointConfiguration sample_random_matrix(int n_particles, std::uint64_t seed);

/// Sequential projection-DPP sampler with the degree-(N-1) kernel and
/// rejection from omega_0 (conditional intensities are bounded by N).
PointConfiguration sample_kernel_projection(int n_particles, std::uint64_t seed);

struct DensityLog {
    double value = 0.0;
    bool finite = true;
};

/// Sum over pairs of the Green function log d(x_i,x_j)^2 (d the chordal
/// distance in the diameter-one normalization). Coincident points give the
/// -infinity flag.
DensityLog density_log_unnormalized(const std::vector<SpherePoint>& points);

/// log Z_N for the ensemble density prod d(x_i,x_j)^2 / Z_N;
/// 1/Z_N = N^N binom(N-1,0)...binom(N-1,N-1)/N!.
double partition_constant(int n_particles);

struct LinearStatisticMc {
    McEstimate mean;      // of sum u(x_i)
    McEstimate variance;  // jackknife-free plug-in with its own std error
    McEstimate mgf;       // of exp(-t sum (u(x_i) - int u))
    double t = 1.0;
};

LinearStatisticMc mc_linear_statistic(const TestFunction& u, int n_particles, int n_samples,
                                      std::uint64_t seed, double t, const QuadratureRule& rule);

struct ChernoffResult {
    double empirical_tail = 0.0;
    double tail_std_error = 0.0;
    double bound = 0.0;
    int n_samples = 0;
};

/// Tail of (1/N) sum u(x_i) > lambda against the Chernoff bound
/// exp(-N^2 lambda^2 (N+1) / (2 N D(u))); u must be centered.
ChernoffResult chernoff_experiment(const TestFunction& u, int n_particles, double lambda,
                                   int n_samples, std::uint64_t seed, const QuadratureRule& rule);

/// CSV export (sample_id, point_id, x, y, z).
std::string samples_to_csv(const std::vector<PointConfiguration>& samples);

}  // namespace onofri
