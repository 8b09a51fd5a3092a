#include "onofri/dpp.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "onofri/gram.hpp"
#include "onofri/rng.hpp"

namespace onofri {

namespace {

bool simple_configuration(const std::vector<SpherePoint>& pts) {
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            if (chordal_sq(pts[i], pts[j]) < 1e-28) return false;
        }
    }
    return true;
}

}  // namespace

PointConfiguration sample_random_matrix(int n_particles, std::uint64_t seed) {
    if (n_particles < 1) throw std::invalid_argument("sample_random_matrix: N must be >= 1");
    const int n = n_particles;
    std::uint64_t attempt_seed = seed;
    for (int attempt = 0; attempt < 64; ++attempt) {
        Rng rng(attempt_seed);
        Eigen::MatrixXcd g1(n, n), g2(n, n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) g1(i, j) = rng.complex_normal();
        }
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) g2(i, j) = rng.complex_normal();
        }
        const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(g2);
        // det(G1 - z G2) = 0 <=> z is an eigenvalue of G2^{-1} G1.
        const double abs_det = std::abs(lu.determinant());
        if (!(abs_det > 1e-280)) {
            std::cerr << "sample_random_matrix: singular G2 at seed " << attempt_seed
                      << ", resampling\n";
            attempt_seed = Rng::sub_seed(attempt_seed, 0xdead);
            continue;
        }
        const Eigen::MatrixXcd a = lu.solve(g1);
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(a, /*computeEigenvectors=*/false);
        if (es.info() != Eigen::Success) {
            attempt_seed = Rng::sub_seed(attempt_seed, 0xbeef);
            continue;
        }
        PointConfiguration cfg;
        cfg.seed = seed;
        cfg.sampler = "random-matrix";
        cfg.points.reserve(n);
        for (int i = 0; i < n; ++i) cfg.points.push_back(stereo_lift(es.eigenvalues()(i)));
        if (!simple_configuration(cfg.points)) {
            attempt_seed = Rng::sub_seed(attempt_seed, 0xfeed);
            continue;
        }
        return cfg;
    }
    throw std::runtime_error("sample_random_matrix: repeated degenerate draws (rng defect?)");
}

PointConfiguration sample_kernel_projection(int n_particles, std::uint64_t seed) {
    if (n_particles < 1) throw std::invalid_argument("sample_kernel_projection: N must be >= 1");
    const int n = n_particles;
    const int m = n - 1;
    const TestFunction zero = make_constant(0.0);
    Rng rng(seed);

    std::vector<Eigen::VectorXcd> ortho;  // orthonormalized accepted feature vectors
    PointConfiguration cfg;
    cfg.seed = seed;
    cfg.sampler = "kernel-projection";
    cfg.points.reserve(n);

    long iterations = 0;
    while (cfg.size() < n) {
        if (++iterations > 1000000) {
            throw std::runtime_error("sample_kernel_projection: rejection loop exceeded 1e6 iterations");
        }
        // Proposal: omega_0, i.e. sigma uniform on (0,1), theta uniform.
        const double sigma = rng.uniform();
        const double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
        const double r = std::sqrt(sigma / (1.0 - sigma));
        const complexd z(r * std::cos(theta), r * std::sin(theta));

        Eigen::VectorXcd phi = weighted_basis(m, zero, z);  // |phi|^2 = K(z,z) = N
        for (const auto& e : ortho) phi -= (e.dot(phi)) * e;
        const double rem = phi.squaredNorm();
        if (rng.uniform() <= rem / n) {
            for (const auto& e : ortho) phi -= (e.dot(phi)) * e;  // re-orthogonalize
            const double nrm = phi.norm();
            if (nrm < 1e-12) continue;
            ortho.push_back(phi / nrm);
            cfg.points.push_back(stereo_lift(z));
        }
    }
    return cfg;
}

DensityLog density_log_unnormalized(const std::vector<SpherePoint>& points) {
    DensityLog out;
    double acc = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            const double d2 = chordal_sq(points[i], points[j]);
            if (d2 <= 0.0) {
                out.finite = false;
                out.value = -std::numeric_limits<double>::infinity();
                return out;
            }
            acc += std::log(d2);
        }
    }
    out.value = acc;
    return out;
}

double partition_constant(int n_particles) {
    if (n_particles < 1) throw std::invalid_argument("partition_constant: N must be >= 1");
    const int n = n_particles;
    double log_inv_z = n * std::log(static_cast<double>(n)) - std::lgamma(n + 1.0);
    for (int i = 0; i < n; ++i) log_inv_z += log_binomial(n - 1, i);
    return -log_inv_z;
}

namespace {

McEstimate estimate(const std::vector<double>& samples) {
    McEstimate e;
    e.n_samples = static_cast<int>(samples.size());
    e.mean = pairwise_sum(samples) / e.n_samples;
    std::vector<double> sq(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double d = samples[i] - e.mean;
        sq[i] = d * d;
    }
    const double var = pairwise_sum(sq) / std::max(1, e.n_samples - 1);
    e.std_error = std::sqrt(var / e.n_samples);
    return e;
}

}  // namespace

LinearStatisticMc mc_linear_statistic(const TestFunction& u, int n_particles, int n_samples,
                                      std::uint64_t seed, double t, const QuadratureRule& rule) {
    if (n_samples < 100) throw std::invalid_argument("mc_linear_statistic: need at least 100 samples");
    const double u_mean = mean_value(u, rule);

    std::vector<double> stat(n_samples), mgf(n_samples);
    for (int k = 0; k < n_samples; ++k) {
        const PointConfiguration cfg = sample_random_matrix(n_particles, Rng::sub_seed(seed, k));
        double s = 0.0;
        for (const auto& p : cfg.points) s += u.value(stereo_project(p).value);
        stat[k] = s;
        mgf[k] = std::exp(-t * (s - n_particles * u_mean));
    }

    LinearStatisticMc out;
    out.t = t;
    out.mean = estimate(stat);

    // Plug-in variance of the statistic with a moment-based std error.
    const double mean = out.mean.mean;
    std::vector<double> centered_sq(stat.size());
    for (std::size_t i = 0; i < stat.size(); ++i) {
        const double d = stat[i] - mean;
        centered_sq[i] = d * d;
    }
    out.variance = estimate(centered_sq);
    out.mgf = estimate(mgf);
    return out;
}

ChernoffResult chernoff_experiment(const TestFunction& u, int n_particles, double lambda,
                                   int n_samples, std::uint64_t seed, const QuadratureRule& rule) {
    if (!(lambda > 0.0)) throw std::invalid_argument("chernoff_experiment: lambda must be positive");
    const double u_mean = mean_value(u, rule);
    if (std::abs(u_mean) > 1e-9) throw std::invalid_argument("chernoff_experiment: center u first");
    const double d = dirichlet_energy(u, rule);

    long hits = 0;
    for (int k = 0; k < n_samples; ++k) {
        const PointConfiguration cfg = sample_random_matrix(n_particles, Rng::sub_seed(seed, k));
        double s = 0.0;
        for (const auto& p : cfg.points) s += u.value(stereo_project(p).value);
        if (s / n_particles > lambda) ++hits;
    }

    ChernoffResult res;
    res.n_samples = n_samples;
    res.empirical_tail = static_cast<double>(hits) / n_samples;
    res.tail_std_error =
        std::sqrt(std::max(res.empirical_tail * (1.0 - res.empirical_tail), 1.0 / n_samples) / n_samples);
    const double nn = n_particles;
    res.bound = std::exp(-nn * nn * lambda * lambda * (nn + 1.0) / (2.0 * nn * d));
    return res;
}

std::string samples_to_csv(const std::vector<PointConfiguration>& samples) {
    std::ostringstream os;
    os.precision(17);
    os << "sample_id,point_id,x,y,z\n";
    for (std::size_t k = 0; k < samples.size(); ++k) {
        for (int i = 0; i < samples[k].size(); ++i) {
            const SpherePoint& p = samples[k].points[i];
            os << k << ',' << i << ',' << p.x << ',' << p.y << ',' << p.z << '\n';
        }
    }
    return os.str();
}

}  // namespace onofri
