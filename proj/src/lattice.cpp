#include "onofri/lattice.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace onofri {

std::string LatticeCount::csv_header() {
    return "m,u_label,count,h0,log_ball_volume,minkowski_bound,slack";
}

std::string LatticeCount::csv_row() const {
    std::ostringstream os;
    os.precision(17);
    os << m << ",\"" << u_label << "\"," << count << ',' << h0 << ',' << log_ball_volume << ','
       << minkowski_bound << ',' << (h0 - minkowski_bound);
    return os.str();
}

Eigen::MatrixXcd unnormalized_gram(int m, const TestFunction& u, const QuadratureRule& rule) {
    const GramMatrix gram = assemble_gram(m, u, rule);
    Eigen::MatrixXcd g = gram.mat;
    for (int i = 0; i <= m; ++i) {
        const double ci = std::exp(0.5 * (std::log(m + 1.0) + log_binomial(m, i)));
        for (int j = 0; j <= m; ++j) {
            const double cj = std::exp(0.5 * (std::log(m + 1.0) + log_binomial(m, j)));
            g(i, j) /= ci * cj;
        }
    }
    return g;
}

namespace {

Eigen::MatrixXd real_embedding(const Eigen::MatrixXcd& g) {
    const int n = static_cast<int>(g.rows());
    Eigen::MatrixXd q(2 * n, 2 * n);
    q.topLeftCorner(n, n) = g.real();
    q.bottomRightCorner(n, n) = g.real();
    q.topRightCorner(n, n) = -g.imag();
    q.bottomLeftCorner(n, n) = g.imag();
    return q;
}

std::int64_t enumerate_level(const Eigen::MatrixXd& r, int level, double remaining,
                             const Eigen::VectorXd& offsets) {
    // r upper triangular; offsets(i) = sum_{j>i} r(i,j) x_j for the fixed tail.
    if (remaining < 0.0) return 0;
    const double rii = r(level, level);
    const double center = -offsets(level) / rii;
    const double half_width = std::sqrt(remaining) / rii;
    const long lo = static_cast<long>(std::ceil(center - half_width - 1e-12));
    const long hi = static_cast<long>(std::floor(center + half_width + 1e-12));
    std::int64_t count = 0;
    for (long x = lo; x <= hi; ++x) {
        const double term = rii * x + offsets(level);
        const double rem2 = remaining - term * term;
        if (rem2 < -1e-12) continue;
        if (level == 0) {
            ++count;
        } else {
            Eigen::VectorXd next = offsets;
            for (int i = 0; i < level; ++i) next(i) += r(i, level) * x;
            count += enumerate_level(r, level - 1, std::max(rem2, 0.0), next);
        }
    }
    return count;
}

}  // namespace

std::int64_t count_lattice_points(const Eigen::MatrixXcd& gram_unnormalized) {
    const Eigen::MatrixXd q = real_embedding(gram_unnormalized);
    const Eigen::LLT<Eigen::MatrixXd> llt(q);
    if (llt.info() != Eigen::Success) {
        throw std::runtime_error("count_lattice_points: form not positive definite");
    }
    const Eigen::MatrixXd r = Eigen::MatrixXd(llt.matrixL()).transpose();
    const int dim = static_cast<int>(q.rows());
    return enumerate_level(r, dim - 1, 1.0, Eigen::VectorXd::Zero(dim));
}

std::int64_t count_lattice_points_bruteforce(const Eigen::MatrixXcd& gram_unnormalized,
                                             double margin) {
    const Eigen::MatrixXd q = real_embedding(gram_unnormalized);
    const int dim = static_cast<int>(q.rows());
    const Eigen::MatrixXd qinv = q.inverse();
    std::vector<long> box(dim);
    for (int i = 0; i < dim; ++i) {
        box[i] = static_cast<long>(std::floor(margin * std::sqrt(qinv(i, i)) + 1.0));
    }
    std::vector<long> x(dim, 0);
    for (int i = 0; i < dim; ++i) x[i] = -box[i];
    std::int64_t count = 0;
    while (true) {
        Eigen::VectorXd v(dim);
        for (int i = 0; i < dim; ++i) v(i) = static_cast<double>(x[i]);
        if (v.dot(q * v) <= 1.0 + 1e-12) ++count;
        int i = 0;
        while (i < dim && ++x[i] > box[i]) {
            x[i] = -box[i];
            ++i;
        }
        if (i == dim) break;
    }
    return count;
}

LatticeCount count_lattice_points(int m, const TestFunction& u, const QuadratureRule& rule) {
    if (m > 4) throw std::invalid_argument("count_lattice_points: enumeration dimension cap exceeded");
    LatticeCount lc;
    lc.m = m;
    lc.u_label = u.label;
    lc.count = count_lattice_points(unnormalized_gram(m, u, rule));
    lc.h0 = std::log(static_cast<double>(lc.count));
    return lc;
}

LatticeCount minkowski_check(int m, const TestFunction& u, const QuadratureRule& rule) {
    LatticeCount lc = count_lattice_points(m, u, rule);
    const int n = m + 1;
    const Eigen::MatrixXcd g = unnormalized_gram(m, u, rule);
    const Eigen::LLT<Eigen::MatrixXcd> llt(g);
    double logdet_g = 0.0;
    for (int i = 0; i < n; ++i) logdet_g += 2.0 * std::log(Eigen::MatrixXcd(llt.matrixL())(i, i).real());
    const double log_v2n = n * std::log(std::numbers::pi) - std::lgamma(n + 1.0);
    lc.log_ball_volume = log_v2n - logdet_g;  // Vol{a : a* G a <= 1} = V_{2N} / det G
    lc.minkowski_bound = lc.log_ball_volume - 2.0 * n * std::log(2.0);
    if (lc.h0 < lc.minkowski_bound - 1e-9) {
        throw std::runtime_error("minkowski_check: lattice count violates the Minkowski bound");
    }
    return lc;
}

double volume_identity_check(int m, const TestFunction& u, const QuadratureRule& rule) {
    const double l = logdet_L(m, u, rule);
    auto logdet_raw = [&](const TestFunction& f) {
        const Eigen::MatrixXcd g = unnormalized_gram(m, f, rule);
        const Eigen::LLT<Eigen::MatrixXcd> llt(g);
        double acc = 0.0;
        for (int i = 0; i <= m; ++i) acc += 2.0 * std::log(Eigen::MatrixXcd(llt.matrixL())(i, i).real());
        return acc;
    };
    // log Vol B(u) - log Vol B(0) = -log det G(u) + log det G(0)
    const double vol_ratio = -logdet_raw(u) + logdet_raw(make_constant(0.0));
    return l - vol_ratio;
}

}  // namespace onofri
