#include "onofri/gram.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace onofri {

double log_binomial(int n, int k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

Eigen::VectorXcd weighted_basis(int m, const TestFunction& u, const complexd& z) {
    const int n = m + 1;
    Eigen::VectorXcd phi(n);
    const double s = std::norm(z);
    const double uv = u.value(z);
    if (s <= 0.0) {
        phi.setZero();
        phi(0) = std::exp(0.5 * (std::log(m + 1.0) - uv));
        return phi;
    }
    const double logs = std::log(s);
    const double log1ps = std::log1p(s);
    const double phase = std::arg(z);
    for (int i = 0; i < n; ++i) {
        const double logmag =
            0.5 * (std::log(m + 1.0) + log_binomial(m, i) + i * logs - m * log1ps - uv);
        const double mag = std::exp(logmag);
        phi(i) = complexd(mag * std::cos(i * phase), mag * std::sin(i * phase));
    }
    return phi;
}

namespace {

void factorize(GramMatrix& gram) {
    Eigen::LLT<Eigen::MatrixXcd> llt(gram.mat);
    if (llt.info() != Eigen::Success) {
        throw std::runtime_error("Gram not positive definite: increase quadrature level or check u");
    }
    gram.chol = llt.matrixL();
    for (int i = 0; i < gram.size(); ++i) {
        if (!(gram.chol(i, i).real() > 0.0)) {
            throw std::runtime_error("Gram not positive definite: increase quadrature level or check u");
        }
    }
}

}  // namespace

GramMatrix assemble_gram(int m, const TestFunction& u, const QuadratureRule& rule) {
    if (m < 0) throw std::invalid_argument("assemble_gram: m must be >= 0");
    if (rule.level < m) {
        throw std::invalid_argument("assemble_gram: rule level insufficient for degree m=" +
                                    std::to_string(m));
    }
    const int n = m + 1;
    GramMatrix gram;
    gram.m = m;
    gram.mat = Eigen::MatrixXcd::Zero(n, n);

    if (u.radial && u.radial_value) {
        // Diagonal fast path: M_ii = (m+1) binom(m,i) int_0^1 sigma^i (1-sigma)^{m-i} e^{-u} dsigma.
        gram.radial = true;
        for (int i = 0; i < n; ++i) {
            double acc = 0.0;
            for (int q = 0; q < rule.n_radial; ++q) {
                const double sigma = rule.sigma_nodes[q];
                const double t = std::log(sigma) - std::log1p(-sigma);
                const double loge = std::log(m + 1.0) + log_binomial(m, i) + i * std::log(sigma) +
                                    (m - i) * std::log1p(-sigma) - u.radial_value(t);
                acc += rule.sigma_weights[q] * std::exp(loge);
            }
            gram.mat(i, i) = acc;
        }
    } else {
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const Eigen::VectorXcd phi = weighted_basis(m, u, rule.nodes[q]);
            gram.mat.selfadjointView<Eigen::Lower>().rankUpdate(phi, rule.weights[q]);
        }
        gram.mat = gram.mat.selfadjointView<Eigen::Lower>();
    }
    factorize(gram);
    return gram;
}

double logdet_L(const GramMatrix& gram) {
    double acc = 0.0;
    for (int i = 0; i < gram.size(); ++i) acc += std::log(gram.chol(i, i).real());
    return -2.0 * acc;
}

double logdet_L(int m, const TestFunction& u, const QuadratureRule& rule) {
    return logdet_L(assemble_gram(m, u, rule));
}

Eigen::VectorXcd onb_at(const GramMatrix& gram, const TestFunction& u, const complexd& z) {
    const Eigen::VectorXcd phi = weighted_basis(gram.m, u, z);
    return gram.chol.triangularView<Eigen::Lower>().solve(phi);
}

BergmanEval bergman(const GramMatrix& gram, const TestFunction& u, const complexd& z) {
    BergmanEval ev;
    ev.z = StereoCoord{z, false};
    ev.kernel_row = onb_at(gram, u, z);
    ev.beta_density = ev.kernel_row.squaredNorm() / gram.size();
    return ev;
}

BergmanEval bergman(int m, const TestFunction& u, const QuadratureRule& rule, const StereoCoord& z) {
    if (z.at_infinity) throw std::domain_error("bergman: evaluation at infinity not supported");
    const GramMatrix gram = assemble_gram(m, u, rule);
    return bergman(gram, u, z.value);
}

Eigen::MatrixXcd toeplitz_matrix(const GramMatrix& gram, const TestFunction& u,
                                 const QuadratureRule& rule,
                                 const std::function<double(const complexd&)>& symbol) {
    const int n = gram.size();
    Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(n, n);
    for (std::size_t q = 0; q < rule.size(); ++q) {
        const Eigen::VectorXcd y = onb_at(gram, u, rule.nodes[q]);
        t.selfadjointView<Eigen::Lower>().rankUpdate(y, rule.weights[q] * symbol(rule.nodes[q]));
    }
    t = t.selfadjointView<Eigen::Lower>();
    return t;
}

Eigen::MatrixXcd toeplitz_matrix(int m, const TestFunction& u, const QuadratureRule& rule,
                                 const TestFunction& f) {
    const GramMatrix gram = assemble_gram(m, u, rule);
    auto val = f.value;
    return toeplitz_matrix(gram, u, rule, [&val](const complexd& z) { return val(z); });
}

double rv_operator(const GramMatrix& gram, const TestFunction& u, const TestFunction& v,
                   const QuadratureRule& rule, const complexd& z) {
    auto vv = v.value;
    const Eigen::MatrixXcd tv = toeplitz_matrix(gram, u, rule, [&vv](const complexd& w) { return vv(w); });
    const Eigen::VectorXcd y = onb_at(gram, u, z);
    const double second_moment = (y.adjoint() * tv * y).value().real();
    const double beta = y.squaredNorm() / gram.size();
    return second_moment / gram.size() - beta * v.value(z);
}

double rv_operator(int m, const TestFunction& u, const TestFunction& v, const QuadratureRule& rule,
                   const StereoCoord& z) {
    if (z.at_infinity) throw std::domain_error("rv_operator: evaluation at infinity not supported");
    const GramMatrix gram = assemble_gram(m, u, rule);
    return rv_operator(gram, u, v, rule, z.value);
}

double second_derivative_trace(const GramMatrix& gram, const TestFunction& u,
                               const TestFunction& v, const QuadratureRule& rule) {
    const int n = gram.size();
    Eigen::MatrixXcd tv = Eigen::MatrixXcd::Zero(n, n);
    Eigen::MatrixXcd tv2 = Eigen::MatrixXcd::Zero(n, n);
    for (std::size_t q = 0; q < rule.size(); ++q) {
        const Eigen::VectorXcd y = onb_at(gram, u, rule.nodes[q]);
        const double vq = v.value(rule.nodes[q]);
        tv.selfadjointView<Eigen::Lower>().rankUpdate(y, rule.weights[q] * vq);
        tv2.selfadjointView<Eigen::Lower>().rankUpdate(y, rule.weights[q] * vq * vq);
    }
    tv = tv.selfadjointView<Eigen::Lower>();
    tv2 = tv2.selfadjointView<Eigen::Lower>();
    const double tr_tv_sq = tv.squaredNorm();  // Tr(T[v]^2) for Hermitian T[v]
    const double tr_tv2 = tv2.trace().real();
    return (tr_tv_sq - tr_tv2) / n;
}

double second_derivative_trace(int m, const TestFunction& u, const TestFunction& v,
                               const QuadratureRule& rule) {
    const GramMatrix gram = assemble_gram(m, u, rule);
    return second_derivative_trace(gram, u, v, rule);
}

std::string GramMatrix::to_csv() const {
    std::ostringstream os;
    os.precision(17);
    os << "row,col,re,im\n";
    for (int i = 0; i < size(); ++i) {
        for (int j = 0; j < size(); ++j) {
            os << i << ',' << j << ',' << mat(i, j).real() << ',' << mat(i, j).imag() << '\n';
        }
    }
    return os.str();
}

std::string bergman_profile_csv(const GramMatrix& gram, const TestFunction& u,
                                const std::vector<double>& t_values) {
    std::ostringstream os;
    os.precision(17);
    os << "t,beta_density\n";
    for (const double t : t_values) {
        const double r = std::exp(0.5 * t);
        const BergmanEval ev = bergman(gram, u, complexd(r, 0.0));
        os << t << ',' << ev.beta_density << '\n';
    }
    return os.str();
}

}  // namespace onofri
