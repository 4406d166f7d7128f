#include "projstat/datagen.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "projstat/error.hpp"

namespace projstat {

namespace {

void require_table_dim(std::size_t d, std::size_t max) {
    if (d < 1 || d > max)
        throw std::invalid_argument("table dimension must be in [1, " + std::to_string(max) + "]");
}

void require_probability(double q, const char* what) {
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument(std::string(what) + " must be in [0, 1]");
}

}  // namespace

JointPmf JointPmf::uniform(std::size_t d) {
    require_table_dim(d, kMaxDim);
    const std::size_t cells = std::size_t{1} << d;
    return {d, std::vector<double>(cells, 1.0 / static_cast<double>(cells))};
}

JointPmf JointPmf::independent(const std::vector<double>& q) {
    require_table_dim(q.size(), kMaxDim);
    for (double qi : q) require_probability(qi, "q_i");
    const std::size_t d = q.size(), cells = std::size_t{1} << d;
    JointPmf p{d, std::vector<double>(cells, 1.0)};
    for (std::size_t c = 0; c < cells; ++c)
        for (std::size_t i = 0; i < d; ++i) p.probs[c] *= (c >> i & 1U) ? q[i] : 1.0 - q[i];
    return p;
}

Point JointPmf::outcome(std::size_t d, std::size_t cell) {
    Point x(d);
    for (std::size_t i = 0; i < d; ++i) x[i] = static_cast<double>(cell >> i & 1U);
    return x;
}

double JointPmf::margin(std::size_t i) const {
    double s = 0.0;
    for (std::size_t c = 0; c < probs.size(); ++c)
        if (c >> i & 1U) s += probs[c];
    return s;
}

double JointPmf::pair(std::size_t i, std::size_t j, int a, int b) const {
    double s = 0.0;
    for (std::size_t c = 0; c < probs.size(); ++c)
        if (static_cast<int>(c >> i & 1U) == a && static_cast<int>(c >> j & 1U) == b) s += probs[c];
    return s;
}

double JointPmf::odds_ratio(std::size_t i, std::size_t j) const {
    return pair(i, j, 1, 1) * pair(i, j, 0, 0) / (pair(i, j, 0, 1) * pair(i, j, 1, 0));
}

std::vector<double> JointPmf::sum_law() const {
    std::vector<double> law(d + 1, 0.0);
    for (std::size_t c = 0; c < probs.size(); ++c)
        law[static_cast<std::size_t>(std::popcount(c))] += probs[c];
    return law;
}

DiscreteMeasure JointPmf::to_measure() const {
    std::vector<Point> pts;
    std::vector<double> w;
    for (std::size_t c = 0; c < probs.size(); ++c) {
        pts.push_back(outcome(d, c));
        w.push_back(probs[c]);
    }
    return DiscreteMeasure::from_atoms(pts, w);
}

Sample gen_independent_bernoulli(std::size_t d, double q, std::size_t n, Rng& rng) {
    require_probability(q, "q");
    if (d < 1) throw std::invalid_argument("d must be >= 1");
    std::bernoulli_distribution bern(q);
    Sample s;
    s.rows.assign(n, Point(d));
    for (auto& row : s.rows)
        for (auto& v : row) v = bern(rng) ? 1.0 : 0.0;
    return s;
}

Sample gen_equicorrelated_bernoulli(std::size_t d, double q, double rho, std::size_t n, Rng& rng) {
    if (!(rho >= 0.0 && rho < 1.0)) throw std::invalid_argument("rho must be in [0, 1)");
    if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("q must be in (0, 1)");
    if (d < 1) throw std::invalid_argument("d must be >= 1");
    std::bernoulli_distribution common(q), own(q), copy(std::sqrt(rho));
    Sample s;
    s.rows.assign(n, Point(d));
    for (auto& row : s.rows) {
        const bool z = common(rng);
        for (auto& v : row) {
            const bool take_common = copy(rng);
            const bool y = own(rng);
            v = (take_common ? z : y) ? 1.0 : 0.0;
        }
    }
    return s;
}

JointPmf equicorrelated_pmf(std::size_t d, double q, double rho) {
    if (!(rho >= 0.0 && rho < 1.0)) throw std::invalid_argument("rho must be in [0, 1)");
    if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("q must be in (0, 1)");
    const double s = std::sqrt(rho);
    const JointPmf hi = JointPmf::independent(std::vector<double>(d, s + (1.0 - s) * q));
    const JointPmf lo = JointPmf::independent(std::vector<double>(d, (1.0 - s) * q));
    JointPmf out{d, std::vector<double>(hi.probs.size())};
    for (std::size_t c = 0; c < out.probs.size(); ++c)
        out.probs[c] = q * hi.probs[c] + (1.0 - q) * lo.probs[c];
    return out;
}

double plackett_2x2(double a, double b, double gamma) {
    if (!(a > 0.0 && a < 1.0 && b > 0.0 && b < 1.0))
        throw std::invalid_argument("margins must be in (0, 1)");
    if (!(gamma > 0.0)) throw std::invalid_argument("odds ratio must be positive");
    if (gamma == 1.0) return a * b;
    const double s = 1.0 + (a + b) * (gamma - 1.0);
    return (s - std::sqrt(s * s - 4.0 * gamma * (gamma - 1.0) * a * b)) / (2.0 * (gamma - 1.0));
}

IpfResult gen_odds_ratio_joint(std::size_t d, double gamma, std::size_t max_iters, double tol) {
    require_table_dim(d, 12);
    if (d < 2) throw std::invalid_argument("odds-ratio joint needs d >= 2");
    const double t11 = plackett_2x2(0.5, 0.5, gamma);
    // Targets for (a, b) indexed by 2a + b; margins 1/2 make the table symmetric.
    const double target[4] = {t11, 0.5 - t11, 0.5 - t11, t11};

    IpfResult res{JointPmf::uniform(d), 0, 0.0, 0.0};
    auto& p = res.pmf.probs;
    const std::size_t cells = p.size();

    auto measure = [&] {
        res.margin_discrepancy = 0.0;
        res.pair_discrepancy = 0.0;
        for (std::size_t i = 0; i < d; ++i)
            res.margin_discrepancy =
                std::max(res.margin_discrepancy, std::abs(res.pmf.margin(i) - 0.5));
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = i + 1; j < d; ++j) {
                double s[4] = {0, 0, 0, 0};
                for (std::size_t c = 0; c < cells; ++c) s[2 * (c >> i & 1U) + (c >> j & 1U)] += p[c];
                for (int k = 0; k < 4; ++k)
                    res.pair_discrepancy = std::max(res.pair_discrepancy, std::abs(s[k] - target[k]));
            }
        return std::max(res.margin_discrepancy, res.pair_discrepancy);
    };

    while (measure() >= tol) {
        if (res.iterations >= max_iters)
            throw NumericalError("IPF did not converge in " + std::to_string(max_iters) +
                                 " sweeps; final discrepancy " +
                                 std::to_string(std::max(res.margin_discrepancy,
                                                         res.pair_discrepancy)));
        for (std::size_t i = 0; i < d; ++i) {
            const double m1 = res.pmf.margin(i);
            const double up = 0.5 / m1, down = 0.5 / (1.0 - m1);
            for (std::size_t c = 0; c < cells; ++c) p[c] *= (c >> i & 1U) ? up : down;
        }
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = i + 1; j < d; ++j) {
                double s[4] = {0, 0, 0, 0};
                for (std::size_t c = 0; c < cells; ++c) s[2 * (c >> i & 1U) + (c >> j & 1U)] += p[c];
                double f[4];
                for (int k = 0; k < 4; ++k) f[k] = s[k] > 0.0 ? target[k] / s[k] : 0.0;
                for (std::size_t c = 0; c < cells; ++c) p[c] *= f[2 * (c >> i & 1U) + (c >> j & 1U)];
            }
        ++res.iterations;
    }
    return res;
}

Sample sample_from_pmf(const JointPmf& pmf, std::size_t n, Rng& rng) {
    if (pmf.probs.size() != (std::size_t{1} << pmf.d))
        throw std::invalid_argument("pmf table size does not match its dimension");
    std::vector<double> cdf(pmf.probs.size());
    double acc = 0.0;
    for (std::size_t c = 0; c < cdf.size(); ++c) {
        if (!(pmf.probs[c] >= 0.0)) throw std::invalid_argument("negative probability");
        cdf[c] = acc += pmf.probs[c];
    }
    if (std::abs(acc - 1.0) > 1e-9) throw std::invalid_argument("pmf does not sum to 1");
    std::uniform_real_distribution<double> unif(0.0, acc);
    Sample s;
    s.rows.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = unif(rng);
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        std::size_t cell = std::min<std::size_t>(it - cdf.begin(), cdf.size() - 1);
        while (pmf.probs[cell] == 0.0 && cell > 0) --cell;
        s.rows.push_back(JointPmf::outcome(pmf.d, cell));
    }
    return s;
}

std::vector<double> gen_poisson_binomial_params(std::size_t d, double gamma1, double gamma2,
                                                Rng& rng) {
    if (!(gamma1 > 0.0 && gamma2 > 0.0)) throw std::invalid_argument("Beta parameters must be positive");
    std::gamma_distribution<double> ga(gamma1, 1.0), gb(gamma2, 1.0);
    std::vector<double> q(d);
    for (auto& v : q) {
        const double x = ga(rng), y = gb(rng);
        v = x + y > 0.0 ? x / (x + y) : 0.5;
    }
    return q;
}

std::vector<double> sample_simplex_uniform(std::size_t m, Rng& rng) {
    if (m < 1) throw std::invalid_argument("simplex needs m >= 1");
    std::exponential_distribution<double> ex(1.0);
    std::vector<double> w(m);
    double total = 0.0;
    for (auto& v : w) total += v = ex(rng);
    for (auto& v : w) v /= total;
    return w;
}

}  // namespace projstat
