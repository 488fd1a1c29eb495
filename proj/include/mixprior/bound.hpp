#pragma once

#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include "loss.hpp"
#include "prior.hpp"

namespace mixprior {

// Constants entering the explicit regret bound at horizon n.
struct BoundConstants {
    int n = 0;
    int k = 0;          // k(n)
    double m_bits = 0.0; // M
    double normalizer = 0.0; // w
    double w_n = 0.0;
    double b_n = 0.0; // w^3 / (4 (M+1)^2 n^5 k^3 log2^2 n log2^2 k)
};

inline BoundConstants bound_constants(int n, double m_bits) {
    if (n < 3)
        throw InputError("bound constants are defined for n >= 3");
    BoundConstants c;
    c.n = n;
    c.k = covering_interval_count(n);
    c.m_bits = m_bits;
    c.normalizer = WeightScheme::normalizer();
    c.w_n = WeightScheme::at(static_cast<std::uint64_t>(n));
    double ln = std::log2(static_cast<double>(n));
    double lk = std::log2(static_cast<double>(c.k));
    c.b_n = std::pow(c.normalizer, 3) /
            (4.0 * (m_bits + 1.0) * (m_bits + 1.0) * std::pow(static_cast<double>(n), 5) *
             std::pow(static_cast<double>(c.k), 3) * ln * ln * lk * lk);
    return c;
}

// Right-hand side of the regret guarantee against the smoothed reference:
//   M n / k(n) - log2 B_n + 4M - (2/n)(log2 w_n - 1) + 1/2.
// Against the raw reference the guarantee is this plus 1.
inline Bits bound_rhs(int n, double m_bits) {
    BoundConstants c = bound_constants(n, m_bits);
    return m_bits * n / c.k - std::log2(c.b_n) + 4.0 * m_bits -
           (2.0 / n) * (std::log2(c.w_n) - 1.0) + 0.5;
}

// One verified (measure, horizon) pair.
struct RegretReport {
    std::string measure_id;
    int n = 0;
    Bits loss_nu = 0.0;        // L_n(mu, nu)
    Bits loss_rho = 0.0;       // L_n(mu, rho)
    Bits loss_rho_prime = 0.0; // L_n(mu, rho')
    Bits rhs = 0.0;            // bound_rhs(n)
    Bits margin = 0.0;         // slack left in the tighter of the two checks
    bool pass = false;
};

// Checks, for every class measure and horizon 3..N, that
//   L_n(mu, nu) <= L_n(mu, rho') + bound_rhs(n)   and
//   L_n(mu, nu) <= L_n(mu, rho)  + bound_rhs(n) + 1.
inline std::vector<RegretReport> verify_regret_bound(const ModelClass &model_class,
                                                 const MeasurePtr &rho,
                                                 const DiscretePrior &nu,
                                                 int max_horizon) {
    if (max_horizon < 3)
        throw InputError("verify_regret_bound needs N >= 3");
    auto rho_prime = mix_with_uniform(rho);
    const ProcessMeasure &nu_measure = *nu.as_measure();
    std::vector<RegretReport> reports;
    reports.reserve(model_class.size() * static_cast<std::size_t>(max_horizon - 2));
    for (const auto &mu : model_class.measures) {
        for (int n = 3; n <= max_horizon; ++n) {
            RegretReport rep;
            rep.measure_id = mu->identity();
            rep.n = n;
            rep.loss_nu = cumulative_kl(*mu, nu_measure, n);
            rep.loss_rho = cumulative_kl(*mu, *rho, n);
            rep.loss_rho_prime = cumulative_kl(*mu, *rho_prime, n);
            rep.rhs = bound_rhs(n, model_class.alphabet.log2_size());
            double margin_smoothed = rep.loss_rho_prime + rep.rhs - rep.loss_nu;
            double margin_raw = rep.loss_rho + rep.rhs + 1.0 - rep.loss_nu;
            rep.margin = std::min(margin_smoothed, margin_raw);
            rep.pass = margin_smoothed >= 0.0 && margin_raw >= 0.0;
            reports.push_back(std::move(rep));
        }
    }
    return reports;
}

inline void write_report_csv(std::ostream &out,
                             const std::vector<RegretReport> &reports) {
    out << "measure_id,n,loss_nu_bits,loss_rho_bits,loss_rho_prime_bits,"
           "bound_rhs_bits,margin_bits,pass\n";
    for (const auto &r : reports) {
        std::string id = r.measure_id;
        if (id.find(',') != std::string::npos || id.find('"') != std::string::npos) {
            std::string quoted = "\"";
            for (char c : id) {
                if (c == '"')
                    quoted += '"';
                quoted += c;
            }
            id = quoted + "\"";
        }
        out << id << ',' << r.n << ',' << format_double(r.loss_nu) << ','
            << format_double(r.loss_rho) << ',' << format_double(r.loss_rho_prime)
            << ',' << format_double(r.rhs) << ',' << format_double(r.margin) << ','
            << (r.pass ? "true" : "false") << '\n';
    }
}

} // namespace mixprior
