#include <doctest.h>

#include <cstdlib>
#include <random>

#include <mixprior/loss.hpp>
#include <mixprior/mixture.hpp>

using namespace mixprior;

namespace {

// Brute-force oracle: linear-domain probabilities from first principles,
// independent of the walker/enumeration machinery under test.
double oracle_bernoulli_prob(double p, const SymbolString &x) {
    double out = 1.0;
    for (Symbol a : x)
        out *= a == 1 ? p : 1.0 - p;
    return out;
}

double oracle_kl_bernoulli(double p, double q, int n) {
    double total = 0.0;
    for (std::uint64_t r = 0; r < (std::uint64_t{1} << n); ++r) {
        SymbolString x = unrank(Alphabet(2), n, r);
        double mu = oracle_bernoulli_prob(p, x);
        double rho = oracle_bernoulli_prob(q, x);
        if (mu > 0.0)
            total += mu * std::log2(mu / rho);
    }
    return total;
}

// conditional-sum form of the cumulative divergence, for the form-equivalence check
double oracle_kl_conditional_form(const ProcessMeasure &mu, const ProcessMeasure &rho,
                                  int n) {
    const Alphabet &alphabet = mu.alphabet();
    double total = 0.0;
    for (int t = 0; t < n; ++t) {
        for (std::uint64_t r = 0; r < string_count(alphabet, t); ++r) {
            SymbolString prefix = unrank(alphabet, t, r);
            double weight = mu.log_marginal(prefix).prob();
            if (weight <= 0.0)
                continue;
            for (Symbol a = 0; a < alphabet.size(); ++a) {
                double cmu = mu.log_conditional(prefix, a).prob();
                if (cmu <= 0.0)
                    continue;
                double crho = rho.log_conditional(prefix, a).prob();
                total += weight * cmu * std::log2(cmu / crho);
            }
        }
    }
    return total;
}

} // namespace

TEST_CASE("cumulative KL: identity, point-mass and product cases") {
    auto b7 = bernoulli_measure(0.7);
    auto b5 = bernoulli_measure(0.5);
    CHECK(cumulative_kl(*b5, *b5, 6) == doctest::Approx(0.0).epsilon(1e-12));

    // any Dirac against the fair coin costs exactly one bit per step
    for (const SymbolString &prefix :
         {SymbolString{}, SymbolString{1, 0, 1}, SymbolString{1, 1, 1, 1}}) {
        auto d = dirac_measure(Alphabet(2), prefix);
        CHECK(cumulative_kl(*d, *b5, 7) == 7.0);
        CHECK(cumulative_kl(*d, *b5, 4) == 4.0);
    }

    // frozen oracle value: 4 * (0.7 log2 1.4 + 0.3 log2 0.6)
    double exact4 = cumulative_kl(*b7, *b5, 4);
    CHECK(exact4 == doctest::Approx(0.4748364030772293).epsilon(1e-12));
    CHECK(exact4 == doctest::Approx(oracle_kl_bernoulli(0.7, 0.5, 4)).epsilon(1e-12));
    CHECK(cumulative_kl(*b7, *b5, 10) ==
          doctest::Approx(1.1870910076930732).epsilon(1e-12));
}

TEST_CASE("cumulative KL is +inf exactly on absolute-continuity failures") {
    auto d0 = dirac_measure(Alphabet(2), {});
    auto d1 = dirac_measure(Alphabet(2), {1});
    CHECK(cumulative_kl(*d0, *d1, 3) == kInfiniteBits);
    CHECK(cumulative_kl(*d0, *d0, 3) == 0.0);
}

TEST_CASE("both displayed forms of the divergence agree") {
    std::vector<std::pair<MeasurePtr, MeasurePtr>> pairs{
        {bernoulli_measure(0.7), bernoulli_measure(0.5)},
        {markov1_measure(0.2, 0.8), bernoulli_measure(0.4)},
        {std::make_shared<ChangePointMeasure>(std::vector<int>{2},
                                              std::vector<double>{0.2, 0.8}),
         markov1_measure(0.5, 0.5)},
    };
    for (const auto &[mu, rho] : pairs)
        for (int n : {1, 2, 5, 8})
            CHECK(cumulative_kl(*mu, *rho, n) ==
                  doctest::Approx(oracle_kl_conditional_form(*mu, *rho, n))
                      .epsilon(1e-9));
}

TEST_CASE("monotone in the horizon") {
    auto mu = markov1_measure(0.3, 0.6);
    auto rho = bernoulli_measure(0.5);
    double prev = 0.0;
    for (int n = 1; n <= 10; ++n) {
        double cur = cumulative_kl(*mu, *rho, n);
        CHECK(cur >= prev - 1e-12);
        prev = cur;
    }
}

TEST_CASE("restricted divergence: complement additivity and edge sets") {
    auto mu = bernoulli_measure(0.7);
    auto rho = bernoulli_measure(0.4);
    int n = 5;
    Alphabet binary(2);

    CHECK(restricted_kl(*mu, *rho, n, {}) == 0.0);

    std::vector<SymbolString> all;
    for (std::uint64_t r = 0; r < 32; ++r)
        all.push_back(unrank(binary, n, r));
    CHECK(restricted_kl(*mu, *rho, n, all) ==
          doctest::Approx(cumulative_kl(*mu, *rho, n)).epsilon(1e-12));

    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<SymbolString> subset, complement;
        for (std::uint64_t r = 0; r < 32; ++r)
            (rng() & 1 ? subset : complement).push_back(unrank(binary, n, r));
        double left = restricted_kl(*mu, *rho, n, subset) +
                      restricted_kl(*mu, *rho, n, complement);
        CHECK(left == doctest::Approx(cumulative_kl(*mu, *rho, n)).epsilon(1e-9));
    }

    CHECK_THROWS_AS((void)restricted_kl(*mu, *rho, n, {SymbolString{0, 1}}), InputError);
}

TEST_CASE("Jensen instance: -L|A <= mu(A) log2 rho(A) + log2(e)/e on random triples") {
    // log-sum inequality plus max_t(-t log2 t) = log2(e)/e; the constant is
    // sharp, so no tolerance smaller than this can work in base 2
    const double slack = std::log2(std::exp(1.0)) / std::exp(1.0);
    std::mt19937_64 rng(918273);
    Alphabet binary(2);
    for (int trial = 0; trial < 100; ++trial) {
        double p = 0.05 + 0.9 * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
        double q = 0.05 + 0.9 * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
        int n = 2 + static_cast<int>(rng() % 7); // n <= 8
        auto mu = bernoulli_measure(p);
        auto rho = bernoulli_measure(q);
        std::vector<SymbolString> subset;
        double mu_mass = 0.0, rho_mass = 0.0;
        for (std::uint64_t r = 0; r < (std::uint64_t{1} << n); ++r) {
            if (rng() & 1) {
                SymbolString x = unrank(binary, n, r);
                subset.push_back(x);
                mu_mass += mu->log_marginal(x).prob();
                rho_mass += rho->log_marginal(x).prob();
            }
        }
        if (subset.empty() || mu_mass <= 0.0)
            continue;
        double lhs = -restricted_kl(*mu, *rho, n, subset);
        CHECK(lhs <= mu_mass * std::log2(rho_mass) + slack + 1e-12);
    }
}

TEST_CASE("Monte Carlo estimator") {
    auto b7 = bernoulli_measure(0.7);
    auto b5 = bernoulli_measure(0.5);

    // identical measures: the log-ratio is exactly zero on every sample
    auto same = mc_loss(*b7, *b7, 12, 1000, 5);
    CHECK(same.mean == 0.0);
    CHECK(same.std_error == 0.0);

    // single-support sampling hits the same string every time
    auto d = dirac_measure(Alphabet(2), {});
    auto point = mc_loss(*d, *b5, 20, 100, 5);
    CHECK(point.mean == 20.0);
    CHECK(point.std_error == 0.0);
    CHECK_FALSE(point.infinite);

    // agrees with exact enumeration within three standard errors
    auto est = mc_loss(*b7, *b5, 10, 100000, 2024);
    double exact = cumulative_kl(*b7, *b5, 10);
    CHECK(std::abs(est.mean - exact) <= 3.0 * est.std_error);
    CHECK(est.std_error > 0.0);

    // sampling a rho-null string flags infinity
    auto d1 = dirac_measure(Alphabet(2), {1});
    auto inf_est = mc_loss(*d1, *d, 3, 10, 5);
    CHECK(inf_est.infinite);
    CHECK(inf_est.mean == kInfiniteBits);

    CHECK_THROWS_AS((void)mc_loss(*b7, *b5, 5, 1, 7), InputError);
}

TEST_CASE("posterior prediction of a mixture") {
    auto d0 = dirac_measure(Alphabet(2), {});     // 0 0 0 ...
    auto d10 = dirac_measure(Alphabet(2), {1});   // 1 0 0 ...
    MixtureMeasure mix({{0.5, d0}, {0.5, d10}});

    auto first = predict_next(mix, {});
    CHECK(first[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(first[1] == doctest::Approx(0.5).epsilon(1e-12));

    // seeing a 1 collapses the posterior onto the second component
    auto second = predict_next(mix, {1});
    CHECK(second[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(second[1] == doctest::Approx(0.0).epsilon(1e-12));

    // single component: the mixture conditional is that measure's conditional
    auto b7 = bernoulli_measure(0.7);
    MixtureMeasure solo({{1.0, b7}});
    auto dist = predict_next(solo, {0, 1});
    CHECK(dist[1] == doctest::Approx(0.7).epsilon(1e-12));

    CHECK_THROWS_AS((void)predict_next(mix, SymbolString{1, 1}),
                    UndefinedConditionalError);
}

TEST_CASE("prediction chain rule: conditional products reproduce marginals") {
    auto mix = std::make_shared<MixtureMeasure>(std::vector<MixtureMeasure::Component>{
        {0.25, bernoulli_measure(0.2)},
        {0.25, bernoulli_measure(0.8)},
        {0.5, markov1_measure(0.3, 0.7)}});
    std::mt19937_64 rng(55);
    for (int trial = 0; trial < 25; ++trial) {
        SymbolString x;
        for (int t = 0; t < 9; ++t)
            x.push_back(static_cast<Symbol>(rng() & 1));
        double product = 1.0;
        SymbolString prefix;
        for (Symbol a : x) {
            product *= predict_next(*mix, prefix)[a];
            prefix.push_back(a);
        }
        CHECK(product == doctest::Approx(mix->log_marginal(x).prob()).epsilon(1e-9));
    }
}

TEST_CASE("enumeration budget and worker-count invariance") {
    auto b7 = bernoulli_measure(0.7);
    auto b5 = bernoulli_measure(0.5);
    CHECK_THROWS_AS((void)cumulative_kl(*b7, *b5, 30), BudgetError);
    try {
        (void)cumulative_kl(*b7, *b5, 30);
    } catch (const BudgetError &e) {
        CHECK(e.horizon() == 30);
    }

    // the chunked reduction is bitwise identical for any worker count
    double sequential = cumulative_kl(*b7, *b5, 12);
    setenv("MIXPRIOR_THREADS", "4", 1);
    double threaded = cumulative_kl(*b7, *b5, 12);
    unsetenv("MIXPRIOR_THREADS");
    CHECK(sequential == threaded);
}
