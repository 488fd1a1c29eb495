#include <doctest.h>

#include <random>

#include <mixprior/enumeration.hpp>
#include <mixprior/families.hpp>
#include <mixprior/mixture.hpp>

using namespace mixprior;

namespace {

// the measure zoo exercised by the property-style checks below
std::vector<MeasurePtr> zoo() {
    std::vector<MeasurePtr> out;
    out.push_back(bernoulli_measure(0.3));
    out.push_back(bernoulli_measure(0.5));
    out.push_back(uniform_measure(Alphabet(3)));
    out.push_back(markov1_measure(0.2, 0.8));
    out.push_back(std::make_shared<ChangePointMeasure>(std::vector<int>{3},
                                                       std::vector<double>{0.2, 0.8}));
    out.push_back(dirac_measure(Alphabet(2), {0, 1}));
    out.push_back(std::make_shared<MixtureMeasure>(
        std::vector<MixtureMeasure::Component>{{0.5, bernoulli_measure(0.3)},
                                               {0.5, dirac_measure(Alphabet(2), {0, 1})}}));
    out.push_back(mix_with_uniform(dirac_measure(Alphabet(2), {})));
    return out;
}

SymbolString random_string(std::mt19937_64 &rng, const Alphabet &alphabet, int n) {
    SymbolString x(static_cast<std::size_t>(n));
    for (auto &a : x)
        a = static_cast<Symbol>(rng() % alphabet.size());
    return x;
}

} // namespace

TEST_CASE("log-sum-exp handles zeros and magnitude gaps") {
    CHECK(log2_add_exp(kLogZero, kLogZero) == kLogZero);
    CHECK(log2_add_exp(kLogZero, -3.0) == -3.0);
    CHECK(log2_add_exp(-1.0, -1.0) == doctest::Approx(0.0).epsilon(1e-14));
    // 2^-1 + 2^-1074-ish should not lose the big term
    CHECK(log2_add_exp(-1.0, -1000.0) == doctest::Approx(-1.0));
    LogProb half = LogProb::from_prob(0.5);
    CHECK((half + half).prob() == doctest::Approx(1.0));
    CHECK((half * LogProb::zero()).is_zero());
}

TEST_CASE("uniform marginals: |X|^-n exactly") {
    auto b = bernoulli_measure(0.5);
    CHECK(b->log_marginal({0, 1, 1}).log2() == -3.0);
    auto u3 = uniform_measure(Alphabet(3));
    CHECK(u3->log_marginal({2, 0}).prob() == doctest::Approx(1.0 / 9.0).epsilon(1e-14));
    CHECK(u3->log_marginal({0}).prob() == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    // -nM with M = 1
    auto u2 = uniform_measure(Alphabet(2));
    CHECK(u2->log_marginal({1, 0, 1, 0}).log2() == -4.0);
}

TEST_CASE("dirac point mass: 0/1 marginals only") {
    auto d = dirac_measure(Alphabet(2), {}); // all-zero sequence
    CHECK(d->log_marginal({0, 0, 0}).log2() == 0.0);
    CHECK(d->log_marginal({0, 0, 1}).is_zero());
    for (int n = 1; n <= 8; ++n) {
        double total = 0.0;
        int support = 0;
        const ProcessMeasure *one[] = {d.get()};
        walk_strings(d->alphabet(), n, one,
                     [&](std::uint64_t, const SymbolString &,
                         const std::vector<double> &m) {
                         if (m[0] != kLogZero) {
                             ++support;
                             total += std::exp2(m[0]);
                         }
                     });
        CHECK(support == 1);
        CHECK(total == 1.0);
    }
}

TEST_CASE("i.i.d. product marginal") {
    auto b = bernoulli_measure(0.7);
    CHECK(b->log_marginal({1, 0}).log2() ==
          doctest::Approx(std::log2(0.21)).epsilon(1e-13));
    CHECK(std::log2(0.21) == doctest::Approx(-2.2515387669959646).epsilon(1e-15));
}

TEST_CASE("conditionals match definitions") {
    auto b = bernoulli_measure(0.7);
    CHECK(b->log_conditional({0, 0, 1}, 1).log2() == std::log2(0.7));

    auto m = markov1_measure(0.2, 0.8);
    CHECK(m->log_conditional({1, 0}, 1).log2() == std::log2(0.2));
    CHECK(m->log_conditional({0, 1}, 1).log2() == std::log2(0.8));
    CHECK(m->log_conditional({}, 1).log2() == std::log2(0.5)); // initial

    auto d = dirac_measure(Alphabet(2), {});
    CHECK(d->log_conditional({0, 0}, 1).is_zero());
    CHECK_THROWS_AS((void)d->log_conditional({0, 1}, 0), UndefinedConditionalError);
    CHECK_THROWS_AS((void)b->log_marginal({0, 2}), InputError);
}

TEST_CASE("change-point segments switch at the break") {
    ChangePointMeasure cp({3}, {0.2, 0.8});
    // positions 1..3 use p1 = 0.2, positions 4.. use p1 = 0.8
    CHECK(cp.log_conditional({}, 1).log2() == std::log2(0.2));
    CHECK(cp.log_conditional({0, 0}, 1).log2() == std::log2(0.2));
    CHECK(cp.log_conditional({0, 0, 0}, 1).log2() == std::log2(0.8));
    CHECK(cp.log_conditional({0, 0, 0, 0}, 1).log2() == std::log2(0.8));
}

TEST_CASE("marginal consistency: sum over next symbols telescopes") {
    std::mt19937_64 rng(20240817);
    for (const auto &m : zoo()) {
        const Alphabet &alphabet = m->alphabet();
        for (int trial = 0; trial < 40; ++trial) {
            int len = static_cast<int>(rng() % 9); // prefixes up to 8
            SymbolString x = random_string(rng, alphabet, len);
            double parent = m->log_marginal(x).prob();
            double children = 0.0;
            for (Symbol a = 0; a < alphabet.size(); ++a) {
                x.push_back(a);
                children += m->log_marginal(x).prob();
                x.pop_back();
            }
            CHECK(children == doctest::Approx(parent).epsilon(1e-12));
        }
    }
}

TEST_CASE("chain rule: marginal equals summed conditionals in log domain") {
    std::mt19937_64 rng(7);
    for (const auto &m : zoo()) {
        const Alphabet &alphabet = m->alphabet();
        for (int trial = 0; trial < 20; ++trial) {
            SymbolString x = random_string(rng, alphabet, 6);
            double direct = m->log_marginal(x).log2();
            double chained = 0.0;
            bool defined = true;
            SymbolString prefix;
            for (Symbol a : x) {
                double parent = m->log_marginal(prefix).log2();
                if (parent == kLogZero) {
                    defined = false;
                    break;
                }
                chained += m->log_conditional(prefix, a).log2();
                prefix.push_back(a);
            }
            if (!defined || chained == kLogZero)
                CHECK(direct == kLogZero);
            else
                CHECK(direct == doctest::Approx(chained).epsilon(1e-12));
        }
    }
}

TEST_CASE("full-horizon normalization up to n = 12") {
    for (const auto &m : zoo()) {
        const Alphabet &alphabet = m->alphabet();
        int n_max = alphabet.size() == 2 ? 12 : 7;
        for (int n : {1, 3, n_max}) {
            const ProcessMeasure *one[] = {m.get()};
            double total = sum_over_strings(
                alphabet, n, one,
                [](std::uint64_t, const std::vector<double> &lm) {
                    return lm[0] == kLogZero ? 0.0 : std::exp2(lm[0]);
                });
            CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("sampling is deterministic and follows the law") {
    auto d = dirac_measure(Alphabet(2), {});
    CHECK(d->sample(5, 123) == SymbolString{0, 0, 0, 0, 0});

    auto sure = std::make_shared<IidMeasure>(Alphabet(2), std::vector<double>{0.0, 1.0});
    CHECK(sure->sample(3, 9) == SymbolString{1, 1, 1});

    auto fair = bernoulli_measure(0.5);
    auto x = fair->sample(10000, 42);
    CHECK(x == fair->sample(10000, 42));
    double ones = 0.0;
    for (Symbol a : x)
        ones += a;
    CHECK(ones / 10000.0 == doctest::Approx(0.5).epsilon(0.04)); // 4 sigma band

    auto m = markov1_measure(0.05, 0.95);
    auto y = m->sample(4000, 7);
    int flips = 0;
    for (std::size_t t = 1; t < y.size(); ++t)
        flips += y[t] != y[t - 1];
    CHECK(flips < 800); // sticky chain rarely flips
}

TEST_CASE("walker push/pop restores state through zero-probability branches") {
    auto d = dirac_measure(Alphabet(2), {0, 1});
    auto w = d->walker();
    w->push(0);
    CHECK(w->log2_marginal() == 0.0);
    w->push(0); // off the support
    CHECK(w->log2_marginal() == kLogZero);
    w->pop();
    CHECK(w->log2_marginal() == 0.0);
    w->push(1);
    CHECK(w->log2_marginal() == 0.0);
}
