#include <doctest.h>

#include <sstream>

#include <mixprior/bound.hpp>

using namespace mixprior;

TEST_CASE("bound constants: frozen B_4 regression value") {
    auto c4 = bound_constants(4, 1.0);
    CHECK(c4.k == 4);
    CHECK(c4.w_n == doctest::Approx(WeightScheme::normalizer() / 16.0));
    // B_4 = w^3 / (4 * 4 * 4^5 * 4^3 * 4 * 4), computed independently
    CHECK(c4.b_n == doctest::Approx(7.1539979235643367e-09).epsilon(1e-12));

    CHECK_THROWS_AS((void)bound_constants(2, 1.0), InputError);
    CHECK_THROWS_AS((void)bound_rhs(2, 1.0), InputError);
}

TEST_CASE("bound rhs is finite and positive across the whole range") {
    double prev = 0.0;
    for (int n = 3; n <= 64; ++n) {
        double v = bound_rhs(n, 1.0);
        CHECK(std::isfinite(v));
        CHECK(v > 0.0);
        prev = v;
    }
    for (int e = 7; e <= 20; ++e) {
        double v = bound_rhs(1 << e, 1.0);
        CHECK(std::isfinite(v));
        CHECK(v > prev); // keeps growing through n = 2^20
        prev = v;
    }
}

TEST_CASE("bound rhs asymptotics: 8 log n plus an M log log n sliver") {
    // at n = 2^16 the ratio to log2 n sits inside [8, 9 + M]
    double n16 = bound_rhs(1 << 16, 1.0);
    CHECK(n16 / 16.0 >= 8.0);
    CHECK(n16 / 16.0 <= 10.0);

    // doubling n adds about 8 bits: 5 from n^5, 3 from k^3, log-log dust
    for (int e : {10, 16, 19}) {
        auto a = bound_constants(1 << e, 1.0);
        auto b = bound_constants(1 << (e + 1), 1.0);
        double growth = std::log2(a.b_n) - std::log2(b.b_n);
        CHECK(growth >= 7.5);
        CHECK(growth <= 9.5);
    }
}

TEST_CASE("verify_regret_bound: the reference against itself passes trivially") {
    auto rho = bernoulli_measure(0.5);
    ModelClass c{Alphabet(2), "just-rho", {rho}};
    auto prior = assemble_prior(c, rho, 6);
    auto reports = verify_regret_bound(c, rho, prior, 6);
    REQUIRE(reports.size() == 4); // n = 3..6
    for (const auto &r : reports) {
        CHECK(r.pass);
        CHECK(r.loss_nu == doctest::Approx(0.0).epsilon(1e-10));
        CHECK(r.margin > 30.0); // desk-scale slack is enormous
        CHECK(r.rhs == doctest::Approx(bound_rhs(r.n, 1.0)));
    }
}

TEST_CASE("report CSV shape and quoting") {
    std::vector<RegretReport> reports{
        {"bernoulli(p=0.5)", 3, 0.0, 1.0, 1.5, 34.0, 33.0, true},
        {"markov(order=1;init=0.5,0.5;rows=0.8,0.2|0.2,0.8)", 4, 0.5, 1.0, 1.5, 35.0,
         34.0, false}};
    std::ostringstream out;
    write_report_csv(out, reports);
    std::string text = out.str();
    CHECK(text.rfind("measure_id,n,loss_nu_bits,loss_rho_bits,loss_rho_prime_bits,"
                     "bound_rhs_bits,margin_bits,pass\n",
                     0) == 0);
    CHECK(text.find("bernoulli(p=0.5),3,0,1,1.5,34,33,true") != std::string::npos);
    // the comma-bearing identity is quoted
    CHECK(text.find("\"markov(order=1;init=0.5,0.5;rows=0.8,0.2|0.2,0.8)\",4") !=
          std::string::npos);
    CHECK(text.find(",false\n") != std::string::npos);
}
