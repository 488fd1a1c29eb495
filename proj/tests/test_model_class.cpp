#include <doctest.h>

#include <mixprior/model_class.hpp>

using namespace mixprior;

TEST_CASE("bernoulli grid expands to one measure per value") {
    json spec{{"family", "bernoulli-grid"},
              {"values", {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9}}};
    auto c = build_class(spec);
    CHECK(c.size() == 9);
    CHECK(c.alphabet.size() == 2);
    CHECK(c.at(0).identity() == "bernoulli(p=0.1)");
    CHECK(c.at(8).identity() == "bernoulli(p=0.9)");
}

TEST_CASE("dirac-upto-k enumerates all eventually-zero sequences") {
    auto c = build_class(json{{"family", "dirac-upto-k"}, {"k", 3}});
    CHECK(c.size() == 8);
    // lexicographic by the k-prefix; measure 0 is the all-zero sequence
    CHECK(c.at(0).identity() == "dirac(prefix=,tail=0)");
    CHECK(c.at(5).identity() == "dirac(prefix=101,tail=0)");
    // identities are distinct even though trailing zeros are stripped
    std::set<std::string> ids;
    for (const auto &m : c.measures)
        ids.insert(m->identity());
    CHECK(ids.size() == 8);
}

TEST_CASE("change-point class: one parameter choice per segment") {
    auto c = build_class(json{{"family", "change-point"},
                              {"change_points", {5}},
                              {"params", {0.2, 0.8}}});
    CHECK(c.size() == 4);
    // segment grids in lexicographic order: (0.2,0.2), (0.2,0.8), (0.8,0.2), (0.8,0.8)
    CHECK(c.at(1).identity() == "changepoint(t=5;p=0.2,0.8)");
}

TEST_CASE("markov grid crosses the two transition grids") {
    auto c = build_class(json{{"family", "markov-grid"},
                              {"p1_given_0", {0.2, 0.8}},
                              {"p1_given_1", {0.2, 0.8}}});
    CHECK(c.size() == 4);
}

TEST_CASE("class spec errors") {
    CHECK_THROWS_AS((void)build_class(json{{"family", "no-such-family"}}), InputError);
    CHECK_THROWS_AS((void)build_class(json{{"family", "bernoulli-grid"},
                                           {"values", json::array()}}),
                    InputError);
    CHECK_THROWS_AS((void)build_class(json{{"family", "bernoulli-grid"},
                                           {"values", {0.0, 0.5}}}),
                    InputError); // grid values must lie in (0,1)
    CHECK_THROWS_AS((void)build_class(json{{"family", "custom"},
                                           {"measures", json::array()}}),
                    InputError);
    // duplicate measures are rejected
    json dup{{"family", "custom"},
             {"alphabet_size", 2},
             {"measures",
              {json{{"family", "bernoulli"}, {"p", 0.5}},
               json{{"family", "bernoulli"}, {"p", 0.5}}}}};
    CHECK_THROWS_AS((void)build_class(dup), InputError);
}

TEST_CASE("canonical class file round-trips losslessly") {
    json spec{{"family", "bernoulli-grid"}, {"values", {0.1, 0.5, 0.9}}};
    auto c = build_class(spec);
    json canonical = class_to_json(c);
    auto c2 = build_class(canonical);
    CHECK(c2.size() == c.size());
    for (std::size_t i = 0; i < c.size(); ++i)
        CHECK(c2.at(i).identity() == c.at(i).identity());
    CHECK(class_to_json(c2).dump() == canonical.dump());
    CHECK(class_digest(c2) == class_digest(c));
}

TEST_CASE("measure specs round-trip through JSON") {
    std::vector<MeasurePtr> ms{
        bernoulli_measure(0.7), uniform_measure(Alphabet(3)),
        markov1_measure(0.2, 0.8),
        std::make_shared<ChangePointMeasure>(std::vector<int>{2, 4},
                                             std::vector<double>{0.1, 0.9, 0.5}),
        dirac_measure(Alphabet(2), {1, 0, 1})};
    for (const auto &m : ms) {
        auto back = measure_from_json(m->spec_json());
        CHECK(back->identity() == m->identity());
        CHECK(back->spec_json().dump() == m->spec_json().dump());
    }
}
