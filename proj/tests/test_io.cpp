#include <doctest.h>

#include "dyadic/io.hpp"
#include "fixtures.hpp"

using namespace dyadic;

TEST_CASE("two-leaf instance round trip")
{
    const auto fa = fixtures::fa();
    const auto text = save_instance(fa);
    CHECK(load_instance(text) == fa);
    CHECK(text.find("\"0:0\": 1.0") != std::string::npos);
}

TEST_CASE("random instances round trip (property)")
{
    fixtures::Gen gen(21);
    for (int trial = 0; trial < 50; ++trial) {
        const auto inst = gen.instance(gen.integer(2, 3), gen.integer(0, 3), gen.integer(1, 4), 0.3, 1.4, 0.2);
        const auto again = load_instance(save_instance(inst));
        CHECK(again == inst);
        CHECK(save_instance(again) == save_instance(inst));
    }
}

TEST_CASE("load errors")
{
    const std::string good = R"({"branching":2,"depth":1,"exponents":[2,2],"measures":[[1,1],[1,1]],"kernel":{"0:0":1}})";
    CHECK_NOTHROW(load_instance(good));

    CHECK_THROWS_WITH_AS(
        load_instance(R"({"branching":2,"depth":1,"exponents":[2,2],"measures":[[1,-1],[1,1]],"kernel":{}})"),
        doctest::Contains("negative leaf mass"), Error);
    CHECK_THROWS_WITH_AS(
        load_instance(R"({"branching":2,"depth":1,"exponents":[1,2],"measures":[[1,1],[1,1]],"kernel":{}})"),
        doctest::Contains("exponent must exceed 1"), Error);
    CHECK_THROWS_WITH_AS(load_instance("{not json"), doctest::Contains("malformed JSON"), Error);
    CHECK_THROWS_WITH_AS(load_instance(R"({"depth":1,"exponents":[2],"measures":[[1,1]]})"),
                         doctest::Contains("branching"), Error);
    CHECK_THROWS_AS(
        load_instance(R"({"branching":2,"depth":1,"exponents":[2],"measures":[[1,1,1]],"kernel":{}})"), Error);
    CHECK_THROWS_WITH_AS(
        load_instance(R"({"branching":2,"depth":1,"exponents":[2],"measures":[[1,1]],"kernel":{"2:0":1}})"),
        doctest::Contains("outside the tree"), Error);
    CHECK_THROWS_AS(
        load_instance(R"({"branching":2,"depth":1,"exponents":[2],"measures":[[1,1]],"kernel":{"0:0":-2}})"), Error);
    CHECK_THROWS_AS(
        load_instance(R"({"branching":2,"depth":1,"exponents":[2,3],"measures":[[1,1]],"kernel":{}})"), Error);
    CHECK_THROWS_AS(load_instance(R"({"branching":2,"depth":1,"exponents":"x","measures":[[1,1]]})"), Error);
}

TEST_CASE("functions file")
{
    const auto tree = fixtures::small_tree();
    const auto fs = load_functions("[[1,2],[0,3]]", tree);
    REQUIRE(fs.size() == 2);
    CHECK(fs[1].values == std::vector<double>{0, 3});
    CHECK_THROWS_AS(load_functions("[[1,2,3]]", tree), Error);
    CHECK_THROWS_AS(load_functions("[[1,-2]]", tree), Error);
}
