#include "doctest.h"

#include "subhyp/errors.h"
#include "subhyp/io.h"

#include <cmath>

using namespace subhyp;
using subhyp::io::json;

TEST_CASE("polygon domain from JSON") {
    auto j = json::parse(R"({"type":"polygon","name":"box","outer":[[0,0],[2,0],[2,1],[0,1]],
                            "slits":[[[1,0],[1,0.5]]],"basepoint":[0.5,0.5]})");
    Domain d = io::domain_from_json(j);
    CHECK(d.name() == "box");
    CHECK(d.segments().size() == 5);
    CHECK(d.basepoint() == Point{0.5, 0.5});
    CHECK(d.contains({1.5, 0.75}));
    CHECK_FALSE(d.contains({1.0, 0.25}));
}

TEST_CASE("grid domain from JSON") {
    auto j = json::parse(R"({"type":"grid","cell":0.25,"rows":["11","10"]})");
    Domain d = io::domain_from_json(j);
    CHECK(d.contains({0.1, 0.4}));
    CHECK_FALSE(d.contains({0.4, 0.1}));
    CHECK(d.contains(d.basepoint()));
}

TEST_CASE("malformed domains") {
    CHECK_THROWS_AS(io::domain_from_json(json::parse("[1,2]")), InputError);
    CHECK_THROWS_AS(io::domain_from_json(json::parse(R"({"type":"circle"})")), InputError);
    CHECK_THROWS_AS(io::domain_from_json(json::parse(R"({"outer":[[0,0],[1,0,3]]})")), InputError);
    CHECK_THROWS_AS(io::domain_from_json(json::parse(R"({"outer":[[0,0],[1,0],[1,1],[0,1]],"basepoint":[3,3]})")),
                    InputError);
    CHECK_THROWS_AS(io::read_json_file("/nonexistent/domain.json"), InputError);
}

TEST_CASE("boundary function rules from JSON") {
    Domain d = gallery::slit_square();
    auto f = io::boundary_function_from_json(json::parse(R"([
        {"where":{"face":"slit+","box":[-0.2,-0.1,0.2,0.1]},"expr":"ax + 1"},
        {"where":{"face":"any"},"expr":"2"}])"));
    REQUIRE(f.rules().size() == 2);
    BoundaryElement e;
    e.anchor = {{0.1, 0.0}, d.face_at({0.1, 0.0}, {0.1, 0.1})};
    CHECK(f(d, e) == doctest::Approx(1.1));
    e.anchor = {{0.3, 0.0}, d.face_at({0.3, 0.0}, {0.3, 0.1})};
    CHECK(f(d, e) == 2.0);
    CHECK_THROWS_AS(io::boundary_function_from_json(json::array()), InputError);
    CHECK_THROWS_AS(io::boundary_function_from_json(json::parse(R"([{"where":{"box":[0,1]},"expr":"1"}])")),
                    InputError);
}

TEST_CASE("pairs CSV") {
    auto rows = io::parse_pairs_csv("x1,y1,x2,y2,alpha\n# comment\n\n0.1,0.2,0.3,0.4\r\n0.5,0.5,0.6,0.6,1\n");
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].alpha == 0.5);
    CHECK(rows[0].y == Point{0.3, 0.4});
    CHECK(rows[1].alpha == 1.0);
    CHECK_THROWS_AS(io::parse_pairs_csv("0.1,0.2,0.3\n"), InputError);
    CHECK_THROWS_AS(io::parse_pairs_csv("0.1,0.2,0.3,0.4\nx,y,z,w\n"), InputError);
}

TEST_CASE("pair estimates report row errors") {
    Domain d = gallery::slit_square();
    auto w = build_whitney(d, 7);
    std::vector<io::PairQuery> q = {{{0, 0.1}, {0, -0.1}, 0.5}, {{2, 2}, {0, 0}, 0.5}, {{0.2, 0.2}, {0.3, 0.3}, 0.0}};
    auto res = io::estimate_pairs(w, q);
    REQUIRE(res.size() == 3);
    CHECK(res[0].error.empty());
    CHECK(res[0].estimate.upper > 0);
    CHECK(res[1].error == "outside");
    CHECK(res[2].error == "input");
    std::string csv = io::pairs_csv(res);
    CHECK(csv.rfind("x1,y1,x2,y2,alpha,upper", 0) == 0);
    CHECK(csv == io::pairs_csv(io::estimate_pairs(w, q)));
    auto j = io::pairs_json(res);
    CHECK(j[1]["error"] == "outside");
}

TEST_CASE("number formatting round trips") {
    for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17}) CHECK(std::stod(io::num(v)) == v);
    CHECK(io::num(0.5) == "0.5");
}

TEST_CASE("boundary export") {
    Domain d = gallery::slit_square();
    auto w = build_whitney(d, 7);
    AlphaBoundary ab(w, {});
    auto j = io::boundary_json(ab);
    CHECK(j["elements"].size() == ab.elements().size());
    CHECK(j["samples"].size() == ab.samples().size());
    CHECK(j["inaccessible"].empty());
    CHECK_FALSE(j["elements"][0].contains("cluster_sizes"));
    CHECK(io::adjacency_csv(w).rfind("a,b\n", 0) == 0);
    CHECK(io::cubes_json(w).size() == w.size());
}
