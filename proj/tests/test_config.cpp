#include <doctest.h>

#include "mlsal/config.hpp"

using namespace mlsal;

TEST_CASE("defaults") {
    const PipelineConfig c = parse_config("");
    CHECK(c == PipelineConfig{});
    CHECK(c.sigma1 == 0.1);
    CHECK(c.eta == 6.0);
    CHECK(c.scales == std::vector<int>{100, 150, 200, 250, 300});
    CHECK(c.beta2 == 0.3);
}

TEST_CASE("round trip") {
    PipelineConfig c;
    c.sigma1 = 0.123456789012345;
    c.sigma2 = 1.0 / 3.0;
    c.scales = {50, 120};
    c.f_mode = RegionPriorMode::Luma;
    c.squared_distance = true;
    c.literal_log_sign = true;
    c.guided_radius = 5;
    c.seed = 18446744073709551615ULL;
    const PipelineConfig back = parse_config(serialize_config(c));
    CHECK(back == c);
    CHECK(parse_config(serialize_config(back)) == c);
}

TEST_CASE("parsing") {
    const PipelineConfig c = parse_config("# comment\n\n  eta = 3.5  # trailing\nscales = 100, 200\r\nf_mode=luma\n");
    CHECK(c.eta == 3.5);
    CHECK(c.scales == std::vector<int>{100, 200});
    CHECK(c.f_mode == RegionPriorMode::Luma);
}

TEST_CASE("every key is accepted") {
    const PipelineConfig defaults;
    const std::string text = serialize_config(defaults);
    for (const std::string& key : config_keys()) CHECK(text.find(key + " = ") != std::string::npos);
}

TEST_CASE("errors") {
    CHECK_THROWS_AS(parse_config("sigma3 = 1"), Error);
    CHECK_THROWS_AS(parse_config("sigma1 = abc"), Error);
    CHECK_THROWS_AS(parse_config("sigma1"), Error);
    CHECK_THROWS_AS(parse_config("sigma1 = -1"), Error);
    CHECK_THROWS_AS(parse_config("scales = 200, 100"), Error);
    CHECK_THROWS_AS(parse_config("h_count = 2.5"), Error);
    CHECK_THROWS_AS(parse_config("f_mode = bright"), Error);
    CHECK_THROWS_AS(parse_config("squared_distance = maybe"), Error);
    CHECK_THROWS_AS(load_config("/nonexistent/config.txt"), Error);
}
