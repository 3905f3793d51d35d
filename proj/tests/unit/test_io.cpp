#include <gtest/gtest.h>

#include <limits>
#include <cstdlib>
#include <random>
#include <sstream>

#include "gll/error.hpp"
#include "gll/io.hpp"

using namespace gll;

TEST(FormatDouble, RoundTripsAtSeventeenDigits) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int k = 0; k < 1000; ++k) {
        const double v = u(rng) * std::pow(10.0, (k % 40) - 20);
        EXPECT_EQ(std::strtod(format_double(v).c_str(), nullptr), v);
    }
    EXPECT_EQ(std::strtod(format_double(0.1).c_str(), nullptr), 0.1);
    EXPECT_EQ(std::strtod(format_double(std::numeric_limits<double>::denorm_min()).c_str(), nullptr), std::numeric_limits<double>::denorm_min());
}

TEST(DiagnosticsCsv, HeaderAndLosslessRoundTrip) {
    std::vector<DiagnosticsRecord> recs;
    std::mt19937_64 rng(2);
    std::normal_distribution<double> g;
    for (int k = 0; k < 20; ++k) recs.push_back({0.01 * k, g(rng), g(rng), g(rng), g(rng), g(rng), g(rng), g(rng), 1e-16, g(rng)});
    std::stringstream ss;
    write_diagnostics_csv(ss, recs);
    std::string header;
    std::getline(ss, header);
    EXPECT_EQ(header, "t,e1,e2,e3,h12,h22,w32,sup_ux,constraint_err,de2_residual");
    ss.seekg(0);
    const auto back = read_diagnostics_csv(ss);
    ASSERT_EQ(back.size(), recs.size());
    for (std::size_t k = 0; k < recs.size(); ++k) EXPECT_EQ(back[k], recs[k]);
}

TEST(DiagnosticsCsv, RejectsMalformedInput) {
    std::stringstream bad_header("t,e1\n0,1\n");
    EXPECT_THROW(read_diagnostics_csv(bad_header), Error);
    std::stringstream bad_row("t,e1,e2,e3,h12,h22,w32,sup_ux,constraint_err,de2_residual\n0,1,2\n");
    EXPECT_THROW(read_diagnostics_csv(bad_row), Error);
}

TEST(FieldJson, RoundTripWithMetadata) {
    const auto u = random_smooth_field(PeriodicGrid(32), 3, 9);
    const auto j = field_to_json(u, 9u);
    EXPECT_EQ(j["n_points"], 32);
    EXPECT_EQ(j["sphere_dim"], 3);
    EXPECT_EQ(j["seed"], 9);
    EXPECT_EQ(j["samples"].size(), 32u);
    EXPECT_EQ(j["samples"][0].size(), 4u);
    const auto back = field_from_json(nlohmann::json::parse(j.dump()));
    ASSERT_EQ(back.data().size(), u.data().size());
    for (std::size_t k = 0; k < u.data().size(); ++k) EXPECT_EQ(back.data()[k], u.data()[k]);
    EXPECT_TRUE(field_to_json(u)["seed"].is_null());
}

TEST(FieldJson, RejectsInconsistentShapes) {
    auto j = field_to_json(random_smooth_field(PeriodicGrid(16), 2, 1));
    j["n_points"] = 17;
    EXPECT_THROW(field_from_json(j), Error);
}
