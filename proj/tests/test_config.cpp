#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <string>

#include "framelab/config.hpp"

using namespace framelab;

namespace {

std::filesystem::path temp_file(const std::string& name) {
    std::filesystem::path dir = std::filesystem::temp_directory_path() / "framelab_test_config";
    std::filesystem::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_CASE("config parse and serialize round-trip byte for byte") {
    std::string text =
        "# frame run\n"
        "\n"
        "measure = uniform(0,2)\n"
        "  grid=256\n"
        "# trailing comment\n"
        "window = 8\n";
    Config cfg = parse_config(text);
    CHECK(serialize_config(cfg) == text);
    CHECK(cfg.get_or("measure", "") == "uniform(0,2)");
    CHECK(cfg.get_or("grid", "") == "256");
    CHECK_FALSE(cfg.has("seed"));
    CHECK(cfg.get("seed") == std::nullopt);

    CHECK_THROWS_AS(parse_config("just words\n"), error);
    CHECK_THROWS_AS(parse_config("=value\n"), error);
}

TEST_CASE("config set updates in place or appends") {
    Config cfg = parse_config("a=1\n# note\nb=2\n");
    cfg.set("b", "20");
    cfg.set("c", "3");
    CHECK(serialize_config(cfg) == "a=1\n# note\nb=20\nc=3\n");
    CHECK(cfg.get_or("b", "") == "20");
    CHECK(cfg.get_or("c", "") == "3");
}

TEST_CASE("typed config accessors validate their input") {
    Config cfg = parse_config("x=2.5\nn=40\nbad=abc\nfrac=3.7\n");
    CHECK(config_double(cfg, "x", 0.0) == 2.5);
    CHECK(config_double(cfg, "missing", -1.0) == -1.0);
    CHECK(config_long(cfg, "n", 0) == 40);
    CHECK(config_long(cfg, "missing", 7) == 7);
    CHECK_THROWS_AS(config_double(cfg, "bad", 0.0), error);
    CHECK_THROWS_AS(config_long(cfg, "bad", 0), error);
    CHECK_THROWS_AS(config_long(cfg, "frac", 0), error);
}

TEST_CASE("measure descriptors cover every variant") {
    Measure1D uni = parse_measure_descriptor("uniform( 0 , 2 )", 64);
    CHECK(uni.variant == MeasureVariant::Density);
    CHECK(uni.support_hull.lo == 0.0);
    CHECK(uni.support_hull.hi == 2.0);

    Measure1D tri = parse_measure_descriptor("triangle", 64);
    CHECK(tri.support_hull.lo == -1.0);
    CHECK(tri.support_hull.hi == 1.0);

    Measure1D inv = parse_measure_descriptor("invsqrt", 64);
    CHECK(inv.support_hull.lo == 0.0);
    CHECK(inv.support_hull.hi == 1.0);

    std::filesystem::path csv = temp_file("density.csv");
    write_csv(csv.string(), {"x", "phi"}, {{0.0, 1.0}, {0.5, 2.0}, {1.0, 1.0}});
    Measure1D grid = parse_measure_descriptor("grid(" + csv.string() + ")", 64);
    CHECK(grid.variant == MeasureVariant::Density);
    CHECK(grid.support_hull.lo == 0.0);
    CHECK(grid.support_hull.hi == 1.0);
    CHECK(grid.density_at(0.5) > grid.density_at(0.1));

    Measure1D ss = parse_measure_descriptor("ifs(lambda=0.5, digits=[0, 0.5])", 64);
    CHECK(ss.variant == MeasureVariant::SelfSimilar);
    CHECK(ss.ifs.lambda == 0.5);
    CHECK(ss.ifs.branch_count() == 2);

    CHECK_THROWS_AS(parse_measure_descriptor("nope", 64), error);
    CHECK_THROWS_AS(parse_measure_descriptor("uniform(1)", 64), error);
    CHECK_THROWS_AS(parse_measure_descriptor("ifs(lambda=0.5)", 64), error);
    CHECK_THROWS_AS(parse_measure_descriptor("ifs(lambda=0.5,digits=[0,0.5],x=1)", 64), error);
}

TEST_CASE("spectrum descriptors build lattices, jitters, and unions") {
    Interval window{-4.0, 4.0};
    Spectrum lat = parse_spectrum_descriptor("lattice(1,0)", window, 5);
    CHECK(lat.size() == 8);
    CHECK(lat.points.front() == -4.0);

    Spectrum jit = parse_spectrum_descriptor("jitter(1,0.2,seed=9)", window, 5);
    Spectrum direct = jittered_lattice(1.0, 0.2, 9, window);
    REQUIRE(jit.size() == direct.size());
    for (std::size_t i = 0; i < jit.size(); ++i) CHECK(jit.points[i] == direct.points[i]);

    Spectrum jit_default = parse_spectrum_descriptor("jitter(1,0.2)", window, 5);
    Spectrum direct5 = jittered_lattice(1.0, 0.2, 5, window);
    REQUIRE(jit_default.size() == direct5.size());
    for (std::size_t i = 0; i < jit_default.size(); ++i)
        CHECK(jit_default.points[i] == direct5.points[i]);

    Spectrum uni = parse_spectrum_descriptor("union(lattice(1,0);lattice(1,0.5))", window, 5);
    CHECK(uni.size() == 16);
    for (std::size_t i = 1; i < uni.size(); ++i) CHECK(uni.points[i] > uni.points[i - 1]);

    Spectrum nested = parse_spectrum_descriptor(
        "union(lattice(1,0);union(lattice(1,0.25);lattice(1,0.5)))", window, 5);
    CHECK(nested.size() == 24);

    CHECK_THROWS_AS(parse_spectrum_descriptor("rings(3)", window, 5), error);
    CHECK_THROWS_AS(parse_spectrum_descriptor("lattice(1)", window, 5), error);
}

TEST_CASE("window spellings") {
    Interval sym = parse_window("8");
    CHECK(sym.lo == -8.0);
    CHECK(sym.hi == 8.0);
    Interval asym = parse_window("2,5");
    CHECK(asym.lo == 2.0);
    CHECK(asym.hi == 5.0);
    CHECK_THROWS_AS(parse_window("0"), error);
    CHECK_THROWS_AS(parse_window("5,2"), error);
    CHECK_THROWS_AS(parse_window("a"), error);
    CHECK_THROWS_AS(parse_window("1,2,3"), error);
}

TEST_CASE("csv write and read round-trip") {
    std::filesystem::path path = temp_file("table.csv");
    std::vector<std::vector<double>> rows = {{1.0, 0.5}, {2.0, 0.25}, {3.0, 1.0 / 3.0}};
    write_csv(path.string(), {"n", "mass"}, rows);
    CsvTable table = read_csv(path.string());
    REQUIRE(table.header.size() == 2);
    CHECK(table.header[0] == "n");
    CHECK(table.header[1] == "mass");
    REQUIRE(table.rows.size() == 3);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            CHECK(table.rows[i][j] == rows[i][j]);

    std::filesystem::path bare = temp_file("bare.csv");
    write_csv(bare.string(), {}, {{4.0, 5.0}});
    CsvTable t2 = read_csv(bare.string());
    CHECK(t2.header.empty());
    REQUIRE(t2.rows.size() == 1);
    CHECK(t2.rows[0][1] == 5.0);

    std::filesystem::path bad = temp_file("bad.csv");
    {
        std::ofstream out(bad);
        out << "x,y\n1,2\noops,3\n";
    }
    CHECK_THROWS_AS(read_csv(bad.string()), error);
    CHECK_THROWS_AS(read_csv("/nonexistent/framelab/missing.csv"), error);
}
