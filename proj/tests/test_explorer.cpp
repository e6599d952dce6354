#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>

#include "doctest.h"
#include "lyapcert/explorer.hpp"

using namespace lyapcert;

namespace {

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("lyapcert_test_" + name)).string();
}

std::string slurp(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

SweepRow synthetic(double sigma, double lo, double hi) {
    SweepRow r;
    r.alpha = 3.0;
    r.beta = 1.0;
    r.sigma = sigma;
    r.K = 32;
    r.lambda_lo = lo;
    r.lambda_hi = hi;
    r.ok = true;
    return r;
}

bool same_row(const SweepRow& a, const SweepRow& b) {
    return a.alpha == b.alpha && a.beta == b.beta && a.sigma == b.sigma && a.K == b.K && a.ok == b.ok &&
           a.lambda_lo == b.lambda_lo && a.lambda_hi == b.lambda_hi && a.err_l2 == b.err_l2 && a.eps == b.eps &&
           a.n_mix == b.n_mix && a.cn_hi == b.cn_hi && a.mixing == b.mixing;
}

}  // namespace

TEST_CASE("ranges") {
    Range r = Range::parse("0.1:0.5:5");
    CHECK(r.count == 5);
    CHECK(r.value(0) == 0.1);
    CHECK(r.value(4) == 0.5);
    CHECK(std::fabs(r.value(2) - 0.3) <= 1e-16);
    Range one = Range::parse("3.25");
    CHECK(one.count == 1);
    CHECK(one.value(0) == 3.25);
    CHECK_THROWS_AS(Range::parse("abc"), DomainError);
    CHECK_THROWS_AS(Range::parse("1:0:3"), DomainError);
    CHECK_THROWS_AS(Range::parse("0:1:0"), DomainError);
}

TEST_CASE("sweeps") {
    SweepConfig cfg;
    cfg.alpha = Range{3.0, 3.5, 2};
    cfg.beta = Range{1.0, 1.0, 1};
    cfg.sigma = Range{0.4, 0.6, 3};
    cfg.K = 32;
    cfg.record_runtime = false;
    std::vector<SweepRow> seen;
    cfg.on_row = [&](const SweepRow& r) { seen.push_back(r); };
    auto rows = sweep(cfg);
    REQUIRE(rows.size() == 6u);
    REQUIRE(seen.size() == 6u);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(same_row(rows[i], seen[i]));
        CHECK(rows[i].alpha == cfg.alpha.value(static_cast<int>(i / 3)));
        CHECK(rows[i].sigma == cfg.sigma.value(static_cast<int>(i % 3)));
        CHECK(rows[i].runtime_s == 0.0);
        CHECK(rows[i].ok);
        CHECK(rows[i].lambda_lo <= rows[i].lambda_hi);
        CHECK(rows[i].mixing.size() == static_cast<std::size_t>(rows[i].n_mix) + 1);
    }

    SUBCASE("deterministic across worker counts") {
        SweepConfig c2 = cfg;
        c2.on_row = nullptr;
        c2.workers = 3;
        auto again = sweep(c2);
        for (std::size_t i = 0; i < rows.size(); ++i) CHECK(same_row(rows[i], again[i]));
    }
    SUBCASE("a sweep point equals a single point assembled at the column's smallest sigma") {
        PointOptions o;
        o.cert.tol.sigma = 0.4;
        SweepRow single = run_point(MapParams{3.5, 1.0}, NoiseParams{0.6}, 32, o);
        single.runtime_s = 0.0;
        CHECK(same_row(single, rows[5]));
    }
    SUBCASE("sink failures surface as IoError") {
        SweepConfig c3 = cfg;
        c3.on_row = [](const SweepRow&) { throw std::runtime_error("disk full"); };
        CHECK_THROWS_AS(sweep(c3), IoError);
    }
    SUBCASE("invalid grids") {
        SweepConfig bad = cfg;
        bad.sigma = Range{-0.1, 0.2, 2};
        CHECK_THROWS_AS(sweep(bad), DomainError);
        bad = cfg;
        bad.alpha = Range{0.5, 3.0, 2};
        CHECK_THROWS_AS(sweep(bad), DomainError);
    }
}

TEST_CASE("uncertified points become failed rows") {
    PointOptions o;
    o.auto_double = false;
    o.cert.n_max = 2;
    SweepRow r = run_point(MapParams{3.0, 1.0}, NoiseParams{0.1}, 32, o);
    CHECK_FALSE(r.ok);
    CHECK_FALSE(r.tag.empty());
    CHECK(r.indeterminate());
    CHECK(csv_line(r).find("nan") != std::string::npos);
}

TEST_CASE("crossing detection") {
    std::vector<SweepRow> rows{synthetic(0.1, 0.2, 0.3), synthetic(0.2, 0.1, 0.15), synthetic(0.3, -0.2, -0.1),
                               synthetic(0.4, -0.05, 0.05), synthetic(0.5, 0.01, 0.02)};
    auto b = detect_crossings(rows);
    REQUIRE(b.size() == 1u);
    CHECK(b[0].sigma1 == 0.2);
    CHECK(b[0].sigma2 == 0.3);
    CHECK(b[0].descending);

    rows[3] = synthetic(0.4, 0.05, 0.07);
    b = detect_crossings(rows);
    REQUIRE(b.size() == 2u);
    CHECK(b[0].descending);
    CHECK_FALSE(b[1].descending);
    CHECK(b[1].sigma1 == 0.3);
    CHECK(b[1].sigma2 == 0.4);

    std::vector<SweepRow> pos{synthetic(0.1, 0.1, 0.2), synthetic(0.2, 0.1, 0.2)};
    CHECK(detect_crossings(pos).empty());

    std::vector<SweepRow> mixed = rows;
    for (auto r : rows) {
        r.alpha = 3.5;
        mixed.push_back(r);
    }
    std::reverse(mixed.begin(), mixed.end());
    auto g = detect_all_crossings(mixed);
    REQUIRE(g.size() == 4u);
    CHECK(g[0].alpha == 3.0);
    CHECK(g[3].alpha == 3.5);
}

TEST_CASE("bisection refinement") {
    int calls = 0;
    LambdaOracle oracle = [&](double s, int) -> std::optional<Interval> {
        ++calls;
        return Interval(0.2987654321 - s - 1e-15, 0.2987654321 - s + 1e-15);
    };
    Bracket start{0.2, Interval(0.1), 0.4, Interval(-0.1), true};
    auto r = refine_crossing(oracle, start, 1e-12, 32);
    CHECK_FALSE(r.stalled);
    CHECK(r.bracket.sigma2 - r.bracket.sigma1 <= 1e-12);
    CHECK(r.bracket.sigma1 <= 0.2987654321);
    CHECK(r.bracket.sigma2 >= 0.2987654321);
    CHECK(r.steps == calls);

    SUBCASE("an oracle that never certifies stalls after escalating K") {
        std::vector<int> ks;
        LambdaOracle bad = [&](double, int k) -> std::optional<Interval> {
            ks.push_back(k);
            return std::nullopt;
        };
        auto s = refine_crossing(bad, start, 1e-6, 64, 256);
        CHECK(s.stalled);
        CHECK(ks == std::vector<int>{64, 128, 256});
        CHECK(s.bracket.sigma1 == 0.2);
    }
    SUBCASE("bad starts") {
        Bracket same{0.2, Interval(0.1), 0.4, Interval(0.2), true};
        CHECK_THROWS_AS(refine_crossing(oracle, same, 1e-6, 32), DomainError);
        Bracket rev{0.4, Interval(0.1), 0.2, Interval(-0.1), true};
        CHECK_THROWS_AS(refine_crossing(oracle, rev, 1e-6, 32), DomainError);
    }
}

TEST_CASE("noise-driven simulation") {
    const MapParams p{3.0, 1.0};
    SUBCASE("without noise the orbit is the map orbit") {
        auto s = simulate(p, NoiseParams{1e-301}, 0.3, 50, 1, true);
        REQUIRE(s.trajectory.size() == 51u);
        double x = 0.3;
        for (std::size_t i = 0; i <= 50; ++i) {
            CHECK(s.trajectory[i] == x);
            x = fold_point(map_point(p, x));
        }
    }
    SUBCASE("reproducible and in range") {
        auto a = simulate(p, NoiseParams{0.5}, 0.1, 20000, 5, true);
        auto b = simulate(p, NoiseParams{0.5}, 0.1, 20000, 5, true);
        auto c = simulate(p, NoiseParams{0.5}, 0.1, 20000, 6, true);
        CHECK(a.trajectory == b.trajectory);
        CHECK(a.birkhoff == b.birkhoff);
        CHECK(a.trajectory != c.trajectory);
        for (double x : a.trajectory) {
            CHECK(x >= -1.0);
            CHECK(x < 1.0);
        }
        CHECK(a.used + a.skipped == 20000u);
        CHECK(a.std_error > 0.0);
        // the certified value at this point is 0.0225429...
        CHECK(std::fabs(a.birkhoff - 0.02254290678) <= 6 * a.std_error);
    }
    SUBCASE("noise statistics") {
        NoiseStream n(0.7, 3);
        double s = 0, s2 = 0;
        const int m = 200000;
        for (int i = 0; i < m; ++i) {
            double w = n.next();
            s += w;
            s2 += w * w;
        }
        CHECK(std::fabs(s / m) <= 5 * 0.7 / std::sqrt(m));
        CHECK(std::fabs(std::sqrt(s2 / m) - 0.7) <= 0.01);
    }
    SUBCASE("argument checks") {
        CHECK_THROWS_AS(simulate(p, NoiseParams{0.5}, 1.0, 10, 1), DomainError);
        CHECK_THROWS_AS(simulate(p, NoiseParams{0.5}, 0.0, 0, 1), DomainError);
        CHECK_THROWS_AS(simulate(MapParams{0.5, 1.0}, NoiseParams{0.5}, 0.0, 10, 1), DomainError);
    }
}

TEST_CASE("two-point motion") {
    SUBCASE("negative exponent synchronises") {
        // alpha 3.5, sigma 0.4 has lambda near -0.0956
        auto r = two_point(MapParams{3.5, 1.0}, NoiseParams{0.4}, -0.7, 0.6, 5000, 11);
        REQUIRE(r.circle.size() == 5001u);
        CHECK(r.circle.front() == doctest::Approx(0.7));
        CHECK(r.raw.front() == doctest::Approx(1.3));
        CHECK(r.circle.back() <= 1e-12);
    }
    SUBCASE("positive exponent keeps the points apart") {
        // alpha 3.25, sigma 0.2 has lambda near 0.1396
        auto r = two_point(MapParams{3.25, 1.0}, NoiseParams{0.2}, -0.7, 0.6, 5000, 11);
        std::vector<double> tail(r.circle.begin() + 2500, r.circle.end());
        std::nth_element(tail.begin(), tail.begin() + tail.size() / 2, tail.end());
        CHECK(tail[tail.size() / 2] >= 1e-3);
    }
    SUBCASE("shared noise keeps identical starts together") {
        auto r = two_point(MapParams{3.0, 1.0}, NoiseParams{0.3}, 0.2, 0.2, 100, 1);
        for (double d : r.raw) CHECK(d == 0.0);
    }
    for (double d : two_point(MapParams{3.0, 1.0}, NoiseParams{0.3}, -0.9, 0.95, 1000, 2).circle) {
        CHECK(d >= 0.0);
        CHECK(d <= 1.0);
    }
}

TEST_CASE("number formatting round-trips") {
    for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02e23, 0.0, 4.9e-324}) CHECK(std::strtod(format_double(x).c_str(), nullptr) == x);
    CHECK(format_double(std::nan("")) == "nan");
    CHECK(format_double(-INFINITY) == "-inf");
}

TEST_CASE("CSV output") {
    SweepConfig cfg;
    cfg.alpha = Range{3.0, 3.0, 1};
    cfg.sigma = Range{0.5, 0.6, 2};
    cfg.K = 32;
    auto rows = sweep(cfg);
    PointOptions o;
    o.auto_double = false;
    o.cert.n_max = 2;
    rows.push_back(run_point(MapParams{3.0, 1.0}, NoiseParams{0.1}, 32, o));
    const std::string path = temp_path("rows.csv");
    write_csv(rows, path);
    CHECK(slurp(path).rfind(std::string(kCsvHeader) + "\n", 0) == 0);
    auto back = read_csv(path);
    REQUIRE(back.size() == rows.size());
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(back[i].lambda_lo == rows[i].lambda_lo);
        CHECK(back[i].lambda_hi == rows[i].lambda_hi);
        CHECK(back[i].err_l2 == rows[i].err_l2);
        CHECK(back[i].eps == rows[i].eps);
        CHECK(back[i].n_mix == rows[i].n_mix);
        CHECK(back[i].cn_hi == rows[i].cn_hi);
        CHECK(back[i].runtime_s == rows[i].runtime_s);
        CHECK(back[i].ok);
    }
    CHECK_FALSE(back[2].ok);
    CHECK(std::isnan(back[2].lambda_lo));

    std::ofstream(path) << "alpha,beta\n1,2\n";
    CHECK_THROWS_AS(read_csv(path), IoError);
    std::ofstream(path) << kCsvHeader << "\n1,2,3\n";
    CHECK_THROWS_AS(read_csv(path), IoError);
    std::ofstream(path) << kCsvHeader << "\n1,1,0.5,32,x,1,1,1,1,1,1\n";
    CHECK_THROWS_AS(read_csv(path), IoError);
    std::remove(path.c_str());
    CHECK_THROWS_AS(read_csv(temp_path("missing.csv")), IoError);
    CHECK_THROWS_AS(write_csv(rows, "/nonexistent/dir/rows.csv"), IoError);
}

TEST_CASE("sign map pixmap") {
    std::vector<SweepRow> rows{synthetic(0.1, 0.1, 0.2), synthetic(0.2, -0.2, -0.1), synthetic(0.3, -0.1, 0.1),
                               synthetic(0.1, -0.3, -0.2), synthetic(0.2, 0.0, 0.0), synthetic(0.3, 0.4, 0.5)};
    const std::string path = temp_path("sign.ppm");
    write_sign_map(rows, 2, 3, path);
    const std::string data = slurp(path);
    const std::string head = "P6\n2 3\n255\n";
    REQUIRE(data.size() == head.size() + 18);
    CHECK(data.compare(0, head.size(), head) == 0);
    auto px = [&](int ix, int is) {
        std::size_t o = head.size() + 3 * static_cast<std::size_t>(is * 2 + ix);
        return std::vector<unsigned char>(data.begin() + static_cast<long>(o), data.begin() + static_cast<long>(o) + 3);
    };
    using V = std::vector<unsigned char>;
    CHECK(px(0, 0) == V{255, 0, 0});
    CHECK(px(0, 1) == V{0, 0, 255});
    CHECK(px(0, 2) == V{128, 128, 128});
    CHECK(px(1, 0) == V{0, 0, 255});
    CHECK(px(1, 1) == V{128, 128, 128});
    CHECK(px(1, 2) == V{255, 0, 0});
    std::remove(path.c_str());
    CHECK_THROWS_AS(write_sign_map(rows, 4, 2, path), DimensionError);
}

TEST_CASE("certificate records and mixing heatmap") {
    PointOptions o;
    auto pr = evaluate_point(MapParams{3.0, 1.0}, NoiseParams{0.5}, 32, o);
    REQUIRE(pr.row.ok);
    REQUIRE(pr.density.has_value());
    const std::string text = certificate_text(*pr.density, &*pr.lyapunov);
    CHECK(text.find("lambda ") != std::string::npos);
    CHECK(text == certificate_text(pr.row));

    std::vector<SweepRow> rows;
    for (double a : {3.0, 3.5})
        for (double s : {0.4, 0.6}) rows.push_back(run_point(MapParams{a, 1.0}, NoiseParams{s}, 32));
    PointOptions bad;
    bad.auto_double = false;
    bad.cert.n_max = 2;
    rows[3] = run_point(MapParams{3.5, 1.0}, NoiseParams{0.1}, 32, bad);
    REQUIRE_FALSE(rows[3].ok);

    const std::string path = temp_path("certs.txt");
    {
        std::ofstream os(path);
        for (const auto& r : rows) os << certificate_text(r);
    }
    auto recs = read_certificates(path);
    REQUIRE(recs.size() == 4u);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(recs[i].alpha == rows[i].alpha);
        CHECK(recs[i].sigma == rows[i].sigma);
        CHECK(recs[i].K == rows[i].K);
        CHECK(recs[i].N == rows[i].n_mix);
        CHECK(recs[i].C == rows[i].mixing);
    }
    CHECK(recs[3].C.empty());

    const std::string ppm = temp_path("heat.ppm");
    write_mixing_heatmap(recs, 2, 2, 1, ppm);
    const std::string data = slurp(ppm);
    const std::string head = "P6\n2 2\n255\n";
    REQUIRE(data.size() == head.size() + 12);
    // the failed record sits at x = 1, sigma row 1
    CHECK(data.substr(head.size() + 9, 3) == std::string(3, '\0'));
    CHECK(data.substr(head.size(), 3) != std::string(3, '\0'));
    CHECK_THROWS_AS(write_mixing_heatmap(recs, 3, 2, 1, ppm), DimensionError);
    CHECK_THROWS_AS(write_mixing_heatmap(recs, 2, 2, 0, ppm), DomainError);
    std::remove(ppm.c_str());

    std::ofstream(path) << "alpha 3\n";
    CHECK_THROWS_AS(read_certificates(path), IoError);
    std::ofstream(path) << "certificate\nalpha 3\n";
    CHECK_THROWS_AS(read_certificates(path), IoError);
    std::remove(path.c_str());
}

TEST_CASE("worker count and shared tables") {
    CHECK(worker_count() >= 1);
    const SineTable& a = shared_sine_table(64);
    const SineTable& b = shared_sine_table(100);
    CHECK(&a == &b);
    CHECK(a.size() >= 513u);
    CHECK(shared_sine_table(600).size() >= 601u);
}
