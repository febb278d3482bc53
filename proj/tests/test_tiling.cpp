#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "footeval/error.hpp"
#include "footeval/scene.hpp"
#include "footeval/tiling.hpp"

using namespace footeval;

namespace {

// 4-connected components by flood fill.
std::size_t count_components(const BinaryMask& m) {
    std::vector<char> seen(static_cast<std::size_t>(m.width() * m.height()), 0);
    std::size_t n = 0;
    for (int r = 0; r < m.height(); ++r) {
        for (int c = 0; c < m.width(); ++c) {
            if (!m.at(c, r) || seen[static_cast<std::size_t>(r * m.width() + c)]) continue;
            ++n;
            std::vector<std::pair<int, int>> stack{{c, r}};
            seen[static_cast<std::size_t>(r * m.width() + c)] = 1;
            while (!stack.empty()) {
                auto [x, y] = stack.back();
                stack.pop_back();
                const int dx[] = {1, -1, 0, 0}, dy[] = {0, 0, 1, -1};
                for (int k = 0; k < 4; ++k) {
                    const int nx = x + dx[k], ny = y + dy[k];
                    if (nx < 0 || ny < 0 || nx >= m.width() || ny >= m.height()) continue;
                    auto& s = seen[static_cast<std::size_t>(ny * m.width() + nx)];
                    if (s || !m.at(nx, ny)) continue;
                    s = 1;
                    stack.push_back({nx, ny});
                }
            }
        }
    }
    return n;
}

double total_area(const std::vector<Polygon>& polys) {
    double a = 0;
    for (const Polygon& p : polys) a += polygon_area(p);
    return a;
}

BinaryMask from_rows(std::vector<std::string> rows, double res = 1.0) {
    // First string is the top (north) row.
    const int h = static_cast<int>(rows.size()), w = static_cast<int>(rows[0].size());
    BinaryMask m(w, h, {0, 0}, res);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) m.set(c, h - 1 - r, rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] == '#');
    }
    return m;
}

}  // namespace

TEST_CASE("stride and config validation") {
    TileConfig cfg;
    CHECK(cfg.stride_px() == 512);
    cfg.overlap_percent = 12;
    CHECK(cfg.stride_px() == 451);
    cfg.overlap_percent = 50;
    CHECK(cfg.stride_px() == 256);
    cfg.overlap_percent = 100;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = TileConfig{};
    cfg.resolution_cm_per_px = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = TileConfig{};
    cfg.min_segment_area_m2 = -1;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("plan_tiles examples") {
    TileConfig cfg;
    const double side = 1024 * cfg.resolution_m();
    CHECK(plan_tiles({0, 0, side, side}, cfg).tiles.size() == 4);
    cfg.overlap_percent = 50;
    const TileGrid g = plan_tiles({0, 0, side, side}, cfg);
    CHECK(g.cols == 3);
    CHECK(g.rows == 3);
    CHECK(g.tiles.size() == 9);
    cfg.overlap_percent = 0;
    const double one = 512 * cfg.resolution_m();
    const TileGrid single = plan_tiles({10, 20, 10 + one, 20 + one}, cfg);
    REQUIRE(single.tiles.size() == 1);
    CHECK(single.tiles[0].world == Rect{10, 20, 10 + one, 20 + one});
}

TEST_CASE("extent smaller than one tile gives a single tile") {
    TileConfig cfg;
    const TileGrid g = plan_tiles({0, 0, 100, 50}, cfg);
    REQUIRE(g.tiles.size() == 1);
    CHECK(g.tiles[0].world.contains({100, 50}));
}

TEST_CASE("tiles cover the extent for random configurations") {
    std::mt19937_64 gen(2);
    std::uniform_int_distribution<int> tile(16, 300), overlap(0, 90);
    std::uniform_real_distribution<double> res(10, 500), size(1, 6), u(0, 1);
    for (int i = 0; i < 200; ++i) {
        TileConfig cfg;
        cfg.tile_size_px = tile(gen);
        cfg.overlap_percent = overlap(gen);
        cfg.resolution_cm_per_px = res(gen);
        const double t = cfg.tile_size_px * cfg.resolution_m();
        const Rect extent{1000, -500, 1000 + size(gen) * t, -500 + size(gen) * t};
        const TileGrid g = plan_tiles(extent, cfg);
        CHECK(g.tiles.size() == static_cast<std::size_t>(g.cols * g.rows));
        for (const Tile& tl : g.tiles) {
            CHECK(tl.world.min_x >= extent.min_x - 1e-9);
            CHECK(tl.world.max_x <= extent.max_x + 1e-6);
            CHECK(tl.world.min_y >= extent.min_y - 1e-9);
            CHECK(tl.world.max_y <= extent.max_y + 1e-6);
        }
        for (int k = 0; k < 300; ++k) {
            const Coordinate p{extent.min_x + u(gen) * extent.width(), extent.min_y + u(gen) * extent.height()};
            CHECK(std::any_of(g.tiles.begin(), g.tiles.end(), [&](const Tile& tl) { return tl.world.contains(p); }));
        }
        // All but the last column step by exactly one stride.
        for (int c = 1; c + 1 < g.cols; ++c) {
            CHECK(g.tiles[static_cast<std::size_t>(c)].pixel_col - g.tiles[static_cast<std::size_t>(c - 1)].pixel_col ==
                  cfg.stride_px());
        }
    }
}

TEST_CASE("polygonize examples") {
    BinaryMask empty(8, 8, {0, 0}, 3.0);
    CHECK(polygonize(empty).empty());

    BinaryMask block(20, 20, {100, 200}, 3.0);
    for (int r = 5; r < 15; ++r)
        for (int c = 2; c < 12; ++c) block.set(c, r);
    const auto one = polygonize(block);
    REQUIRE(one.size() == 1);
    CHECK(polygon_area(one[0]) == doctest::Approx(900.0));
    CHECK(bounding_box(one[0]) == Rect{106, 215, 136, 245});

    const auto two = polygonize(from_rows({"##.##", "##.##"}));
    CHECK(two.size() == 2);
    const auto diagonal = polygonize(from_rows({"#.", ".#"}));
    CHECK(diagonal.size() == 2);
}

TEST_CASE("polygonize keeps holes") {
    const auto polys = polygonize(from_rows({"#####", "#...#", "#.#.#", "#...#", "#####"}));
    REQUIRE(polys.size() == 2);
    const Polygon& ring = polygon_area(polys[0]) > polygon_area(polys[1]) ? polys[0] : polys[1];
    CHECK(ring.holes().size() == 1);
    CHECK(polygon_area(ring) == doctest::Approx(16.0));
    CHECK(total_area(polys) == doctest::Approx(17.0));
}

TEST_CASE("polygonize handles pinch vertices") {
    const auto polys = polygonize(from_rows({"##.", "#.#", "###"}));
    REQUIRE(polys.size() == 1);
    CHECK(polygon_area(polys[0]) == doctest::Approx(7.0).epsilon(1e-4));
}

TEST_CASE("polygonize matches a flood-fill component count on random masks") {
    std::mt19937_64 gen(4);
    std::bernoulli_distribution on(0.45);
    for (int i = 0; i < 200; ++i) {
        BinaryMask m(17, 13, {-50, 30}, 0.5);
        for (int r = 0; r < 13; ++r)
            for (int c = 0; c < 17; ++c) m.set(c, r, on(gen));
        const auto polys = polygonize(m);
        CHECK(polys.size() == count_components(m));
        CHECK(total_area(polys) == doctest::Approx(static_cast<double>(m.count()) * 0.25).epsilon(1e-3));
    }
}

TEST_CASE("pinched masks stay valid at projected coordinates") {
    std::mt19937_64 gen(14);
    std::bernoulli_distribution on(0.5);
    const Coordinate origin = default_scene_origin();
    for (int i = 0; i < 100; ++i) {
        BinaryMask m(24, 24, origin, 3.0);
        for (int r = 0; r < 24; ++r)
            for (int c = 0; c < 24; ++c) m.set(c, r, on(gen));
        const auto polys = polygonize(m);
        CHECK(polys.size() == count_components(m));
        CHECK(total_area(polys) == doctest::Approx(static_cast<double>(m.count()) * 9.0).epsilon(1e-6));
    }
}

TEST_CASE("rasterize samples pixel centers") {
    BinaryMask m(10, 10, {0, 0}, 1.0);
    rasterize(rectangle({2, 3, 5, 4}), m);
    CHECK(m.count() == 3);
    CHECK(m.at(2, 3));
    CHECK(m.at(4, 3));
    CHECK_FALSE(m.at(5, 3));
    BinaryMask t(10, 10, {0, 0}, 1.0);
    rasterize(Polygon(Ring({{0, 0}, {10, 0}, {0, 10}})), t);
    CHECK(t.count() == 45);
}

TEST_CASE("rasterize then polygonize on pixel-aligned rectangles") {
    std::mt19937_64 gen(6);
    std::uniform_int_distribution<int> side(10, 60), pos(0, 30);
    for (int i = 0; i < 50; ++i) {
        const double res = 0.3;
        const int w = side(gen), h = side(gen), x = pos(gen), y = pos(gen);
        const Polygon rect = rectangle({x * res, y * res, (x + w) * res, (y + h) * res});
        BinaryMask m(100, 100, {0, 0}, res);
        rasterize(rect, m);
        const auto polys = polygonize(m);
        REQUIRE(polys.size() == 1);
        CHECK(iou(polys[0], rect) >= 0.95);
        CHECK(polygon_area(polys[0]) == doctest::Approx(polygon_area(rect)).epsilon(0.05));
    }
}

TEST_CASE("round trip on arbitrary rectangles stays within the half-pixel bound") {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> side(10, 60), pos(0, 30);
    for (int i = 0; i < 200; ++i) {
        const double w = side(gen), h = side(gen), x = pos(gen), y = pos(gen);
        const Polygon rect = rectangle({x, y, x + w, y + h});
        BinaryMask m(100, 100, {0, 0}, 1.0);
        rasterize(rect, m);
        const auto polys = polygonize(m);
        REQUIRE(polys.size() == 1);
        // Every edge moves by at most half a pixel.
        CHECK(iou(polys[0], rect) >= (w - 1) * (h - 1) / ((w + 1) * (h + 1)) - 1e-12);
    }
}

TEST_CASE("merge_across_tiles examples") {
    const MergeOptions opt{1.0, {0, 0}};
    const Polygon sq = rectangle({2, 2, 6, 6});
    CHECK(merge_across_tiles({{"c0_r0", sq}, {"c1_r0", sq}}, opt).size() == 1);
    CHECK(merge_across_tiles({{"c0_r0", rectangle({0, 0, 4, 4})}, {"c1_r0", rectangle({4, 0, 8, 4})}}, opt).size() == 2);

    const Polygon left = rectangle({2, 2, 9, 6}), right = rectangle({7, 2, 12, 6});
    const auto merged = merge_across_tiles({{"c0_r0", left}, {"c1_r0", right}}, opt);
    REQUIRE(merged.size() == 1);
    CHECK(polygon_area(merged[0]) >= polygon_area(left));
    CHECK(polygon_area(merged[0]) == doctest::Approx(40.0));
    CHECK(merge_across_tiles({}, opt).empty());
}

TEST_CASE("merge is idempotent and conserves area") {
    std::mt19937_64 gen(10);
    std::uniform_int_distribution<int> pos(0, 80), side(2, 12);
    for (int round = 0; round < 20; ++round) {
        std::vector<TilePolygon> pieces;
        BinaryMask all(100, 100, {0, 0}, 1.0);
        for (int i = 0; i < 40; ++i) {
            const int x = pos(gen), y = pos(gen);
            const Polygon p = rectangle({double(x), double(y), double(x + side(gen)), double(y + side(gen))});
            rasterize(p, all);
            pieces.push_back({"t" + std::to_string(i % 4), p});
        }
        const MergeOptions opt{1.0, {0, 0}};
        const auto once = merge_across_tiles(pieces, opt);
        std::vector<TilePolygon> again;
        for (const Polygon& p : once) again.push_back({"m", p});
        const auto twice = merge_across_tiles(again, opt);
        REQUIRE(twice.size() == once.size());
        for (std::size_t i = 0; i < once.size(); ++i) {
            CHECK(bounding_box(twice[i]) == bounding_box(once[i]));
            CHECK(polygon_area(twice[i]) == doctest::Approx(polygon_area(once[i])));
        }
        CHECK(total_area(once) == doctest::Approx(static_cast<double>(all.count())).epsilon(0.01));
    }
}

TEST_CASE("filter_small_segments") {
    const std::vector<Polygon> polys{rectangle({0, 0, 2, 2}), rectangle({10, 0, 15, 5}), rectangle({20, 0, 30, 10})};
    CHECK(filter_small_segments(polys, 0).size() == 3);
    CHECK(filter_small_segments(polys, 1000).empty());
    const auto kept = filter_small_segments(polys, 10);
    REQUIRE(kept.size() == 2);
    CHECK(polygon_area(kept[0]) == doctest::Approx(25.0));
    CHECK(polygon_area(kept[1]) == doctest::Approx(100.0));

    std::mt19937_64 gen(12);
    std::uniform_real_distribution<double> s(0.5, 20), thr(0, 300);
    std::vector<Polygon> random;
    for (int i = 0; i < 100; ++i) random.push_back(rectangle({0, 0, s(gen), s(gen)}));
    for (int k = 0; k < 20; ++k) {
        const double t = thr(gen);
        const auto n = std::count_if(random.begin(), random.end(), [&](const Polygon& p) { return polygon_area(p) >= t; });
        CHECK(filter_small_segments(random, t).size() == static_cast<std::size_t>(n));
    }
}

TEST_CASE("oracle segmenter without noise is a clean rasterization") {
    const FeatureSet scene = make_residential_scene(40, 3);
    const Rect extent = *scene.extent;
    const Segmenter seg = oracle_segmenter(scene, {}, extent, 3.0);
    const Rect window{extent.min_x + 30, extent.min_y + 45, extent.min_x + 30 + 64 * 3.0, extent.min_y + 45 + 64 * 3.0};
    BinaryMask expected(64, 64, {window.min_x, window.min_y}, 3.0);
    for (const Feature& f : scene.features) rasterize(f.geometry, expected);
    CHECK(seg(window, 64, 64) == expected);
    CHECK(expected.count() > 0);

    NoiseSpec omit_all;
    omit_all.n_omit = scene.size();
    CHECK(oracle_segmenter(scene, omit_all, extent, 3.0)(window, 64, 64).count() == 0);
}

TEST_CASE("noise plans are seeded and keep blobs clear of buildings") {
    const FeatureSet scene = make_residential_scene(100, 5);
    NoiseSpec noise;
    noise.n_spurious = 30;
    noise.n_split = 20;
    noise.n_omit = 5;
    noise.seed = 77;
    const NoisePlan a = plan_noise(scene, noise, *scene.extent, 3.0);
    const NoisePlan b = plan_noise(scene, noise, *scene.extent, 3.0);
    CHECK(a.omitted == b.omitted);
    CHECK(a.blobs == b.blobs);
    CHECK(a.omitted.size() == 5);
    CHECK(a.splits.size() == 20);
    REQUIRE(a.blobs.size() == 30);
    for (const Rect& blob : a.blobs) {
        for (const Feature& f : scene.features) CHECK_FALSE(blob.intersects(bounding_box(f.geometry)));
    }
    for (const SplitLine& s : a.splits) {
        CHECK(std::find(a.omitted.begin(), a.omitted.end(), s.building) == a.omitted.end());
    }
    noise.n_split = 200;
    CHECK_THROWS_AS(plan_noise(scene, noise, *scene.extent, 3.0), ConfigError);
}

TEST_CASE("pipeline round trip of a single building") {
    FeatureSet scene;
    scene.features.push_back({"b", rectangle({30, 30, 90, 75}), Source::ground_truth, {}});
    TileConfig cfg;
    cfg.tile_size_px = 64;
    const Rect extent{0, 0, 64 * 3.0, 64 * 3.0};
    const FeatureSet out = run_pipeline(extent, oracle_segmenter(scene, {}, extent, 3.0), cfg);
    REQUIRE(out.size() == 1);
    CHECK(out.source == Source::prediction);
    CHECK(out.features[0].id == "pred-00001");
    CHECK(iou(out.features[0].geometry, scene.features[0].geometry) >= 0.95);
}

TEST_CASE("straddle scene counts fall as overlap rises") {
    TileConfig cfg;
    cfg.tile_size_px = 128;
    const StraddleScene s = make_straddle_scene(cfg);
    const Rect extent = *s.scene.extent;
    std::vector<std::size_t> counts;
    for (int ov : {0, 12, 25}) {
        cfg.overlap_percent = ov;
        counts.push_back(run_pipeline(extent, oracle_segmenter(s.scene, {}, extent, 3.0), cfg).size());
    }
    CHECK(counts[0] == 2 * s.single_seam + 4 * s.seam_crossing + s.interior);
    CHECK(counts[1] == s.scene.size());
    CHECK(counts[2] == s.scene.size());
    CHECK(counts[0] > counts[1]);
    CHECK(counts[1] >= counts[2]);
}

TEST_CASE("splits add one piece per split building") {
    const FeatureSet scene = make_residential_scene(120, 8);
    TileConfig cfg;
    cfg.tile_size_px = 128;
    cfg.overlap_percent = 12;
    NoiseSpec noise;
    noise.n_split = 40;
    noise.n_omit = 3;
    noise.n_spurious = 10;
    noise.seed = 5;
    const FeatureSet out = run_pipeline(*scene.extent, oracle_segmenter(scene, noise, *scene.extent, 3.0), cfg);
    CHECK(out.size() == 120 - 3 + 40 + 10);
}

TEST_CASE("pipeline edge cases") {
    TileConfig cfg;
    cfg.tile_size_px = 64;
    const Rect extent{0, 0, 500, 400};
    CHECK(run_pipeline(extent, oracle_segmenter(FeatureSet{}, {}, extent, 3.0), cfg).empty());

    const Segmenter broken = [](const Rect& w, int, int) -> BinaryMask {
        if (w.min_x > 100) throw std::runtime_error("model crashed");
        return BinaryMask(64, 64, {w.min_x, w.min_y}, 3.0);
    };
    try {
        run_pipeline(extent, broken, cfg, {1});
        FAIL("expected a segmenter error");
    } catch (const SegmenterError& e) {
        CHECK(e.tile_id() == "c1_r0");
        CHECK(std::string(e.what()).find("model crashed") != std::string::npos);
    }
}

TEST_CASE("small segment filter inside the pipeline") {
    const FeatureSet scene = make_residential_scene(30, 2);
    TileConfig cfg;
    cfg.tile_size_px = 64;
    NoiseSpec noise;
    cfg.overlap_percent = 12;
    noise.n_spurious = 12;
    noise.seed = 3;
    const Segmenter seg = oracle_segmenter(scene, noise, *scene.extent, 3.0);
    CHECK(run_pipeline(*scene.extent, seg, cfg).size() == 42);
    cfg.min_segment_area_m2 = 50;  // blobs are at most 4x4 px = 144 m2, houses at least 100 m2
    const FeatureSet filtered = run_pipeline(*scene.extent, seg, cfg);
    for (const Feature& f : filtered.features) CHECK(polygon_area(f.geometry) >= 50);
}

TEST_CASE("thread count does not change the result") {
    const FeatureSet scene = make_residential_scene(80, 4);
    TileConfig cfg;
    cfg.tile_size_px = 64;
    cfg.overlap_percent = 12;
    NoiseSpec noise;
    noise.n_split = 10;
    noise.n_spurious = 15;
    noise.seed = 9;
    const Segmenter seg = oracle_segmenter(scene, noise, *scene.extent, 3.0);
    const FeatureSet a = run_pipeline(*scene.extent, seg, cfg, {1});
    const FeatureSet b = run_pipeline(*scene.extent, seg, cfg, {4});
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a.features[i].id == b.features[i].id);
        CHECK(std::ranges::equal(a.features[i].geometry.outer().vertices(), b.features[i].geometry.outer().vertices()));
    }
}
