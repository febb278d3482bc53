#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "footeval/cli.hpp"
#include "footeval/config.hpp"
#include "footeval/error.hpp"
#include "footeval/report.hpp"
#include "footeval/scene.hpp"

using namespace footeval;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args) {
    args.insert(args.begin(), "footeval");
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("footeval-test-" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

}  // namespace

TEST_CASE("format_percent rounds half up") {
    CHECK(format_percent(0.84505) == "84.51");
    CHECK(format_percent(319.0 / 435.0) == "73.33");
    CHECK(format_percent(1.0) == "100.00");
    CHECK(format_percent(0.0) == "0.00");
    CHECK(format_percent(0.00004) == "0.00");
    CHECK(format_percent(0.00005) == "0.01");
}

TEST_CASE("report text is shaped like the results table") {
    const std::string t = report_text(report_from_counts(tally_counts(320, 604, 319, 488), {{"seed", "3"}}));
    CHECK(t.find("True Positive                          319 buildings") != std::string::npos);
    CHECK(t.find("False Positive                         116 buildings") != std::string::npos);
    CHECK(t.find("False Negative                         1 building\n") != std::string::npos);
    CHECK(t.find("Precision                              73.33 %") != std::string::npos);
    CHECK(t.find("Recall                                 99.69 %") != std::string::npos);
    CHECK(t.find("F1-score                               84.50 %") != std::string::npos);
    CHECK(t.find("# seed = 3") != std::string::npos);
}

TEST_CASE("report json agrees with report text") {
    const MetricsReport r = report_from_counts(tally_counts(320, 498, 320, 402));
    const auto doc = nlohmann::json::parse(report_json(r));
    CHECK(doc["counts"]["tp"] == 320);
    CHECK(doc["counts"]["fp"] == 96);
    CHECK(doc["counts"]["fn"] == 0);
    CHECK(doc["counts"]["n_pred_matched"] == 402);
    CHECK(doc["tool_version"] == "1.0.0");
    const std::string text = report_text(r);
    for (const char* key : {"precision", "recall", "f1"}) {
        CHECK(text.find(format_percent(doc[key].get<double>()) + " %") != std::string::npos);
    }
}

TEST_CASE("overlay statuses match the counts") {
    const auto [pred, gt] = make_count_fixture(20, 30, 15, 22);
    const MatchOutcome m = match_features(pred, gt, MatchCriterion::any_overlap());
    const auto doc = nlohmann::json::parse(emit_overlays(pred, gt, m, CoordinateOutput::planar));
    REQUIRE(doc["features"].size() == 50);
    std::map<std::string, std::size_t> tally;
    for (const auto& f : doc["features"]) ++tally[f["properties"]["status"].get<std::string>()];
    CHECK(tally["tp-detected"] == 15);
    CHECK(tally["fn-missed"] == 5);
    CHECK(tally["fp-spurious"] == 8);
    CHECK(tally["matched"] == 22);
}

TEST_CASE("settings parsing") {
    const Settings s = parse_settings("# run\noverlap_percent = 12\n\n seed=4  # trailing\n");
    CHECK(s.at("overlap_percent") == "12");
    CHECK(s.at("seed") == "4");
    CHECK_THROWS_AS(parse_settings("seed = 1\nseed = 2\n"), ConfigError);
    CHECK_THROWS_AS(parse_settings("just words\n"), ConfigError);
    CHECK(parse_settings(format_settings(s)) == s);

    RunConfig cfg;
    cfg.apply({{"overlap_percent", "12"}, {"blob_size_px", "3,5"}, {"criterion", "iou:0.5"}, {"extent", "0,0,10,20"}});
    CHECK(cfg.tile.overlap_percent == 12);
    CHECK(cfg.noise.blob_size_min_px == 3);
    CHECK(cfg.noise.blob_size_max_px == 5);
    CHECK(cfg.criterion.tau() == 0.5);
    CHECK(cfg.extent == Rect{0, 0, 10, 20});
    CHECK_THROWS_AS(cfg.apply({{"no_such_key", "1"}}), ConfigError);
    CHECK_THROWS_AS(cfg.apply({{"tile_size_px", "big"}}), ConfigError);
    CHECK_THROWS_AS(parse_rect("1,2,3"), ConfigError);
}

TEST_CASE("cli tally") {
    Run r = cli({"tally", "320", "604", "319", "488"});
    CHECK(r.code == kExitOk);
    CHECK(r.out.find("F1-score                               84.50 %") != std::string::npos);
    r = cli({"tally", "320", "498", "320", "402"});
    CHECK(r.out.find("F1-score                               86.96 %") != std::string::npos);
    r = cli({"tally", "10", "10", "10", "10"});
    CHECK(r.out.find("Precision                              100.00 %") != std::string::npos);
    CHECK(r.out.find("Recall                                 100.00 %") != std::string::npos);
    CHECK(cli({"tally", "10", "10", "11", "10"}).code == kExitInputError);
    CHECK(cli({"tally", "10", "x", "1", "1"}).code == kExitInputError);
    CHECK(cli({"tally", "0", "0", "0", "0"}).code == kExitUndefinedMetric);
    CHECK(cli({"tally", "1", "2"}).code == kExitInputError);
}

TEST_CASE("cli evaluate") {
    const fs::path dir = scratch("evaluate");
    const auto [pred, gt] = make_count_fixture(320, 604, 319, 488);
    write(dir / "pred.geojson", emit_geojson(pred));
    write(dir / "gt.geojson", emit_geojson(gt));

    Run r = cli({"evaluate", "--pred", (dir / "pred.geojson").string(), "--gt", (dir / "gt.geojson").string(), "--out",
                 (dir / "out").string()});
    REQUIRE(r.code == kExitOk);
    const std::string txt = slurp(dir / "out" / "report.txt");
    CHECK(txt == r.out);
    CHECK(txt.find("73.33 %") != std::string::npos);
    CHECK(txt.find("99.69 %") != std::string::npos);
    CHECK(txt.find("84.50 %") != std::string::npos);
    const auto report = nlohmann::json::parse(slurp(dir / "out" / "report.json"));
    CHECK(report["counts"]["fp"] == 116);
    CHECK(report["config_echo"]["criterion"] == "any-overlap");
    const auto overlays = nlohmann::json::parse(slurp(dir / "out" / "overlays.geojson"));
    CHECK(overlays["features"].size() == 604 + 320);
    CHECK(overlays["crs_note"] == "planar-meters");

    r = cli({"evaluate", "--pred", (dir / "gt.geojson").string(), "--gt", (dir / "gt.geojson").string(), "--out",
             (dir / "same").string()});
    CHECK(r.code == kExitOk);
    CHECK(r.out.find("F1-score                               100.00 %") != std::string::npos);

    r = cli({"evaluate", "--pred", (dir / "pred.geojson").string(), "--gt", (dir / "gt.geojson").string(),
             "--boundary", "-1,-1,100,100", "--criterion", "iou:0.9", "--out", (dir / "clipped").string()});
    CHECK(r.code == kExitOk);
    CHECK(r.out.find("# boundary = -1,-1,100,100") != std::string::npos);
    CHECK(r.out.find("# criterion = iou:0.9") != std::string::npos);
}

TEST_CASE("cli evaluate failures") {
    const fs::path dir = scratch("evaluate-fail");
    const auto [pred, gt] = make_count_fixture(3, 0, 0, 0);
    write(dir / "gt.geojson", emit_geojson(gt));
    write(dir / "pred.geojson", emit_geojson(pred));
    write(dir / "broken.geojson", "{\"type\": \"FeatureCollection\", \"features\": [");

    Run r = cli({"evaluate", "--pred", (dir / "missing.geojson").string(), "--gt", (dir / "gt.geojson").string(),
                 "--out", (dir / "a").string()});
    CHECK(r.code == kExitInputError);
    CHECK_FALSE(fs::exists(dir / "a"));

    r = cli({"evaluate", "--pred", (dir / "broken.geojson").string(), "--gt", (dir / "gt.geojson").string(), "--out",
             (dir / "b").string()});
    CHECK(r.code == kExitInputError);
    CHECK(r.err.find("line") != std::string::npos);
    CHECK_FALSE(fs::exists(dir / "b"));

    r = cli({"evaluate", "--pred", (dir / "pred.geojson").string(), "--gt", (dir / "gt.geojson").string(), "--out",
             (dir / "c").string()});
    CHECK(r.code == kExitUndefinedMetric);
    CHECK(r.err.find("precision") != std::string::npos);
    CHECK_FALSE(fs::exists(dir / "c"));

    CHECK(cli({"evaluate", "--pred", "x", "--gt", "y", "--criterion", "iou:2", "--out", (dir / "d").string()}).code ==
          kExitInputError);
}

TEST_CASE("cli simulate then evaluate") {
    const fs::path dir = scratch("simulate");
    REQUIRE(cli({"scene", "--kind", "residential", "--buildings", "320", "--seed", "7", "--out",
                 (dir / "scene.geojson").string()})
                .code == kExitOk);
    write(dir / "run.cfg", "tile_size_px = 128\noverlap_percent = 0\nn_spurious = 116\nn_omit = 1\nseed = 3\n");
    Run r = cli({"simulate", "--scene", (dir / "scene.geojson").string(), "--config", (dir / "run.cfg").string(),
                 "--overlap_percent", "12", "--out", (dir / "sim").string()});
    REQUIRE(r.code == kExitOk);
    const Settings manifest = read_settings_file(dir / "sim" / "manifest.txt");
    CHECK(manifest.at("overlap_percent") == "12");
    CHECK(manifest.at("resolution_cm_per_px") == "300");
    CHECK(manifest.at("min_segment_area_m2") == "0");
    CHECK(manifest.at("seed") == "3");
    CHECK(manifest.at("building_count") == "435");

    r = cli({"evaluate", "--pred", (dir / "sim" / "predictions.geojson").string(), "--gt",
             (dir / "scene.geojson").string(), "--out", (dir / "eval").string()});
    REQUIRE(r.code == kExitOk);
    const auto report = nlohmann::json::parse(slurp(dir / "eval" / "report.json"));
    CHECK(report["counts"]["tp"] == 319);
    CHECK(report["counts"]["fp"] == 116);
    CHECK(report["counts"]["fn"] == 1);
    CHECK(report["config_echo"]["overlap_percent"] == "12");
}

TEST_CASE("cli simulate edge cases") {
    const fs::path dir = scratch("simulate-edge");
    write(dir / "empty.geojson", R"({"type":"FeatureCollection","crs_note":"planar-meters","features":[]})");
    Run r = cli({"simulate", "--scene", (dir / "empty.geojson").string(), "--out", (dir / "out").string()});
    CHECK(r.code == kExitOk);
    const auto doc = nlohmann::json::parse(slurp(dir / "out" / "predictions.geojson"));
    CHECK(doc["features"].empty());

    r = cli({"simulate", "--scene", (dir / "empty.geojson").string(), "--overlap_percent", "100", "--out",
             (dir / "bad").string()});
    CHECK(r.code == kExitInputError);
    CHECK_FALSE(fs::exists(dir / "bad"));

    write(dir / "bad.cfg", "overlap_percent = 12\ntile_size_px = -4\n");
    r = cli({"simulate", "--scene", (dir / "empty.geojson").string(), "--config", (dir / "bad.cfg").string(), "--out",
             (dir / "bad2").string()});
    CHECK(r.code == kExitInputError);
}

TEST_CASE("cli scene in OSM format round trips through simulate") {
    const fs::path dir = scratch("osm");
    REQUIRE(cli({"scene", "--buildings", "25", "--format", "osm", "--out", (dir / "scene.osm").string()}).code ==
            kExitOk);
    const FeatureSet fs = read_feature_file(dir / "scene.osm", Source::ground_truth);
    CHECK(fs.size() == 25);
    const Run r = cli({"simulate", "--scene", (dir / "scene.osm").string(), "--tile_size_px", "64", "--overlap_percent",
                       "12", "--out", (dir / "sim").string()});
    CHECK(r.code == kExitOk);
    CHECK(read_settings_file(dir / "sim" / "manifest.txt").at("building_count") == "25");
}

TEST_CASE("simulated runs reproduce both four-count rows") {
    const fs::path dir = scratch("count-rows");
    REQUIRE(cli({"scene", "--buildings", "320", "--seed", "7", "--out", (dir / "scene.geojson").string()}).code ==
            kExitOk);
    struct Row {
        const char* spurious;
        const char* split;
        const char* omit;
        int n_pred, n_gt_matched, n_pred_matched;
    };
    for (const Row& row : {Row{"116", "169", "1", 604, 319, 488}, Row{"96", "82", "0", 498, 320, 402}}) {
        const fs::path sim = dir / (std::string("sim-") + row.split);
        REQUIRE(cli({"simulate", "--scene", (dir / "scene.geojson").string(), "--tile_size_px", "128",
                     "--overlap_percent", "12", "--n_spurious", row.spurious, "--n_split", row.split, "--n_omit",
                     row.omit, "--seed", "3", "--out", sim.string()})
                    .code == kExitOk);
        REQUIRE(cli({"evaluate", "--pred", (sim / "predictions.geojson").string(), "--gt",
                     (dir / "scene.geojson").string(), "--out", (sim / "eval").string()})
                    .code == kExitOk);
        const auto c = nlohmann::json::parse(slurp(sim / "eval" / "report.json"))["counts"];
        CHECK(c["n_gt"] == 320);
        CHECK(c["n_pred"] == row.n_pred);
        CHECK(c["n_gt_matched"] == row.n_gt_matched);
        CHECK(c["n_pred_matched"] == row.n_pred_matched);
    }
}
