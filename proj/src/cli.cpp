#include "footeval/cli.hpp"

#include <charconv>
#include <fstream>
#include <ostream>

#include <CLI11.hpp>

#include "footeval/error.hpp"
#include "footeval/ingest.hpp"
#include "footeval/metrics.hpp"
#include "footeval/report.hpp"
#include "footeval/scene.hpp"
#include "footeval/tiling.hpp"

namespace footeval {

namespace fs = std::filesystem;

namespace {

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot write '" + path.string() + "'");
    f << content;
    if (!f) throw Error("failed writing '" + path.string() + "'");
}

void warn_diagnostics(const FeatureSet& set, const std::string& label, std::ostream& err) {
    for (const std::string& w : set.diagnostics.warnings) err << "warning: " << label << ": " << w << "\n";
}

std::size_t parse_count(const std::string& text) {
    std::size_t v = 0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc() || end != text.data() + text.size()) {
        throw ConfigError("'" + text + "' is not a non-negative integer");
    }
    return v;
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
    try {
        return fn();
    } catch (const UndefinedMetricError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUndefinedMetric;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
}

Rect padded_bounds(const FeatureSet& scene, double margin) {
    Rect box = bounding_box(scene.features.front().geometry);
    for (const Feature& f : scene.features) box = box.united(bounding_box(f.geometry));
    return box.expanded(margin);
}

}  // namespace

int cmd_evaluate(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        config.validate();
        FeatureSet pred = read_feature_file(config.pred_path, Source::prediction);
        FeatureSet gt = read_feature_file(config.gt_path, Source::ground_truth);
        warn_diagnostics(pred, config.pred_path.string(), err);
        warn_diagnostics(gt, config.gt_path.string(), err);

        ConfigEcho echo = pred.metadata;
        echo["prediction"] = config.pred_path.string();
        echo["ground_truth"] = config.gt_path.string();
        echo["criterion"] = config.criterion.to_string();
        if (config.boundary) {
            echo["boundary"] = format_rect(*config.boundary);
            pred = clip_to_boundary(pred, *config.boundary);
            gt = clip_to_boundary(gt, *config.boundary);
        }

        const MatchOutcome outcome = match_features(pred, gt, config.criterion, {config.threads});
        const MetricsReport report = report_from_counts(outcome.counts, std::move(echo));

        const bool planar = pred.crs_note == kPlanarCrsNote && gt.crs_note == kPlanarCrsNote;
        const std::string json_text = report_json(report);
        const std::string table = report_text(report);
        const std::string overlays =
            emit_overlays(pred, gt, outcome, planar ? CoordinateOutput::planar : CoordinateOutput::lonlat);

        fs::create_directories(config.out_dir);
        write_file(config.out_dir / "report.json", json_text);
        write_file(config.out_dir / "report.txt", table);
        write_file(config.out_dir / "overlays.geojson", overlays);
        out << table;
        return kExitOk;
    });
}

int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        config.validate();
        const FeatureSet scene = read_feature_file(config.scene_path, Source::ground_truth);
        warn_diagnostics(scene, config.scene_path.string(), err);

        RunConfig effective = config;
        if (!effective.extent) {
            if (scene.extent) {
                effective.extent = scene.extent;
            } else if (!scene.empty()) {
                const double margin = (config.noise.blob_size_max_px + 4) * config.tile.resolution_m();
                effective.extent = padded_bounds(scene, margin);
            }
        }

        FeatureSet predictions;
        predictions.source = Source::prediction;
        if (effective.extent) {
            const Segmenter segmenter =
                oracle_segmenter(scene, config.noise, *effective.extent, config.tile.resolution_m());
            predictions = run_pipeline(*effective.extent, segmenter, config.tile, {config.threads});
        }

        Settings manifest = effective.simulation_echo();
        manifest["scene"] = config.scene_path.string();
        manifest["building_count"] = std::to_string(predictions.size());
        manifest["scene_building_count"] = std::to_string(scene.size());
        manifest["tool_version"] = std::string(kToolVersion);

        const std::string geojson = emit_geojson(predictions, manifest);
        fs::create_directories(config.out_dir);
        write_file(config.out_dir / "predictions.geojson", geojson);
        write_file(config.out_dir / "manifest.txt", format_settings(manifest));
        out << "digitized " << predictions.size() << " buildings (resolution " << manifest["resolution_cm_per_px"]
            << " cm/px, overlap " << config.tile.overlap_percent << "%, min segment area "
            << manifest["min_segment_area_m2"] << " m2)\n";
        return kExitOk;
    });
}

int cmd_tally(const std::array<std::string, 4>& numbers, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const Counts counts = tally_counts(parse_count(numbers[0]), parse_count(numbers[1]), parse_count(numbers[2]),
                                           parse_count(numbers[3]));
        out << report_text(report_from_counts(counts));
        return kExitOk;
    });
}

namespace {

struct SceneArgs {
    std::string kind = "residential";
    std::size_t buildings = 320;
    std::uint64_t seed = 1;
    std::string format = "geojson";
    fs::path out;
    TileConfig tile;
};

int cmd_scene(const SceneArgs& args, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        FeatureSet scene;
        if (args.kind == "residential") {
            scene = make_residential_scene(args.buildings, args.seed);
        } else if (args.kind == "straddle") {
            scene = make_straddle_scene(args.tile).scene;
        } else {
            throw ConfigError("unknown scene kind '" + args.kind + "'");
        }
        std::string text;
        if (args.format == "geojson") {
            text = emit_geojson(scene);
        } else if (args.format == "osm") {
            text = emit_osm_xml(scene);
        } else {
            throw ConfigError("unknown scene format '" + args.format + "'");
        }
        if (args.out.has_parent_path()) fs::create_directories(args.out.parent_path());
        write_file(args.out, text);
        out << "wrote " << scene.size() << " buildings to " << args.out.string() << "\n";
        return kExitOk;
    });
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Evaluate and simulate automated building-footprint digitization"};
    app.require_subcommand(1);

    RunConfig evaluate_cfg;
    evaluate_cfg.mode = Mode::evaluate;
    std::string criterion_text = "any-overlap";
    std::string boundary_text;
    auto* evaluate = app.add_subcommand("evaluate", "Match predictions against ground truth and report F1");
    evaluate->add_option("--pred", evaluate_cfg.pred_path, "Prediction file (GeoJSON or OSM XML)")->required();
    evaluate->add_option("--gt", evaluate_cfg.gt_path, "Ground-truth file (GeoJSON or OSM XML)")->required();
    evaluate->add_option("--boundary", boundary_text, "Analysis area minx,miny,maxx,maxy in planar meters");
    evaluate->add_option("--criterion", criterion_text, "any-overlap or iou:<tau>");
    evaluate->add_option("--threads", evaluate_cfg.threads, "Worker threads (0 = all cores)");
    evaluate->add_option("--out", evaluate_cfg.out_dir, "Output directory")->required();

    std::string simulate_config;
    fs::path scene_path, simulate_out;
    Settings overrides;
    auto* simulate = app.add_subcommand("simulate", "Run the tiled segmentation simulator over a scene");
    simulate->add_option("--scene", scene_path, "Scene file (GeoJSON or OSM XML)")->required();
    simulate->add_option("--config", simulate_config, "key = value run configuration");
    simulate->add_option("--out", simulate_out, "Output directory")->required();
    for (const std::string& key : RunConfig::keys()) {
        if (key == "scene" || key == "out" || key == "pred" || key == "gt" || key == "boundary") continue;
        simulate->add_option_function<std::string>(
            "--" + key, [&overrides, key](const std::string& v) { overrides[key] = v; }, "Overrides '" + key + "'");
    }

    std::array<std::string, 4> tally_args;
    auto* tally = app.add_subcommand("tally", "Metrics from n_gt n_pred n_gt_matched n_pred_matched");
    tally->add_option("n_gt", tally_args[0])->required();
    tally->add_option("n_pred", tally_args[1])->required();
    tally->add_option("n_gt_matched", tally_args[2])->required();
    tally->add_option("n_pred_matched", tally_args[3])->required();

    SceneArgs scene_args;
    auto* scene = app.add_subcommand("scene", "Write a generated ground-truth scene");
    scene->add_option("--kind", scene_args.kind, "residential or straddle");
    scene->add_option("--buildings", scene_args.buildings, "Number of houses (residential)");
    scene->add_option("--seed", scene_args.seed, "Layout seed (residential)");
    scene->add_option("--format", scene_args.format, "geojson or osm");
    scene->add_option("--resolution_cm_per_px", scene_args.tile.resolution_cm_per_px, "Pixel size (straddle)");
    scene->add_option("--tile_size_px", scene_args.tile.tile_size_px, "Tile size (straddle)");
    scene->add_option("--out", scene_args.out, "Output file")->required();

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const std::string& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return kExitInputError;
    }

    if (evaluate->parsed()) {
        return guarded(err, [&] {
            evaluate_cfg.criterion = MatchCriterion::parse(criterion_text);
            if (!boundary_text.empty()) evaluate_cfg.boundary = parse_rect(boundary_text);
            return cmd_evaluate(evaluate_cfg, out, err);
        });
    }
    if (simulate->parsed()) {
        return guarded(err, [&] {
            RunConfig cfg;
            cfg.mode = Mode::simulate;
            if (!simulate_config.empty()) cfg.apply(read_settings_file(simulate_config));
            cfg.apply(overrides);
            cfg.scene_path = scene_path;
            cfg.out_dir = simulate_out;
            return cmd_simulate(cfg, out, err);
        });
    }
    if (tally->parsed()) return cmd_tally(tally_args, out, err);
    return cmd_scene(scene_args, out, err);
}

}  // namespace footeval
