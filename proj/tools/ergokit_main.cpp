#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ergokit/dataset_io.hpp"
#include "ergokit/errors.hpp"
#include "ergokit/io_util.hpp"
#include "ergokit/nn/eval.hpp"
#include "ergokit/nn/serialize.hpp"
#include "ergokit/nn/train.hpp"
#include "ergokit/openpose_io.hpp"
#include "ergokit/report.hpp"
#include "ergokit/rula.hpp"
#include "ergokit/synthgen.hpp"
#include "ergokit/threads.hpp"

namespace {

using namespace ergokit;

void emit(const std::string& out_path, const std::string& content) {
    if (out_path.empty()) {
        std::fputs(content.c_str(), stdout);
    } else {
        write_file_atomic(out_path, content);
    }
}

std::string format_angles_json(const JointAngleSet& angles,
                               const std::string& source) {
    std::string out = "{\"source\":\"" + source + "\",\"angles\":{";
    bool first = true;
    for (AngleName name : kAllAngles) {
        if (!first) out += ',';
        first = false;
        out += '"';
        out += angle_acronym(name);
        out += "\":";
        const auto& v = angles[name];
        if (v) {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.6f", *v);
            out += buf;
        } else {
            out += "null";
        }
    }
    out += "}}\n";
    return out;
}

std::string format_angles_csv(const JointAngleSet& angles) {
    std::string out = "angle,degrees\n";
    for (AngleName name : kAllAngles) {
        out += angle_acronym(name);
        out += ',';
        const auto& v = angles[name];
        if (v) {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.6f", *v);
            out += buf;
        }
        out += '\n';
    }
    return out;
}

JointAngleSet parse_angles_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw MalformedJson(e.what());
    }
    if (!doc.contains("angles")) throw SchemaMismatch("no \"angles\" object");
    JointAngleSet out;
    for (const auto& [key, value] : doc["angles"].items()) {
        const auto name = parse_angle_acronym(key);
        if (!name) throw SchemaMismatch("unknown angle '" + key + "'");
        if (!value.is_null()) out[*name] = value.get<double>();
    }
    return out;
}

std::vector<CameraSpec> viewpoint_ring(int count) {
    std::vector<CameraSpec> cameras;
    if (count <= 1) {
        cameras.push_back(CameraSpec::frontal());
        return cameras;
    }
    // Azimuth sweep with alternating slight elevation.
    const double lo = -70.0, hi = 70.0;
    for (int i = 0; i < count; ++i) {
        CameraSpec cam;
        cam.azimuth = lo + (hi - lo) * i / (count - 1);
        cam.elevation = (i % 2 == 0) ? 0.0 : 15.0;
        cameras.push_back(cam);
    }
    return cameras;
}

PoseFrame load_input_person(const std::string& path) {
    const auto frames = parse_openpose_json(read_file(path), path);
    return select_person(frames);
}

int run(int argc, char** argv) {
    CLI::App app{"ergokit: joint angles and RULA scores from BODY_25 keypoints"};
    app.require_subcommand(1);

    // --- synth ---
    auto* synth = app.add_subcommand("synth", "generate a labeled pose dataset");
    std::int64_t count = 0;
    std::uint64_t seed = 0;
    std::string out_file, occlusion_text = "none";
    double jitter_sigma = 0.0, posture_jitter = 8.0;
    int viewpoints = 1;
    bool uniform_angles = false;
    synth->add_option("--count", count, "number of samples")->required();
    synth->add_option("--seed", seed, "rng seed")->required();
    synth->add_option("--out", out_file, "output JSONL path")->required();
    synth->add_option("--occlusion", occlusion_text,
                      "none | random:<p> | limb:<chain>");
    synth->add_option("--jitter-sigma", jitter_sigma, "keypoint noise, pixels");
    synth->add_option("--viewpoints", viewpoints, "number of camera azimuths");
    synth->add_option("--posture-jitter", posture_jitter,
                      "per-joint jitter around library postures, degrees");
    synth->add_flag("--uniform-angles", uniform_angles,
                    "sample joints independently instead of library postures");

    // --- train ---
    auto* train_cmd = app.add_subcommand("train", "train per-angle regressors");
    std::string data_file, val_file, angle_text = "all", out_dir;
    int epochs = 30, batch_size = 32;
    double lr = 1e-3, early_stop = 0.0;
    std::uint64_t train_seed = 0;
    train_cmd->add_option("--data", data_file, "training dataset")->required();
    train_cmd->add_option("--val-data", val_file, "validation dataset");
    train_cmd->add_option("--angle", angle_text, "angle acronym or 'all'");
    train_cmd->add_option("--epochs", epochs, "training epochs");
    train_cmd->add_option("--lr", lr, "Adam learning rate");
    train_cmd->add_option("--batch-size", batch_size, "mini-batch size");
    train_cmd->add_option("--seed", train_seed, "rng seed");
    train_cmd->add_option("--early-stop-rmse", early_stop,
                          "stop when train RMSE (deg) reaches this");
    train_cmd->add_option("--out-dir", out_dir, "model directory")->required();

    // --- eval ---
    auto* eval_cmd = app.add_subcommand("eval", "per-angle error report");
    std::string models_dir, train_data, test_data, format_text = "text", eval_out;
    eval_cmd->add_option("--models", models_dir, "model directory")->required();
    eval_cmd->add_option("--train-data", train_data, "train split")->required();
    eval_cmd->add_option("--test-data", test_data, "test split")->required();
    eval_cmd->add_option("--format", format_text, "text | csv | json");
    eval_cmd->add_option("--out", eval_out, "write report here instead of stdout");

    // --- predict ---
    auto* predict_cmd =
        app.add_subcommand("predict", "all 16 angles from OpenPose JSON");
    std::string predict_models, predict_input, predict_format = "json", predict_out;
    predict_cmd->add_option("--models", predict_models, "model directory")->required();
    predict_cmd->add_option("--input", predict_input, "OpenPose JSON")->required();
    predict_cmd->add_option("--format", predict_format, "json | csv");
    predict_cmd->add_option("--out", predict_out, "output path");

    // --- angles ---
    auto* angles_cmd =
        app.add_subcommand("angles", "geometric 2D angles from OpenPose JSON");
    std::string angles_input, angles_format = "json", angles_out;
    angles_cmd->add_option("--input", angles_input, "OpenPose JSON")->required();
    angles_cmd->add_option("--format", angles_format, "json | csv");
    angles_cmd->add_option("--out", angles_out, "output path");

    // --- rula ---
    auto* rula_cmd = app.add_subcommand("rula", "RULA grand score");
    std::string rula_angles_file, rula_input, rula_models, rula_bins_path;
    std::string side_text = "right", rula_format = "text", rula_out;
    int wrist = 1, wrist_twist = 1, muscle = 0, force = 0;
    bool legs_supported = true;
    rula_cmd->add_option("--angles-file", rula_angles_file,
                         "angles JSON produced by predict/angles");
    rula_cmd->add_option("--input", rula_input, "OpenPose JSON (with --models)");
    rula_cmd->add_option("--models", rula_models, "model directory");
    rula_cmd->add_option("--side", side_text, "left | right");
    rula_cmd->add_option("--wrist", wrist, "wrist posture score 1..4");
    rula_cmd->add_option("--wrist-twist", wrist_twist, "wrist twist score 1..2");
    rula_cmd->add_option("--muscle", muscle, "muscle use score 0..1");
    rula_cmd->add_option("--force", force, "force/load score 0..3");
    rula_cmd->add_option("--legs-supported", legs_supported,
                         "legs and feet supported (1) or not (0)");
    rula_cmd->add_option("--rula-bins", rula_bins_path,
                         "bins config overriding the built-in default");
    rula_cmd->add_option("--format", rula_format, "text | json");
    rula_cmd->add_option("--out", rula_out, "output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (synth->parsed()) {
        DatasetSpec spec;
        spec.count = count;
        spec.seed = seed;
        spec.occlusion = OcclusionPolicy::parse(occlusion_text);
        spec.jitter_sigma = jitter_sigma;
        spec.cameras = viewpoint_ring(viewpoints);
        spec.use_postures = !uniform_angles;
        spec.posture_jitter = posture_jitter;
        write_dataset(out_file, generate_dataset(spec));
        std::printf("seed: %llu\nwrote %lld samples to %s\n",
                    static_cast<unsigned long long>(seed),
                    static_cast<long long>(count), out_file.c_str());
        return 0;
    }

    if (train_cmd->parsed()) {
        const auto samples = read_dataset(data_file);
        const TensorBatch batch = batch_tensors(samples);
        TensorBatch val_batch;
        if (!val_file.empty()) val_batch = batch_tensors(read_dataset(val_file));

        std::vector<AngleName> to_train;
        if (angle_text == "all") {
            to_train.assign(kAllAngles.begin(), kAllAngles.end());
        } else {
            const auto name = parse_angle_acronym(angle_text);
            if (!name) throw Error("unknown angle '" + angle_text + "'");
            to_train.push_back(*name);
        }

        nn::TrainConfig config;
        config.learning_rate = lr;
        config.batch_size = batch_size;
        config.epochs = epochs;
        config.seed = train_seed;
        config.early_stop_rmse = early_stop;

        std::printf("seed: %llu\ntraining %zu model(s) on %zu samples (%zu dropped)\n",
                    static_cast<unsigned long long>(train_seed), to_train.size(),
                    batch.items.size(), batch.drops.size());

        std::vector<nn::AngleModel> trained(to_train.size());
        std::string train_error;
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t k = 0; k < static_cast<std::int64_t>(to_train.size()); ++k) {
            const AngleName name = to_train[static_cast<std::size_t>(k)];
            try {
                std::vector<nn::LabeledTensor> train_set, val_set;
                for (const auto& item : batch.items) {
                    if (item.truth[name])
                        train_set.push_back({&item.tensor, *item.truth[name]});
                }
                for (const auto& item : val_batch.items) {
                    if (item.truth[name])
                        val_set.push_back({&item.tensor, *item.truth[name]});
                }
                nn::AngleModel model = nn::init_model(name, train_seed);
                nn::train(model, train_set, val_set, config);
                trained[static_cast<std::size_t>(k)] = std::move(model);
            } catch (const std::exception& e) {
#pragma omp critical
                if (train_error.empty()) {
                    train_error = std::string(angle_acronym(name)) + ": " + e.what();
                }
            }
        }
        if (!train_error.empty()) throw Error(train_error);

        std::filesystem::create_directories(out_dir);
        for (std::size_t k = 0; k < to_train.size(); ++k) {
            const auto& model = trained[k];
            nn::save_model(model, std::filesystem::path(out_dir) /
                                      (std::string(angle_acronym(model.angle)) + ".json"));
            std::printf("%-4s train RMSE %.4f deg%s\n", angle_acronym(model.angle),
                        model.meta.final_train_rmse,
                        model.meta.final_val_rmse >= 0.0
                            ? ("  val RMSE " + std::to_string(model.meta.final_val_rmse)).c_str()
                            : "");
        }
        return 0;
    }

    if (eval_cmd->parsed()) {
        const auto models = nn::load_models(models_dir);
        const auto report = nn::evaluate(models, read_dataset(train_data),
                                         read_dataset(test_data));
        emit(eval_out, render_report(report, parse_report_format(format_text)));
        return 0;
    }

    if (predict_cmd->parsed()) {
        const auto models = nn::load_models(predict_models);
        const PoseFrame person = load_input_person(predict_input);
        const JointAngleSet angles = nn::predict_all(models, person);
        if (predict_format == "csv") {
            emit(predict_out, format_angles_csv(angles));
        } else {
            emit(predict_out, format_angles_json(angles, predict_input));
        }
        return 0;
    }

    if (angles_cmd->parsed()) {
        const PoseFrame person = load_input_person(angles_input);
        std::vector<std::pair<AngleName, std::string>> diagnostics;
        const JointAngleSet angles = apparent_angles_2d(person, &diagnostics);
        for (const auto& [name, why] : diagnostics) {
            std::fprintf(stderr, "note: %s dropped: %s\n", angle_acronym(name),
                         why.c_str());
        }
        if (angles_format == "csv") {
            emit(angles_out, format_angles_csv(angles));
        } else {
            emit(angles_out, format_angles_json(angles, angles_input));
        }
        return 0;
    }

    if (rula_cmd->parsed()) {
        RulaInput input;
        if (!rula_angles_file.empty()) {
            input.angles = parse_angles_json(read_file(rula_angles_file));
        } else if (!rula_input.empty() && !rula_models.empty()) {
            const auto models = nn::load_models(rula_models);
            input.angles = nn::predict_all(models, load_input_person(rula_input));
        } else {
            throw Error("need --angles-file, or --input together with --models");
        }
        if (side_text == "left") {
            input.side = RulaInput::Side::Left;
        } else if (side_text == "right") {
            input.side = RulaInput::Side::Right;
        } else {
            throw Error("--side must be left or right");
        }
        input.wrist_score = wrist;
        input.wrist_twist_score = wrist_twist;
        input.muscle_score = muscle;
        input.force_score = force;
        input.legs_supported = legs_supported;

        const RulaBins bins = rula_bins_path.empty()
                                  ? RulaBins::load_default()
                                  : RulaBins::load_file(rula_bins_path);
        const RulaResult result = rula_score(input, bins);

        if (rula_format == "json") {
            nlohmann::ordered_json doc;
            doc["side"] = side_text;
            doc["upper_arm"] = result.upper_arm;
            doc["lower_arm"] = result.lower_arm;
            doc["neck"] = result.neck;
            doc["trunk"] = result.trunk;
            doc["legs"] = result.legs;
            doc["score_a"] = result.score_a;
            doc["score_b"] = result.score_b;
            doc["grand"] = result.grand;
            doc["action_level"] = result.action_level;
            doc["fired_flags"] = result.fired_flags;
            emit(rula_out, doc.dump(2) + "\n");
        } else {
            char buf[512];
            std::string text;
            std::snprintf(buf, sizeof(buf),
                          "side: %s\nupper arm: %d\nlower arm: %d\nneck: %d\n"
                          "trunk: %d\nlegs: %d\nscore A: %d\nscore B: %d\n",
                          side_text.c_str(), result.upper_arm, result.lower_arm,
                          result.neck, result.trunk, result.legs, result.score_a,
                          result.score_b);
            text += buf;
            if (!result.fired_flags.empty()) {
                text += "flags:";
                for (const auto& flag : result.fired_flags) text += " " + flag;
                text += "\n";
            }
            std::snprintf(buf, sizeof(buf), "grand score: %d\naction: %s\n",
                          result.grand, result.action_level.c_str());
            text += buf;
            emit(rula_out, text);
        }
        return 0;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    ergokit::apply_thread_cap();
    try {
        return run(argc, argv);
    } catch (const ergokit::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 2;
    }
}
