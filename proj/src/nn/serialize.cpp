#include "ergokit/nn/serialize.hpp"

#include <json.hpp>

#include "ergokit/errors.hpp"
#include "ergokit/io_util.hpp"

namespace ergokit::nn {

namespace {

using json = nlohmann::ordered_json;

constexpr int kFormatVersion = 1;

struct LayerView {
    const char* name;
    std::size_t offset;
    std::size_t count;
};

std::vector<LayerView> layer_views(const ArchSpec& a) {
    const ParamLayout l(a);
    return {
        {"conv_a.weight", l.conv_a_w, static_cast<std::size_t>(a.conv_a) * 9 * a.in_channels},
        {"conv_a.bias", l.conv_a_b, static_cast<std::size_t>(a.conv_a)},
        {"pointwise.weight", l.pw_w, static_cast<std::size_t>(a.pointwise) * a.conv_a},
        {"pointwise.bias", l.pw_b, static_cast<std::size_t>(a.pointwise)},
        {"conv_b.weight", l.conv_b_w, static_cast<std::size_t>(a.conv_b) * 9 * a.pointwise},
        {"conv_b.bias", l.conv_b_b, static_cast<std::size_t>(a.conv_b)},
        {"conv_c.weight", l.conv_c_w, static_cast<std::size_t>(a.conv_c) * 9 * a.conv_b},
        {"conv_c.bias", l.conv_c_b, static_cast<std::size_t>(a.conv_c)},
        {"dense1.weight", l.dense1_w, static_cast<std::size_t>(a.hidden) * a.flat()},
        {"dense1.bias", l.dense1_b, static_cast<std::size_t>(a.hidden)},
        {"dense2.weight", l.dense2_w, static_cast<std::size_t>(a.hidden)},
        {"dense2.bias", l.dense2_b, 1},
    };
}

}  // namespace

void save_model(const AngleModel& model, const std::filesystem::path& path) {
    json doc;
    doc["format_version"] = kFormatVersion;
    doc["angle"] = angle_acronym(model.angle);
    doc["architecture"] = {
        {"grid", model.arch.grid},
        {"in_channels", model.arch.in_channels},
        {"conv_a", model.arch.conv_a},
        {"pointwise", model.arch.pointwise},
        {"conv_b", model.arch.conv_b},
        {"conv_c", model.arch.conv_c},
        {"hidden", model.arch.hidden},
    };
    json weights;
    for (const LayerView& view : layer_views(model.arch)) {
        weights[view.name] = std::vector<double>(
            model.params.begin() + static_cast<std::ptrdiff_t>(view.offset),
            model.params.begin() + static_cast<std::ptrdiff_t>(view.offset + view.count));
    }
    doc["weights"] = std::move(weights);
    doc["seed"] = model.seed;
    doc["training_meta"] = {
        {"epochs", model.meta.epochs},
        {"final_train_rmse", model.meta.final_train_rmse},
        {"final_val_rmse", model.meta.final_val_rmse},
    };
    write_file_atomic(path, doc.dump());
}

AngleModel load_model(const std::filesystem::path& path) {
    json doc;
    try {
        doc = json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw MalformedJson(path.string() + ": " + e.what());
    }
    try {
        const int version = doc.at("format_version").get<int>();
        if (version != kFormatVersion) {
            throw SchemaMismatch(path.string() + ": unsupported format_version " +
                                 std::to_string(version));
        }
        const std::string acronym = doc.at("angle").get<std::string>();
        const auto angle = parse_angle_acronym(acronym);
        if (!angle) {
            throw SchemaMismatch(path.string() + ": unknown angle '" + acronym + "'");
        }

        AngleModel model;
        model.angle = *angle;
        const json& arch = doc.at("architecture");
        model.arch.grid = arch.at("grid").get<int>();
        model.arch.in_channels = arch.at("in_channels").get<int>();
        model.arch.conv_a = arch.at("conv_a").get<int>();
        model.arch.pointwise = arch.at("pointwise").get<int>();
        model.arch.conv_b = arch.at("conv_b").get<int>();
        model.arch.conv_c = arch.at("conv_c").get<int>();
        model.arch.hidden = arch.at("hidden").get<int>();
        if (model.arch.grid <= 2 || model.arch.in_channels <= 0 ||
            model.arch.conv_a <= 0 || model.arch.pointwise <= 0 ||
            model.arch.conv_b <= 0 || model.arch.conv_c <= 0 ||
            model.arch.hidden <= 0) {
            throw SchemaMismatch(path.string() + ": invalid architecture");
        }

        model.params.assign(ParamLayout(model.arch).total, 0.0);
        const json& weights = doc.at("weights");
        for (const LayerView& view : layer_views(model.arch)) {
            const json& arr = weights.at(view.name);
            if (!arr.is_array() || arr.size() != view.count) {
                throw ShapeMismatch(path.string() + ": layer " + view.name +
                                    " expects " + std::to_string(view.count) +
                                    " values, got " + std::to_string(arr.size()));
            }
            for (std::size_t i = 0; i < view.count; ++i) {
                model.params[view.offset + i] = arr[i].get<double>();
            }
        }
        model.seed = doc.value("seed", std::uint64_t{0});
        if (doc.contains("training_meta")) {
            const json& meta = doc["training_meta"];
            model.meta.epochs = meta.value("epochs", 0);
            model.meta.final_train_rmse = meta.value("final_train_rmse", -1.0);
            model.meta.final_val_rmse = meta.value("final_val_rmse", -1.0);
        }
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw SchemaMismatch(path.string() + ": " + e.what());
    }
}

void save_models(const ModelSet& models, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    for (const auto& [angle, model] : models) {
        save_model(model, dir / (std::string(angle_acronym(angle)) + ".json"));
    }
}

ModelSet load_models(const std::filesystem::path& dir) {
    ModelSet models;
    std::string missing;
    for (AngleName name : kAllAngles) {
        const auto path = dir / (std::string(angle_acronym(name)) + ".json");
        if (!std::filesystem::exists(path)) {
            if (!missing.empty()) missing += ", ";
            missing += angle_acronym(name);
            continue;
        }
        AngleModel model = load_model(path);
        if (model.angle != name) {
            throw SchemaMismatch(path.string() + ": file claims angle " +
                                 angle_acronym(model.angle));
        }
        models.emplace(name, std::move(model));
    }
    if (!missing.empty()) {
        throw MissingModel("model directory " + dir.string() +
                           " is missing: " + missing);
    }
    return models;
}

}  // namespace ergokit::nn
