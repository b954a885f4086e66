#include "ergokit/dataset_io.hpp"

#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "ergokit/errors.hpp"
#include "ergokit/io_util.hpp"

namespace ergokit {

namespace {

using json = nlohmann::json;

void append_num(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    out += buf;
}

void append_camera(std::string& out, const CameraSpec& cam) {
    out += "{\"mode\":\"";
    out += cam.mode == CameraSpec::Mode::Pinhole ? "pinhole" : "orthographic";
    out += "\",\"azimuth\":";
    append_num(out, cam.azimuth);
    out += ",\"elevation\":";
    append_num(out, cam.elevation);
    if (cam.mode == CameraSpec::Mode::Pinhole) {
        out += ",\"distance\":";
        append_num(out, cam.distance);
        out += ",\"focal\":";
        append_num(out, cam.focal);
    } else {
        out += ",\"ortho_scale\":";
        append_num(out, cam.ortho_scale);
    }
    out += ",\"image_width\":" + std::to_string(cam.image_width);
    out += ",\"image_height\":" + std::to_string(cam.image_height);
    out += "}";
}

CameraSpec parse_camera(const json& j) {
    CameraSpec cam;
    const std::string mode = j.at("mode").get<std::string>();
    if (mode == "pinhole") {
        cam.mode = CameraSpec::Mode::Pinhole;
        cam.distance = j.at("distance").get<double>();
        cam.focal = j.at("focal").get<double>();
    } else if (mode == "orthographic") {
        cam.mode = CameraSpec::Mode::Orthographic;
        cam.ortho_scale = j.value("ortho_scale", 0.0);
    } else {
        throw SchemaMismatch("unknown camera mode '" + mode + "'");
    }
    cam.azimuth = j.at("azimuth").get<double>();
    cam.elevation = j.at("elevation").get<double>();
    cam.image_width = j.at("image_width").get<int>();
    cam.image_height = j.at("image_height").get<int>();
    return cam;
}

}  // namespace

std::string serialize_dataset(const std::vector<PoseSample>& samples) {
    std::string out;
    out.reserve(samples.size() * 1400);
    for (const PoseSample& sample : samples) {
        out += "{\"id\":" + std::to_string(sample.sample_id) + ",\"kp\":[";
        for (int i = 0; i < kNumKeypoints; ++i) {
            const Keypoint& kp = sample.frame[i];
            if (i) out += ',';
            out += '[';
            append_num(out, kp.x);
            out += ',';
            append_num(out, kp.y);
            out += ',';
            append_num(out, kp.confidence);
            out += ']';
        }
        out += "],\"angles\":{";
        bool first = true;
        for (AngleName name : kAllAngles) {
            const auto& v = sample.truth[name];
            if (!v) continue;
            if (!first) out += ',';
            first = false;
            out += '"';
            out += angle_acronym(name);
            out += "\":";
            append_num(out, *v);
        }
        out += "},\"camera\":";
        append_camera(out, sample.camera);
        out += ",\"occluded\":[";
        first = true;
        for (int id : sample.occluded) {
            if (!first) out += ',';
            first = false;
            out += std::to_string(id);
        }
        out += "]}\n";
    }
    return out;
}

std::vector<PoseSample> parse_dataset(const std::string& text) {
    std::vector<PoseSample> samples;
    std::istringstream stream(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(stream, line)) {
        ++line_no;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw MalformedLine(line_no, e.what());
        }
        try {
            PoseSample sample;
            sample.sample_id = j.at("id").get<std::int64_t>();
            const json& kps = j.at("kp");
            if (!kps.is_array() || kps.size() != kNumKeypoints) {
                throw SchemaMismatch("\"kp\" must hold 25 triples");
            }
            for (int i = 0; i < kNumKeypoints; ++i) {
                const json& triple = kps[static_cast<std::size_t>(i)];
                if (!triple.is_array() || triple.size() != 3) {
                    throw SchemaMismatch("keypoint " + std::to_string(i) +
                                         " is not an [x, y, c] triple");
                }
                sample.frame[i] = {triple[0].get<double>(),
                                   triple[1].get<double>(),
                                   triple[2].get<double>()};
            }
            sample.frame.source_id = "dataset:" + std::to_string(sample.sample_id);
            const json& angles = j.at("angles");
            for (const auto& [key, value] : angles.items()) {
                const auto name = parse_angle_acronym(key);
                if (!name) throw SchemaMismatch("unknown angle '" + key + "'");
                sample.truth[*name] = value.get<double>();
            }
            sample.camera = parse_camera(j.at("camera"));
            for (const json& id : j.at("occluded")) {
                const int v = id.get<int>();
                if (v < 0 || v >= kNumKeypoints) {
                    throw SchemaMismatch("occluded id out of range");
                }
                sample.occluded.insert(v);
            }
            samples.push_back(std::move(sample));
        } catch (const nlohmann::json::exception& e) {
            throw MalformedLine(line_no, e.what());
        } catch (const SchemaMismatch& e) {
            throw MalformedLine(line_no, e.what());
        }
    }
    return samples;
}

void write_dataset(const std::filesystem::path& path,
                   const std::vector<PoseSample>& samples) {
    write_file_atomic(path, serialize_dataset(samples));
}

std::vector<PoseSample> read_dataset(const std::filesystem::path& path) {
    return parse_dataset(read_file(path));
}

}  // namespace ergokit
