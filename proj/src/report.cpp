#include "ergokit/report.hpp"

#include <cstdio>

#include <json.hpp>

#include "ergokit/errors.hpp"

namespace ergokit {

ReportFormat parse_report_format(const std::string& name) {
    if (name == "text") return ReportFormat::Text;
    if (name == "csv") return ReportFormat::Csv;
    if (name == "json") return ReportFormat::Json;
    throw Error("unknown report format '" + name + "' (text, csv, json)");
}

namespace {

std::string render_text(const nn::EvalReport& r) {
    char line[256];
    std::string out;
    out += "angle                    train MAE  train RMSE    test MAE   test RMSE\n";
    out += "---------------------------------------------------------------------\n";
    for (AngleName name : kAllAngles) {
        const auto& row = r.per_angle[static_cast<std::size_t>(name)];
        std::snprintf(line, sizeof(line), "%-4s %-18s %9.4f %11.4f %11.4f %11.4f\n",
                      angle_acronym(name), angle_description(name),
                      row.train.mae, row.train.rmse, row.test.mae, row.test.rmse);
        out += line;
    }
    out += "---------------------------------------------------------------------\n";
    std::snprintf(line, sizeof(line), "%-23s %9.4f %11.4f %11.4f %11.4f\n", "all angles",
                  r.aggregate_train.mae, r.aggregate_train.rmse,
                  r.aggregate_test.mae, r.aggregate_test.rmse);
    out += line;
    std::snprintf(line, sizeof(line),
                  "n: train %lld, test %lld; dropped: train %lld, test %lld\n",
                  static_cast<long long>(r.aggregate_train.n),
                  static_cast<long long>(r.aggregate_test.n),
                  static_cast<long long>(r.dropped_train),
                  static_cast<long long>(r.dropped_test));
    out += line;
    return out;
}

std::string render_csv(const nn::EvalReport& r) {
    char line[256];
    std::string out = "angle,train_mae,train_rmse,test_mae,test_rmse,train_n,test_n\n";
    for (AngleName name : kAllAngles) {
        const auto& row = r.per_angle[static_cast<std::size_t>(name)];
        std::snprintf(line, sizeof(line), "%s,%.4f,%.4f,%.4f,%.4f,%lld,%lld\n",
                      angle_acronym(name), row.train.mae, row.train.rmse,
                      row.test.mae, row.test.rmse,
                      static_cast<long long>(row.train.n),
                      static_cast<long long>(row.test.n));
        out += line;
    }
    std::snprintf(line, sizeof(line), "ALL,%.4f,%.4f,%.4f,%.4f,%lld,%lld\n",
                  r.aggregate_train.mae, r.aggregate_train.rmse,
                  r.aggregate_test.mae, r.aggregate_test.rmse,
                  static_cast<long long>(r.aggregate_train.n),
                  static_cast<long long>(r.aggregate_test.n));
    out += line;
    return out;
}

std::string render_json(const nn::EvalReport& r) {
    nlohmann::ordered_json doc;
    auto metrics = [](const nn::SplitMetrics& m) {
        return nlohmann::ordered_json{{"mae", m.mae}, {"rmse", m.rmse}, {"n", m.n}};
    };
    nlohmann::ordered_json rows;
    for (AngleName name : kAllAngles) {
        const auto& row = r.per_angle[static_cast<std::size_t>(name)];
        rows[angle_acronym(name)] = {{"train", metrics(row.train)},
                                     {"test", metrics(row.test)}};
    }
    doc["per_angle"] = std::move(rows);
    doc["aggregate"] = {{"train", metrics(r.aggregate_train)},
                        {"test", metrics(r.aggregate_test)}};
    doc["dropped"] = {{"train", r.dropped_train}, {"test", r.dropped_test}};
    return doc.dump(2) + "\n";
}

}  // namespace

std::string render_report(const nn::EvalReport& report, ReportFormat format) {
    switch (format) {
        case ReportFormat::Text:
            return render_text(report);
        case ReportFormat::Csv:
            return render_csv(report);
        case ReportFormat::Json:
            return render_json(report);
    }
    return {};
}

}  // namespace ergokit
