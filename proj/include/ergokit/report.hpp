#pragma once

#include <string>

#include "ergokit/nn/eval.hpp"

namespace ergokit {

enum class ReportFormat { Text, Csv, Json };

ReportFormat parse_report_format(const std::string& name);

// Renders per-angle train/test MAE and RMSE in table order plus the
// pooled aggregate footer; output is stable for identical reports.
std::string render_report(const nn::EvalReport& report, ReportFormat format);

}  // namespace ergokit
