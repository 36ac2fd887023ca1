#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "opcut/errors.hpp"
#include "opcut/harness.hpp"

namespace opcut {

const char* const tool_version = "0.1.0";

namespace {

std::string num17(double v) {
    if (std::isnan(v)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

void write_csv(const ConvergenceReport& r, std::ostream& os) {
    os << "study,model,dim,f_kind,f_params,k,L,value\n";
    for (const auto& s : r.series)
        for (const auto& p : s.points)
            os << r.kind << ',' << r.model << ',' << s.dim << ',' << s.f_kind << ','
               << s.f_params << ',' << s.k << ',' << num17(p.L) << ','
               << num17(p.value) << "\n";
}

void write_json_summary(const ConvergenceReport& r, std::ostream& os) {
    nlohmann::ordered_json j;
    j["schema_version"] = 1;
    j["tool"] = "opcut";
    j["version"] = tool_version;
    j["study"] = r.kind;
    j["model"] = r.model;
    j["seed"] = r.seed;
    j["config"] = r.config_echo;
    auto arr = nlohmann::ordered_json::array();
    for (const auto& s : r.series) {
        nlohmann::ordered_json e;
        e["dim"] = s.dim;
        e["f_kind"] = s.f_kind;
        e["f_params"] = s.f_params;
        e["k"] = s.k;
        e["points"] = s.points.size();
        std::size_t errors = 0;
        double final_value = std::numeric_limits<double>::quiet_NaN();
        for (const auto& p : s.points) {
            if (!p.error.empty()) ++errors;
            if (std::isfinite(p.value)) final_value = p.value;
        }
        e["errors"] = errors;
        if (std::isfinite(final_value)) e["final"] = final_value;
        else e["final"] = nullptr;
        if (s.fit) {
            e["fit"] = {{"rho", s.fit->rho},
                        {"C", s.fit->c},
                        {"r2", s.fit->r2},
                        {"points_used", s.fit->points_used}};
        } else {
            e["fit"] = nullptr;
            if (!s.fit_note.empty()) e["fit_note"] = s.fit_note;
        }
        if (s.stability_delta) e["stability_delta"] = *s.stability_delta;
        else e["stability_delta"] = nullptr;
        e["verdict"] = s.verdict;
        e["reason"] = s.reason;
        arr.push_back(std::move(e));
    }
    j["series"] = std::move(arr);
    j["overall"] = r.overall;
    os << j.dump(2) << "\n";
}

std::vector<std::string> emit_report(const ConvergenceReport& r,
                                     const std::string& format,
                                     const std::string& dir,
                                     const std::string& prefix) {
    if (format != "csv" && format != "json")
        throw ConfigError("report format must be csv or json");
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir + "'");

    const std::string stem = prefix + r.kind + "_" + r.model;
    std::vector<std::string> written;
    const std::string path =
        (std::filesystem::path(dir) /
         (stem + (format == "csv" ? ".csv" : ".summary.json")))
            .string();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    if (format == "csv") write_csv(r, out);
    else write_json_summary(r, out);
    if (!out) throw IoError("failed while writing '" + path + "'");
    written.push_back(path);
    return written;
}

} // namespace opcut
