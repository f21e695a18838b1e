#include "sonartex/report.hpp"

#include <json.hpp> // vendored nlohmann/json
#include <sstream>

#include "sonartex/errors.hpp"
#include "store_util.hpp"

namespace sonartex {

namespace {

nlohmann::json group_to_json(const GroupStats& g) {
    return {
        {"dataset", g.dataset},   {"class", g.class_name},  {"n", g.n},
        {"stats_mean", g.stats_mean}, {"stats_std", g.stats_std},
        {"strts_mean", g.strts_mean}, {"strts_std", g.strts_std},
    };
}

} // namespace

std::string render_report(const ScoreReport& report, ReportFormat format) {
    if (format == ReportFormat::csv) {
        std::string out = "dataset,class,file,stats,strts,error\n";
        for (const auto& f : report.files) {
            out += detail::csv_escape(f.dataset);
            out += ",";
            out += detail::csv_escape(f.class_name);
            out += ",";
            out += detail::csv_escape(f.path);
            out += ",";
            out += f.error.empty() ? detail::format_double(f.stats) : "";
            out += ",";
            out += f.error.empty() ? detail::format_double(f.strts) : "";
            out += ",";
            out += detail::csv_escape(f.error);
            out += "\n";
        }
        out += "# summary,group,n,stats_mean,stats_std,strts_mean,strts_std\n";
        for (const auto& g : report.per_class) {
            out += "# class," + detail::csv_escape(g.dataset + "/" + g.class_name) + "," +
                   std::to_string(g.n) + "," + detail::format_double(g.stats_mean) + "," +
                   detail::format_double(g.stats_std) + "," + detail::format_double(g.strts_mean) + "," +
                   detail::format_double(g.strts_std) + "\n";
        }
        for (const auto& g : report.per_dataset) {
            out += "# dataset," + detail::csv_escape(g.dataset) + "," + std::to_string(g.n) +
                   "," + detail::format_double(g.stats_mean) + "," + detail::format_double(g.stats_std) + "," +
                   detail::format_double(g.strts_mean) + "," + detail::format_double(g.strts_std) + "\n";
        }
        return out;
    }

    nlohmann::json j;
    j["files"] = nlohmann::json::array();
    for (const auto& f : report.files) {
        nlohmann::json jf{{"dataset", f.dataset},
                          {"class", f.class_name},
                          {"file", f.path}};
        if (f.error.empty()) {
            jf["stats"] = f.stats;
            jf["strts"] = f.strts;
        } else {
            jf["error"] = f.error;
        }
        j["files"].push_back(std::move(jf));
    }
    j["per_class"] = nlohmann::json::array();
    for (const auto& g : report.per_class) j["per_class"].push_back(group_to_json(g));
    j["per_dataset"] = nlohmann::json::array();
    for (const auto& g : report.per_dataset) j["per_dataset"].push_back(group_to_json(g));
    return j.dump(2) + "\n";
}

void write_report(const ScoreReport& report, const std::filesystem::path& path,
                  ReportFormat format) {
    detail::write_file_atomic(path, render_report(report, format));
}

std::vector<FileScore> read_score_csv(const std::filesystem::path& path) {
    const std::string bytes = detail::read_file(path);
    std::istringstream in(bytes);
    std::string line;
    std::vector<FileScore> out;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        const auto fields = detail::csv_split(line);
        if (line_no == 1) {
            if (fields.size() < 5 || fields[0] != "dataset")
                throw ParseError(path.string() + ":1: unexpected report header");
            continue;
        }
        if (fields.size() < 5)
            throw ParseError(path.string() + ":" + std::to_string(line_no) +
                             ": expected at least 5 fields");
        FileScore f;
        f.dataset = fields[0];
        f.class_name = fields[1];
        f.path = fields[2];
        f.error = fields.size() > 5 ? fields[5] : "";
        if (f.error.empty()) {
            try {
                f.stats = std::stod(fields[3]);
                f.strts = std::stod(fields[4]);
            } catch (const std::logic_error&) {
                throw ParseError(path.string() + ":" + std::to_string(line_no) +
                                 ": bad score value");
            }
        }
        out.push_back(std::move(f));
    }
    return out;
}

} // namespace sonartex
