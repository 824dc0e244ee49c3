#include "sparsespec/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace sparsespec {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    return f;
}

} // namespace

void emit(const CorrespondenceReport& report, const std::string& format, const std::string& path) {
    if (format == "csv") {
        auto f = open_out(path);
        f << "trial,l,alpha_sigma_l,lambda_top_scaled,lambda_bottom_scaled,"
             "lambda_prediction,error_l,bound_l\n";
        for (const auto& r : report.rows) {
            f << r.trial << ',' << r.l << ',' << format_double(r.alpha_sigma_l) << ','
              << format_double(r.lambda_top_scaled) << ',' << format_double(r.lambda_bottom_scaled)
              << ',' << format_double(r.lambda_prediction) << ',' << format_double(r.error_l) << ','
              << format_double(r.bound_l) << '\n';
        }
        return;
    }
    if (format != "json") throw std::invalid_argument("emit: format must be csv or json");

    nlohmann::ordered_json j;
    j["schema"] = "v1";
    j["name"] = report.config.name;
    j["config"] = {{"n", report.config.n},
                   {"d", report.config.effective_d()},
                   {"kappa", report.config.kappa},
                   {"theta", report.config.theta},
                   {"tau", report.config.tau},
                   {"trials", report.config.trials},
                   {"seed", report.config.seed}};
    j["rows"] = nlohmann::ordered_json::array();
    for (const auto& r : report.rows)
        j["rows"].push_back({{"trial", r.trial},
                             {"l", r.l},
                             {"alpha_sigma_l", r.alpha_sigma_l},
                             {"lambda_top_scaled", r.lambda_top_scaled},
                             {"lambda_bottom_scaled", r.lambda_bottom_scaled},
                             {"lambda_prediction", r.lambda_prediction},
                             {"error_l", r.error_l},
                             {"bound_l", r.bound_l}});
    j["trials"] = nlohmann::ordered_json::array();
    for (const auto& t : report.trials)
        j["trials"].push_back({{"trial", t.trial},
                               {"L", t.L},
                               {"max_error", t.max_error},
                               {"edge_ok", t.edge_ok},
                               {"edge_value", t.edge_value},
                               {"edge_bound", t.edge_bound},
                               {"skipped", t.skipped}});
    j["summary"] = {{"median_max_error", report.median_max_error},
                    {"trials_with_outliers", report.trials_with_outliers},
                    {"edge_pass_count", report.edge_pass_count},
                    {"skip_count", report.skip_count}};
    auto f = open_out(path);
    f << j.dump(2) << '\n';
}

void write_figure1_csv(const std::vector<Figure1Row>& rows, const std::string& path) {
    auto f = open_out(path);
    f << "l,b,value\n";
    for (const auto& r : rows)
        f << r.l << ',' << format_double(r.b) << ',' << format_double(r.value) << '\n';
}

void write_residual_rows_csv(const std::vector<ResidualRow>& rows, const std::string& path) {
    auto f = open_out(path);
    f << "x,degree,alpha,r,w0,w1,w2,w3,w4,total_residual,predicted_eigenvalue\n";
    for (const auto& r : rows) {
        f << r.x << ',' << r.degree << ',' << format_double(r.alpha) << ',' << r.r;
        std::size_t k = 0;
        for (; k < r.w_norms.size(); ++k) f << ',' << format_double(r.w_norms[k]);
        for (; k < 5; ++k) f << ',';
        f << ',' << format_double(r.total_residual) << ','
          << format_double(r.predicted_eigenvalue) << '\n';
    }
}

} // namespace sparsespec
