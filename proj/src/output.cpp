// output.cpp — CSV tables and JSON summaries with round-trip float formatting

#include "jch/experiments.hpp"

#include <Eigen/Core>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#ifndef JCH_VERSION
#define JCH_VERSION "1.0.0"
#endif

namespace jch {

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

using ojson = nlohmann::ordered_json;

// JSON writer matching nlohmann's layout but printing floats with %.17g so
// that repeated runs compare byte for byte.
void dump(std::ostream& os, const ojson& j, int indent) {
    const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
    const std::string close(static_cast<std::size_t>(indent), ' ');
    switch (j.type()) {
        case ojson::value_t::object: {
            if (j.empty()) { os << "{}"; return; }
            os << "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) os << ",\n";
                first = false;
                os << pad << ojson(it.key()).dump() << ": ";
                dump(os, it.value(), indent + 2);
            }
            os << "\n" << close << "}";
            return;
        }
        case ojson::value_t::array: {
            if (j.empty()) { os << "[]"; return; }
            os << "[\n";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) os << ",\n";
                os << pad;
                dump(os, j[i], indent + 2);
            }
            os << "\n" << close << "]";
            return;
        }
        case ojson::value_t::number_float: {
            const double x = j.get<double>();
            if (!std::isfinite(x)) os << "null";
            else os << format_double(x);
            return;
        }
        default: os << j.dump();
    }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << text;
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::string to_text(const ojson& j) {
    std::ostringstream os;
    dump(os, j, 0);
    os << "\n";
    return os.str();
}

std::string compiler_string() {
#if defined(__clang__)
    return std::string("clang ") + __clang_version__;
#elif defined(__GNUC__)
    return std::string("gcc ") + __VERSION__;
#else
    return "unknown";
#endif
}

}  // namespace

ojson summary_json(const ExperimentConfig& cfg, const ExperimentResult& result) {
    ojson j;
    j["experiment"] = to_string(result.experiment);
    j["config"] = config_to_json(cfg);
    j["versions"] = {{"jch", JCH_VERSION},
                     {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                   std::to_string(EIGEN_MINOR_VERSION)},
                     {"compiler", compiler_string()}};
    auto checks = ojson::array();
    for (const auto& c : result.checks)
        checks.push_back({{"name", c.name},
                          {"measured", c.measured},
                          {"relation", c.relation},
                          {"threshold", c.threshold},
                          {"passed", c.passed},
                          {"detail", c.detail}});
    j["checks"] = checks;
    j["passed"] = result.passed();
    j["diagnostics"] = result.diagnostics;
    return j;
}

void write_outputs(const ExperimentConfig& cfg, const ExperimentResult& result) {
    const std::filesystem::path dir(cfg.output_dir);
    std::filesystem::create_directories(dir);
    if (!result.sweep.empty()) {
        std::string text = "delta_over_g,mode,var_N_mid,stderr,n_sites,filling\n";
        for (const auto& r : result.sweep)
            text += format_double(r.delta_over_g) + "," + r.mode + "," + format_double(r.var_N_mid) + "," +
                    format_double(r.stderr_value) + "," + std::to_string(r.n_sites) + "," +
                    std::to_string(r.filling) + "\n";
        write_text(dir / "sweep.csv", text);
    }
    if (!result.timeseries.empty()) {
        std::string text = "t_times_A,observable_label,value,case\n";
        for (const auto& r : result.timeseries)
            text += format_double(r.t_times_A) + "," + r.observable_label + "," + format_double(r.value) + "," +
                    r.case_label + "\n";
        write_text(dir / "timeseries.csv", text);
    }
    write_text(dir / "summary.json", to_text(summary_json(cfg, result)));
    write_text(dir / "runtimes.json", to_text(result.runtimes));
}

}  // namespace jch
