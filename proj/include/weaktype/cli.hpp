#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "weaktype/families.hpp"
#include "weaktype/functionals.hpp"
#include "weaktype/optimize.hpp"
#include "weaktype/verify.hpp"

namespace weaktype {

enum class Format { Csv, Json };

struct OutputConfig {
    Format format = Format::Csv;
    std::optional<std::string> path;  // stdout when empty
    int precision = 9;
};

enum ExitCode : int { kExitOk = 0, kExitCheckFailed = 1, kExitUsage = 2 };

// Numeric table with named columns.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

namespace detail {

inline std::string format_number(double v, int precision) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    return buf;
}

inline std::string render(const Table& t, const OutputConfig& cfg) {
    std::ostringstream os;
    if (cfg.format == Format::Csv) {
        for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
        os << '\n';
        for (const auto& r : t.rows) {
            for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << format_number(r[i], cfg.precision);
            os << '\n';
        }
        return os.str();
    }
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : t.rows) {
        nlohmann::ordered_json o = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (t.columns[i] == "m") o["m"] = static_cast<long long>(r[i]);
            else o[t.columns[i]] = json_number(r[i], cfg.precision);
        }
        arr.push_back(o);
    }
    return arr.dump(2) + "\n";
}

inline std::string render(const std::vector<CheckReport>& rs, const OutputConfig& cfg) {
    if (cfg.format == Format::Json) return to_json(rs, cfg.precision).dump(2) + "\n";
    std::ostringstream os;
    os << "name,status,worst_residual,tolerance,seed\n";
    for (const auto& r : rs)
        os << r.name << ',' << (r.status == Status::Pass ? "Pass" : "Fail") << ','
           << format_number(r.worst_residual, cfg.precision) << ',' << format_number(r.tolerance, cfg.precision) << ','
           << r.seed << '\n';
    return os.str();
}

inline bool emit(const std::string& text, const OutputConfig& cfg, std::ostream& out, std::ostream& err) {
    if (!cfg.path) {
        out << text;
        out.flush();
        return static_cast<bool>(out);
    }
    std::ofstream f(*cfg.path, std::ios::binary);
    f << text;
    f.close();
    if (!f) {
        err << "error: cannot write " << *cfg.path << "\n";
        return false;
    }
    return true;
}

// "lo..hi" or a single integer
inline std::pair<int, int> parse_m_range(const std::string& s) {
    const auto dots = s.find("..");
    std::size_t used = 0;
    if (dots == std::string::npos) {
        const int m = std::stoi(s, &used);
        if (used != s.size()) throw std::invalid_argument("bad m-range");
        return {m, m};
    }
    const std::string a = s.substr(0, dots), b = s.substr(dots + 2);
    const int lo = std::stoi(a, &used);
    if (used != a.size()) throw std::invalid_argument("bad m-range");
    const int hi = std::stoi(b, &used);
    if (used != b.size()) throw std::invalid_argument("bad m-range");
    return {lo, hi};
}

}  // namespace detail

inline Table table1_rows(const std::vector<int>& ms) {
    Table t{{"m", "b", "d", "t0", "W", "gill"}, {}};
    for (int m : ms) {
        if (m < 1) throw std::domain_error("table1: m must be >= 1");
        const auto r = maximize_W(m);
        t.rows.push_back({double(m), r.b, r.d, t0(r.b, m), r.value, gill_bound(m)});
    }
    return t;
}

inline Table curve_rows(int m, int samples) {
    if (m < 1) throw std::domain_error("curves: m must be >= 1");
    if (samples < 2) throw std::domain_error("curves: samples must be >= 2");
    Table t{{"b", "d_min", "d_opt", "d_max", "t0", "W"}, {}};
    const double lo = b_min(m), hi = curve_b_upper(m);
    for (int i = 0; i < samples; ++i) {
        const double b = i == samples - 1 ? hi : lo + (hi - lo) * i / (samples - 1);
        const double dop = d_opt(b, m);
        t.rows.push_back({b, d_min(b, m), dop, d_max(b, m), t0(b, m), W(b, dop, m)});
    }
    return t;
}

inline Table asymptotic_row() {
    const double x = x_infinity(1e-13);
    return {{"x_infinity", "bound", "sample"}, {{x, 1.0 / (std::exp(x) - 1.0), asymptotic_restricted(0.548, 1.164)}}};
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Numerical lower bounds for weak-type (1,1) constants of the operators Lambda_m and Lambda_m*"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    OutputConfig cfg;
    std::string format = "csv", out_path;
    auto add_output = [&](CLI::App* sc) {
        sc->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        sc->add_option("--out", out_path, "output file (default stdout)");
        sc->add_option("--precision", cfg.precision, "significant digits, 3..17")->check(CLI::Range(3, 17));
    };

    std::vector<int> ms{1, 2, 3, 4};
    auto* t1 = app.add_subcommand("table1", "optimal (b, d) and W for the requested m, with Gill's value");
    t1->add_option("--m", ms, "values of m")->delimiter(',')->check(CLI::Range(1, 1000000));
    add_output(t1);

    int curve_m = 2, samples = 100;
    auto* cv = app.add_subcommand("curves", "d_min, d_opt, d_max, t0 and W along the optimal curve");
    cv->add_option("--m", curve_m, "m")->check(CLI::Range(1, 1000000));
    cv->add_option("--samples", samples, "number of b samples (>= 2)")->check(CLI::Range(2, 10000000));
    add_output(cv);

    auto* as = app.add_subcommand("asymptotic", "x_infinity, the m -> infinity bound and the sample value");
    add_output(as);

    std::vector<std::string> suites;
    std::uint64_t seed = 0;
    std::string m_range = "1..200";
    auto* vf = app.add_subcommand("verify", "run verification suites; exit 1 if any check fails");
    vf->add_option("--suites", suites, "suite names (default: all)")->delimiter(',');
    vf->add_option("--seed", seed, "seed for randomized suites");
    vf->add_option("--m-range", m_range, "m range for bound134, as lo..hi");
    add_output(vf);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e, out, err);
        return rc == 0 ? kExitOk : kExitUsage;
    }
    cfg.format = format == "json" ? Format::Json : Format::Csv;
    if (!out_path.empty()) cfg.path = out_path;

    try {
        if (*t1) return detail::emit(detail::render(table1_rows(ms), cfg), cfg, out, err) ? kExitOk : kExitCheckFailed;
        if (*cv)
            return detail::emit(detail::render(curve_rows(curve_m, samples), cfg), cfg, out, err) ? kExitOk
                                                                                                    : kExitCheckFailed;
        if (*as) return detail::emit(detail::render(asymptotic_row(), cfg), cfg, out, err) ? kExitOk : kExitCheckFailed;

        VerifyOptions vo;
        std::tie(vo.m_lo, vo.m_hi) = detail::parse_m_range(m_range);
        if (vo.m_lo < 1 || vo.m_hi < vo.m_lo) throw std::invalid_argument("m-range must satisfy 1 <= lo <= hi");
        const auto reports = run_suite(suites, seed, vo);
        if (!detail::emit(detail::render(reports, cfg), cfg, out, err)) return kExitCheckFailed;
        bool ok = true;
        for (const auto& r : reports)
            if (r.status == Status::Fail) {
                err << "FAIL " << r.name << ": worst residual " << r.worst_residual << " > tolerance " << r.tolerance
                    << "\n";
                ok = false;
            }
        return ok ? kExitOk : kExitCheckFailed;
    } catch (const UnknownSuite& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitCheckFailed;
    }
}

}  // namespace weaktype
