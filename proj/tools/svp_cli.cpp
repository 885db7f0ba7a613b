// Command-line front end: kloosterman, poincare, sv, table, verify.
//
// Exit codes: 0 success, 1 verification failure or runtime error, 2 usage,
// 3 tolerance not reached, 4 route unavailable.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "svp/arith.hpp"
#include "svp/forms_catalog.hpp"
#include "svp/periods.hpp"
#include "svp/poincare.hpp"
#include "svp/single_valued.hpp"
#include "svp/verification.hpp"

namespace {

using json = nlohmann::ordered_json;

enum Exit { kOk = 0, kFail = 1, kUsage = 2, kTolerance = 3, kUnavailable = 4 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Format { text, json, csv };

struct Common {
    std::string format = "text";
    std::string output;
    std::int64_t c_max = 0;
    double tol = 0.0;
    std::int64_t hard_cap = 4'000'000;
    unsigned threads = 1;

    Format fmt() const {
        if (format == "json") return Format::json;
        if (format == "csv") return Format::csv;
        return Format::text;
    }

    std::optional<svp::poincare::Control> control() const {
        if (c_max > 0 && tol > 0.0) throw UsageError("--c-max and --tol are mutually exclusive");
        if (c_max <= 0 && tol <= 0.0) return std::nullopt;
        svp::poincare::Control c;
        c.c_max = c_max;
        c.tol = tol;
        c.hard_cap = hard_cap;
        c.threads = threads;
        return c;
    }

    svp::poincare::Control control_or(svp::poincare::Control fallback) const {
        auto c = control();
        if (c) return *c;
        fallback.hard_cap = hard_cap;
        fallback.threads = threads;
        return fallback;
    }
};

void add_common(CLI::App* cmd, Common& common, bool summation) {
    cmd->add_option("--format", common.format, "Output format")
        ->check(CLI::IsMember({"text", "json", "csv"}))
        ->capture_default_str();
    cmd->add_option("--output", common.output, "Write to this file instead of stdout");
    if (summation) {
        auto* c = cmd->add_option("--c-max", common.c_max, "Sum over moduli c <= C")->check(CLI::PositiveNumber);
        auto* t = cmd->add_option("--tol", common.tol, "Sum until the tail bound is below TOL")->check(CLI::PositiveNumber);
        c->excludes(t);
        cmd->add_option("--hard-cap", common.hard_cap, "Largest modulus tried with --tol")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        cmd->add_option("--threads", common.threads, "Worker threads (0 = hardware)")->capture_default_str();
    }
}

// Text formats use 12 significant digits.
std::string text_num(double x) {
    if (!std::isfinite(x)) return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

json json_num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

std::string csv_row(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) out += (i ? "," : "") + csv_field(fields[i]);
    return out + "\r\n";
}

std::string json_text(const json& j) { return j.dump(2) + "\n"; }

void emit(const Common& common, const std::string& content) {
    if (common.output.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(common.output, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + common.output);
    out << content;
}

// ---- kloosterman ----

struct KloostermanArgs {
    std::int64_t a = 0, b = 0, c = 0;
};

int cmd_kloosterman(const KloostermanArgs& args) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12f", svp::arith::kloosterman(args.a, args.b, args.c));
    std::cout << buf << '\n';
    return kOk;
}

// ---- poincare ----

struct PoincareArgs {
    std::int64_t N = 1;
    int weight = 2;
    std::int64_t m = 0;
    std::int64_t n_max = 10;
    Common common;
};

int cmd_poincare(const PoincareArgs& args) {
    svp::poincare::Control fallback;
    fallback.tol = 1e-8;
    if (args.weight == 2) {
        fallback.tol = 0.0;
        fallback.c_max = 100000;
    }
    const auto control = args.common.control_or(fallback);
    const auto rows = svp::poincare::poincare_qexp(args.m, args.weight, args.N, args.n_max, control);
    bool short_of_tol = false;
    for (const auto& r : rows) short_of_tol = short_of_tol || !r.converged;
    const std::string warning = "tolerance not reached within the hard cap";

    std::string out;
    switch (args.common.fmt()) {
        case Format::json: {
            json arr = json::array();
            for (std::size_t i = 0; i < rows.size(); ++i) {
                json row;
                row["n"] = static_cast<std::int64_t>(i + 1);
                row["value"] = json_num(rows[i].value);
                row["tail_estimate"] = json_num(rows[i].tail_estimate);
                row["c_max"] = rows[i].c_max;
                if (!rows[i].converged) row["warning"] = warning;
                arr.push_back(row);
            }
            out = json_text(arr);
            break;
        }
        case Format::csv: {
            out = csv_row({"n", "value", "tail_estimate", "c_max", "warning"});
            for (std::size_t i = 0; i < rows.size(); ++i) {
                out += csv_row({std::to_string(i + 1), text_num(rows[i].value), text_num(rows[i].tail_estimate),
                                std::to_string(rows[i].c_max), rows[i].converged ? "" : warning});
            }
            break;
        }
        case Format::text: {
            std::ostringstream os;
            os << "# P_{" << args.m << "," << args.weight << "," << args.N << "}\n";
            os << "# n value tail_estimate c_max\n";
            for (std::size_t i = 0; i < rows.size(); ++i) {
                os << (i + 1) << ' ' << text_num(rows[i].value) << ' ' << text_num(rows[i].tail_estimate) << ' '
                   << rows[i].c_max << (rows[i].converged ? "" : " " + warning) << '\n';
            }
            out = os.str();
            break;
        }
    }
    emit(args.common, out);
    if (short_of_tol) {
        std::cerr << "svp poincare: " << warning << '\n';
        return kTolerance;
    }
    return kOk;
}

// ---- sv ----

struct SvArgs {
    std::int64_t N = 11;
    int weight = 2;
    std::string route = "both";
    std::int64_t n_max = 8;
    Common common;
};

json residuals_json(const std::vector<svp::sv::Residual>& rs) {
    json arr = json::array();
    for (const auto& r : rs) {
        json j;
        j["m"] = r.m;
        j["n"] = r.n;
        j["value"] = json_num(r.value);
        j["bound"] = json_num(r.bound);
        arr.push_back(j);
    }
    return arr;
}

json result_json(const svp::sv::RankTwoResult& r) {
    json j;
    j["c"] = r.has_c ? json_num(r.c) : json(nullptr);
    j["rho"] = r.has_rho ? json_num(r.rho) : json(nullptr);
    j["note"] = r.note;
    j["residuals"] = residuals_json(r.residuals);
    return j;
}

// Flatten a JSON record into (path, value) pairs for the text and CSV forms.
void flatten(const json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it) {
            flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
        }
    } else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", out);
    } else if (j.is_number_float()) {
        out.emplace_back(prefix, text_num(j.get<double>()));
    } else if (j.is_string()) {
        out.emplace_back(prefix, j.get<std::string>());
    } else {
        out.emplace_back(prefix, j.dump());
    }
}

std::string render_record(const json& j, Format fmt) {
    if (fmt == Format::json) return json_text(j);
    std::vector<std::pair<std::string, std::string>> kv;
    flatten(j, "", kv);
    std::string out;
    if (fmt == Format::csv) {
        out = csv_row({"field", "value"});
        for (const auto& [k, v] : kv) out += csv_row({k, v});
    } else {
        for (const auto& [k, v] : kv) out += k + ": " + v + "\n";
    }
    return out;
}

int cmd_sv(const SvArgs& args) {
    const auto c = svp::catalog::find_case(args.N, args.weight);
    if (!c) throw UsageError("(" + std::to_string(args.N) + ", " + std::to_string(args.weight) + ") is not a rank-two case");
    const bool want_periods = args.route != "poincare";
    const bool want_poincare = args.route != "periods";
    if (want_periods && c->weight != 2) {
        throw svp::sv::RouteUnavailable("the periods route needs a weight-2 case with a curve model; (" +
                                        std::to_string(c->level) + ", " + std::to_string(c->weight) +
                                        ") has none");
    }
    json rec;
    rec["level"] = c->level;
    rec["weight"] = c->weight;
    rec["cm"] = c->cm;
    rec["route"] = args.route;
    std::optional<svp::sv::RankTwoResult> a, b;
    if (want_periods) {
        a = svp::sv::rank2_periods(*c);
        rec["periods"] = result_json(*a);
    }
    if (want_poincare) {
        const auto control = args.common.control_or(svp::sv::default_control(*c));
        b = svp::sv::rank2_rho_poincare(*c, std::nullopt, args.n_max, control);
        json pj = result_json(*b);
        pj["c_max"] = control.c_max;
        pj["tol"] = json_num(control.tol);
        rec["poincare"] = pj;
    }
    if (a && b) {
        json dev;
        dev["c"] = json_num(std::abs(a->c - b->c));
        dev["rho"] = json_num(std::abs(a->rho - b->rho));
        rec["deviation"] = dev;
    }
    emit(args.common, render_record(rec, args.common.fmt()));
    return kOk;
}

// ---- table ----

struct TableArgs {
    std::int64_t n_max = 8;
    double rationality_tol = 5e-3;
    Common common;
};

int cmd_table(const TableArgs& args) {
    json rows = json::array();
    int failed = 0;
    for (const auto& c : svp::catalog::rank_two_table()) {
        json row;
        row["level"] = c.level;
        row["weight"] = c.weight;
        row["cm"] = c.cm;
        row["c_periods"] = nullptr;
        row["rho_periods"] = nullptr;
        row["c_poincare"] = nullptr;
        row["rho_poincare"] = nullptr;
        row["max_residual"] = nullptr;
        row["rationality"] = nullptr;
        row["error"] = nullptr;
        std::string errors;
        int attempts = 0, failures = 0;
        auto attempt = [&](auto&& fn) {
            ++attempts;
            try {
                fn();
            } catch (const std::exception& e) {
                ++failures;
                errors += (errors.empty() ? "" : "; ") + std::string(e.what());
            }
        };
        const auto control = args.common.control_or(svp::sv::default_control(c));
        if (c.weight == 2) {
            attempt([&] {
                const auto a = svp::sv::rank2_periods(c);
                row["c_periods"] = json_num(a.c);
                row["rho_periods"] = json_num(a.rho);
            });
        }
        attempt([&] {
            const auto b = svp::sv::rank2_rho_poincare(c, std::nullopt, args.n_max, control);
            row["c_poincare"] = json_num(b.c);
            row["rho_poincare"] = json_num(b.rho);
            double worst = 0.0;
            for (const auto& r : b.residuals) worst = std::max(worst, std::abs(r.value));
            row["max_residual"] = json_num(worst);
        });
        attempt([&] {
            const auto rep = svp::sv::cm_rationality_check(c, args.n_max, control, args.rationality_tol);
            row["rationality"] = rep.pass ? "pass" : "fail";
        });
        if (!errors.empty()) row["error"] = errors;
        if (failures == attempts) ++failed;
        rows.push_back(row);
    }

    std::string out;
    switch (args.common.fmt()) {
        case Format::json:
            out = json_text(rows);
            break;
        case Format::csv:
        case Format::text: {
            std::vector<std::string> header;
            for (auto it = rows[0].begin(); it != rows[0].end(); ++it) header.push_back(it.key());
            auto cell = [](const json& v) {
                if (v.is_null()) return std::string("null");
                if (v.is_number_float()) return text_num(v.get<double>());
                if (v.is_string()) return v.get<std::string>();
                return v.dump();
            };
            if (args.common.fmt() == Format::csv) {
                out = csv_row(header);
                for (const auto& r : rows) {
                    std::vector<std::string> f;
                    for (const auto& h : header) f.push_back(r[h].is_null() ? "" : cell(r[h]));
                    out += csv_row(f);
                }
            } else {
                std::ostringstream os;
                for (std::size_t i = 0; i < header.size(); ++i) os << (i ? " " : "# ") << header[i];
                os << '\n';
                for (const auto& r : rows) {
                    for (std::size_t i = 0; i < header.size(); ++i) os << (i ? " " : "") << cell(r[header[i]]);
                    os << '\n';
                }
                out = os.str();
            }
            break;
        }
    }
    emit(args.common, out);
    return failed == static_cast<int>(rows.size()) ? kFail : kOk;
}

// ---- verify ----

int cmd_verify(const std::string& suite) {
    const auto results = svp::verify::run_suite(suite == "fast", std::cout);
    int failed = 0;
    for (const auto& r : results) failed += r.pass ? 0 : 1;
    std::cout << (failed == 0 ? "all checks passed" : std::to_string(failed) + " check(s) failed") << '\n';
    return failed == 0 ? kOk : kFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Single-valued periods of rank-two modular motives"};
    app.require_subcommand(1);

    KloostermanArgs kl;
    auto* k_cmd = app.add_subcommand("kloosterman", "Kloosterman sum K(a, b; c)");
    k_cmd->add_option("--a", kl.a, "First argument")->capture_default_str();
    k_cmd->add_option("--b", kl.b, "Second argument")->capture_default_str();
    k_cmd->add_option("--c", kl.c, "Modulus")->required()->check(CLI::PositiveNumber);

    PoincareArgs pa;
    auto* p_cmd = app.add_subcommand("poincare", "Fourier coefficients of P_{m,weight,N}");
    p_cmd->add_option("--N", pa.N, "Level")->capture_default_str()->check(CLI::PositiveNumber);
    p_cmd->add_option("--weight", pa.weight, "Weight (even, >= 2)")->capture_default_str();
    p_cmd->add_option("--m", pa.m, "Index m (nonzero)")->required();
    p_cmd->add_option("--n-max", pa.n_max, "Largest coefficient index")->capture_default_str()->check(CLI::PositiveNumber);
    add_common(p_cmd, pa.common, true);

    SvArgs sa;
    auto* s_cmd = app.add_subcommand("sv", "Single-valued periods (c, rho) of a rank-two case");
    s_cmd->add_option("--N", sa.N, "Level")->capture_default_str();
    s_cmd->add_option("--weight", sa.weight, "Weight")->capture_default_str();
    s_cmd->add_option("--route", sa.route, "periods, poincare or both")
        ->check(CLI::IsMember({"periods", "poincare", "both"}))
        ->capture_default_str();
    s_cmd->add_option("--n-max", sa.n_max, "Residual range")->capture_default_str()->check(CLI::Range(2, 200));
    add_common(s_cmd, sa.common, true);

    TableArgs ta;
    auto* t_cmd = app.add_subcommand("table", "Survey of all rank-two cases");
    t_cmd->add_option("--n-max", ta.n_max, "Coefficients per case")->capture_default_str()->check(CLI::Range(2, 200));
    add_common(t_cmd, ta.common, true);

    std::string suite = "all";
    auto* v_cmd = app.add_subcommand("verify", "Run the acceptance checks");
    v_cmd->add_option("--suite", suite, "all or fast")->check(CLI::IsMember({"all", "fast"}))->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        std::cout << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        std::cerr << "svp: " << e.what() << '\n';
        return kUsage;
    }

    try {
        if (*k_cmd) return cmd_kloosterman(kl);
        if (*p_cmd) return cmd_poincare(pa);
        if (*s_cmd) return cmd_sv(sa);
        if (*t_cmd) return cmd_table(ta);
        if (*v_cmd) return cmd_verify(suite);
    } catch (const UsageError& e) {
        std::cerr << "svp: " << e.what() << '\n';
        return kUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "svp: " << e.what() << '\n';
        return kUsage;
    } catch (const std::out_of_range& e) {
        std::cerr << "svp: " << e.what() << '\n';
        return kUsage;
    } catch (const std::overflow_error& e) {
        std::cerr << "svp: " << e.what() << '\n';
        return kUsage;
    } catch (const svp::sv::RouteUnavailable& e) {
        std::cerr << "svp: " << e.what() << '\n';
        return kUnavailable;
    } catch (const svp::sv::ToleranceNotMet& e) {
        std::cerr << "svp: " << e.what() << '\n';
        return kTolerance;
    } catch (const std::exception& e) {
        std::cerr << "svp: " << e.what() << '\n';
        return kFail;
    }
    return kUsage;
}
