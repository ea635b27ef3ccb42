// Command-line front end: single-state analysis, Ising and XXZ scans, and
// exact-diagonalization correlator dumps.
//
// Exit codes: 0 success, 2 validation failure, 3 numerical failure. Scans
// write every row and return 3 afterwards if any point failed numerically.

#include "qobesity/qobesity.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

namespace {

using namespace qobesity;
using nlohmann::json;

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

/// Writes to the file named by `path`, or stdout when it is empty or "-".
class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty() && path != "-") {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_)
                throw Error(ErrorCode::MalformedInput, "cannot write " + path);
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

// Config keys mirror the long flag names, grouped per subcommand:
//   {"ising-scan": {"from": 0, "to": 2, "step": 0.01, "k": 1, "quad-tol": 1e-10,
//                   "max-evaluations": 200000},
//    "xxz-scan":   {"from": -2, "to": 0, "step": 0.05, "n": 12}}
// Flags given on the command line win over the file.
template <typename T>
void apply_config(const json& cfg, const char* section, const char* key, const CLI::App* sub, T& target) {
    if (!cfg.contains(section) || !cfg[section].contains(key))
        return;
    if (sub->count(std::string("--") + key) > 0)
        return;
    target = cfg[section][key].get<T>();
}

void report_kink(const char* label, const std::vector<scan::ScanRecord>& recs, double scan::ScanRecord::*field) {
    try {
        const auto k = scan::kink_of(recs, field);
        std::cerr << label << ": param_hat=" << k.param_hat << " score=" << k.score << " window=[" << k.lo << ", "
                  << k.hi << "]\n";
    } catch (const Error& e) {
        std::cerr << label << ": " << e.what() << '\n';
    }
}

// Returns true when some point hit a quadrature or eigensolver failure.
bool report_statuses(const std::vector<scan::ScanRecord>& recs) {
    bool numerical = false;
    for (const auto& r : recs) {
        if (!r.status.empty())
            std::cerr << "param=" << r.param << ": " << r.status << '\n';
        numerical = numerical || r.numerical_failure;
    }
    return numerical;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum obesity, steering ellipsoids and local filtering for two-qubit states"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "JSON config file (flags override it)")->check(CLI::ExistingFile);

    // analyze
    auto* analyze = app.add_subcommand("analyze", "Report R, obesity, ellipsoids and volume for a state file");
    std::string state_path, filter_path, analyze_out;
    analyze->add_option("state", state_path, "state JSON {\"rho\": [[[re,im] x4] x4]}")->required();
    analyze->add_option("--filter", filter_path, "filter JSON {\"O_A\": ..., \"O_B\": ...}");
    analyze->add_option("--out", analyze_out, "output file (default stdout)");

    // ising-scan
    auto* ising_cmd = app.add_subcommand("ising-scan", "Sweep lambda for the transverse-field Ising chain");
    scan::IsingScanOptions iopt;
    std::string ising_out;
    ising_cmd->add_option("--from", iopt.lo, "first lambda");
    ising_cmd->add_option("--to", iopt.hi, "last lambda");
    ising_cmd->add_option("--step", iopt.step, "grid step");
    ising_cmd->add_option("--k", iopt.k, "pair separation (1..10)");
    ising_cmd->add_option("--quad-tol", iopt.quad_tol, "absolute quadrature tolerance");
    ising_cmd->add_option("--max-evaluations", iopt.max_evaluations, "quadrature node budget per integral");
    ising_cmd->add_flag("--filter,!--no-filter", iopt.with_filter, "apply the optimal local filter (default on)");
    ising_cmd->add_flag("--densify", iopt.densify, "add a 10x finer grid on [0.9, 1.1]");
    ising_cmd->add_option("--out", ising_out, "CSV output (default stdout)");

    // xxz-scan
    auto* xxz_cmd = app.add_subcommand("xxz-scan", "Sweep Delta for the XXZ chain");
    scan::XxzScanOptions xopt;
    std::string source = "ed", table_path, xxz_out;
    bool xxz_iterative = false;
    xxz_cmd->add_option("--from", xopt.lo, "first Delta");
    xxz_cmd->add_option("--to", xopt.hi, "last Delta");
    xxz_cmd->add_option("--step", xopt.step, "grid step");
    xxz_cmd->add_option("--n", xopt.n, "chain length for ED");
    xxz_cmd->add_option("--source", source, "ed or table")->check(CLI::IsMember({"ed", "table"}));
    xxz_cmd->add_option("--table-file", table_path, "correlator CSV (model,N,param,k,xx,yy,zz,sz)");
    xxz_cmd->add_flag("--iterative", xxz_iterative, "allow the iterative eigensolver (needed for N > 12)");
    xxz_cmd->add_option("--out", xxz_out, "CSV output (default stdout)");

    // ed-dump
    auto* dump_cmd = app.add_subcommand("ed-dump", "Exact-diagonalization correlators as CSV");
    std::string model_name = "ising", dump_out;
    ed::ChainSpec dump_spec;
    bool dump_iterative = false;
    dump_cmd->add_option("--model", model_name, "ising or xxz")->check(CLI::IsMember({"ising", "xxz"}));
    dump_cmd->add_option("--n", dump_spec.n, "chain length (2..14)");
    dump_cmd->add_option("--param", dump_spec.param, "lambda (ising) or Delta (xxz)")->required();
    dump_cmd->add_flag("--iterative", dump_iterative, "allow the iterative eigensolver (needed for N > 12)");
    dump_cmd->add_option("--out", dump_out, "CSV output (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    try {
        json cfg = json::object();
        if (!config_path.empty())
            cfg = io::detail::read_json_file(config_path);

        if (*analyze) {
            const Mat4c m = io::load_state_matrix(state_path);
            std::optional<LocalFilter> filter;
            if (!filter_path.empty())
                filter = io::load_filter(filter_path);
            const json report = io::analyze_state(m, filter ? &*filter : nullptr);
            Output out(analyze_out);
            out.stream() << report.dump(2) << '\n';
        } else if (*ising_cmd) {
            apply_config(cfg, "ising-scan", "from", ising_cmd, iopt.lo);
            apply_config(cfg, "ising-scan", "to", ising_cmd, iopt.hi);
            apply_config(cfg, "ising-scan", "step", ising_cmd, iopt.step);
            apply_config(cfg, "ising-scan", "k", ising_cmd, iopt.k);
            apply_config(cfg, "ising-scan", "quad-tol", ising_cmd, iopt.quad_tol);
            apply_config(cfg, "ising-scan", "max-evaluations", ising_cmd, iopt.max_evaluations);
            const auto recs = scan::ising_scan(iopt);
            Output out(ising_out);
            scan::write_ising_csv(out.stream(), recs);
            const bool failed = report_statuses(recs);
            report_kink("kink(d_omega)", recs, &scan::ScanRecord::d_omega);
            if (iopt.with_filter)
                report_kink("kink(d_omega_filtered)", recs, &scan::ScanRecord::d_omega_filtered);
            if (failed)
                return kExitNumerical;
        } else if (*xxz_cmd) {
            apply_config(cfg, "xxz-scan", "from", xxz_cmd, xopt.lo);
            apply_config(cfg, "xxz-scan", "to", xxz_cmd, xopt.hi);
            apply_config(cfg, "xxz-scan", "step", xxz_cmd, xopt.step);
            apply_config(cfg, "xxz-scan", "n", xxz_cmd, xopt.n);
            xopt.solver.allow_iterative = xxz_iterative;
            if (source == "table") {
                if (table_path.empty())
                    throw Error(ErrorCode::MalformedInput, "--source table needs --table-file");
                std::ifstream in(table_path);
                if (!in)
                    throw Error(ErrorCode::MalformedInput, "cannot open " + table_path);
                xopt.source = scan::XxzSource::Table;
                xopt.table = ed::read_correlator_table(in);
            }
            const auto recs = scan::xxz_scan(xopt);
            Output out(xxz_out);
            scan::write_xxz_csv(out.stream(), recs);
            const bool failed = report_statuses(recs);
            report_kink("kink(d_omega)", recs, &scan::ScanRecord::d_omega);
            if (failed)
                return kExitNumerical;
        } else if (*dump_cmd) {
            dump_spec.model = ed::parse_model(model_name);
            ed::SolverOptions sopt;
            sopt.allow_iterative = dump_iterative;
            const auto gs = ed::ground_space(dump_spec, sopt);
            Output out(dump_out);
            ed::write_correlator_table(out.stream(), ed::correlator_rows(dump_spec, gs));
            std::cerr << "energy=" << gs.energy << " degeneracy=" << gs.degeneracy() << '\n';
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
    return 0;
}
