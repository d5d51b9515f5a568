#include <CLI11.hpp>

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <vector>

#include "nacdens.h"

namespace {

int status_exit_code(nacd_status s) {
    switch (s) {
        case NACD_OK:
            return 0;
        case NACD_ERR_PARSE:
        case NACD_ERR_CONFIG:
            return 2;
        case NACD_ERR_BOUNDARY:
            return 3;
        case NACD_ERR_UNSUPPORTED:
            return 4;
        default:
            return 1;
    }
}

[[noreturn]] void die(nacd_status s, const std::string& context) {
    std::fprintf(stderr, "error: %s%s%s\n", context.c_str(), context.empty() ? "" : ": ",
                 nacd_last_error());
    std::exit(status_exit_code(s));
}

/* input-format problems (files, flag values) count as parse failures */
[[noreturn]] void die_input(const std::string& msg) {
    std::fprintf(stderr, "error: %s\n", msg.c_str());
    std::exit(2);
}

struct Tree {
    nacd_tree* t = nullptr;
    explicit Tree(const std::string& text) {
        const nacd_status s = nacd_parse(text.c_str(), &t);
        if (s != NACD_OK) die(s, "--structure");
    }
    ~Tree() { nacd_free(t); }
    Tree(const Tree&) = delete;
    Tree& operator=(const Tree&) = delete;
};

bool parse_field(std::string_view field, double& out) {
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t'))
        field.remove_prefix(1);
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t'))
        field.remove_suffix(1);
    if (field.empty()) return false;
    const char* end = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(field.data(), end, out);
    return ec == std::errc() && ptr == end;
}

bool parse_row(const std::string& line, std::vector<double>& row) {
    row.clear();
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        const std::size_t end = comma == std::string::npos ? line.size() : comma;
        double v;
        if (!parse_field(std::string_view(line).substr(start, end - start), v)) return false;
        row.push_back(v);
        if (comma == std::string::npos) return true;
        start = comma + 1;
    }
}

/* comma-separated, dot-decimal rows; a leading non-numeric line is treated as
 * a header and skipped */
std::vector<double> read_csv(const std::string& path, int want_cols, int& out_rows) {
    std::ifstream in(path);
    if (!in) die_input("cannot open " + path);
    std::vector<double> vals;
    std::vector<double> row;
    std::string line;
    int rows = 0;
    bool may_be_header = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!parse_row(line, row)) {
            if (may_be_header) {
                may_be_header = false;
                continue;
            }
            die_input(path + ": unparseable row " + std::to_string(rows));
        }
        may_be_header = false;
        if (static_cast<int>(row.size()) != want_cols)
            die_input(path + ": row " + std::to_string(rows) + " has " +
                      std::to_string(row.size()) + " columns, the structure needs " +
                      std::to_string(want_cols));
        vals.insert(vals.end(), row.begin(), row.end());
        ++rows;
    }
    if (rows == 0) die_input(path + ": no data rows");
    out_rows = rows;
    return vals;
}

struct AxisSpec {
    double lo = 0.0, hi = 0.0;
    int steps = 0;
};

AxisSpec parse_axis(const std::string& text, const char* flag) {
    const std::size_t c1 = text.find(':');
    const std::size_t c2 = c1 == std::string::npos ? std::string::npos : text.find(':', c1 + 1);
    AxisSpec a;
    double steps_real;
    if (c2 == std::string::npos || !parse_field(std::string_view(text).substr(0, c1), a.lo) ||
        !parse_field(std::string_view(text).substr(c1 + 1, c2 - c1 - 1), a.hi) ||
        !parse_field(std::string_view(text).substr(c2 + 1), steps_real) ||
        steps_real != static_cast<int>(steps_real))
        die_input(std::string(flag) + " wants lo:hi:steps, got '" + text + "'");
    a.steps = static_cast<int>(steps_real);
    return a;
}

int cmd_logpdf(const std::string& structure, const std::string& data_path, bool no_header) {
    Tree tree(structure);
    const int d = nacd_dim(tree.t);
    int rows = 0;
    const std::vector<double> vals = read_csv(data_path, d, rows);
    if (!no_header) std::printf("logpdf\n");
    for (int i = 0; i < rows; ++i) {
        double lp = 0.0, worst = 1.0;
        const nacd_status s = nacd_logpdf(tree.t, vals.data() + static_cast<std::size_t>(i) * d,
                                          d, &lp, &worst);
        if (s != NACD_OK) die(s, "row " + std::to_string(i));
        if (worst < 1e-8)
            std::fprintf(stderr, "warning: row %d: severe cancellation (relative residual %.3g)\n",
                         i, worst);
        std::printf("%.17g\n", lp);
    }
    return 0;
}

int cmd_sample(const std::string& structure, int n, std::uint64_t seed, bool no_header) {
    Tree tree(structure);
    const int d = nacd_dim(tree.t);
    std::vector<double> out(static_cast<std::size_t>(n) * d);
    const nacd_status s = nacd_sample(tree.t, n, seed, out.data());
    if (s != NACD_OK) die(s, "sample");
    if (!no_header) {
        for (int j = 0; j < d; ++j) std::printf("%su%d", j ? "," : "", j + 1);
        std::printf("\n");
    }
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < d; ++j)
            std::printf("%s%.17g", j ? "," : "", out[static_cast<std::size_t>(i) * d + j]);
        std::printf("\n");
    }
    return 0;
}

int cmd_fit(const std::string& structure, const std::string& data_path,
            const std::string& init_text) {
    Tree tree(structure);
    std::vector<double> init;
    if (!parse_row(init_text, init) || init.size() != 2)
        die_input("--init wants two comma-separated strengths, got '" + init_text + "'");
    const int d = nacd_dim(tree.t);
    int rows = 0;
    const std::vector<double> vals = read_csv(data_path, d, rows);
    nacd_fit2_result r{};
    const nacd_status s = nacd_fit2(tree.t, vals.data(), rows, init[0], init[1], &r);
    if (s != NACD_OK) die(s, "fit");
    std::printf("theta0=%.17g\n", r.theta0);
    std::printf("theta1=%.17g\n", r.theta1);
    std::printf("nll=%.17g\n", r.nll);
    std::printf("iterations=%d\n", r.iterations);
    std::printf("converged=%d\n", r.converged);
    std::printf("constraint_active=%d\n", r.constraint_active);
    return 0;
}

int cmd_grid(const std::string& structure, const std::string& data_path, const AxisSpec& ax0,
             const AxisSpec& ax1, int threads, bool no_header) {
    Tree tree(structure);
    const int d = nacd_dim(tree.t);
    int rows = 0;
    const std::vector<double> vals = read_csv(data_path, d, rows);
    std::vector<double> cells(static_cast<std::size_t>(ax0.steps) * ax1.steps * 3);
    const nacd_status s = nacd_grid_scan(tree.t, vals.data(), rows, ax0.lo, ax0.hi, ax0.steps,
                                         ax1.lo, ax1.hi, ax1.steps, threads, cells.data());
    if (s != NACD_OK) die(s, "grid");
    if (!no_header) std::printf("theta0,theta1,nll\n");
    for (std::size_t i = 0; i < cells.size(); i += 3)
        std::printf("%.17g,%.17g,%.17g\n", cells[i], cells[i + 1], cells[i + 2]);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"nested Archimedean copula toolkit: evaluate, sample, fit, scan"};
    app.require_subcommand(1);

    std::string structure, data_path, init_text, grid0_text, grid1_text;
    int n = 0, threads = 1;
    std::uint64_t seed = 0;
    bool no_header = false;

    CLI::App* c_logpdf = app.add_subcommand("logpdf", "log density per data row");
    c_logpdf->add_option("--structure", structure, "structure expression")->required();
    c_logpdf->add_option("--data", data_path, "CSV of points in (0,1)^d")->required();
    c_logpdf->add_flag("--no-header", no_header, "suppress the output header line");

    CLI::App* c_sample = app.add_subcommand("sample", "draw observations as CSV");
    c_sample->add_option("--structure", structure, "structure expression")->required();
    c_sample->add_option("--n", n, "number of rows")->required()->check(CLI::NonNegativeNumber);
    c_sample->add_option("--seed", seed, "RNG seed (row i depends on (seed, i) alone)");
    c_sample->add_flag("--no-header", no_header, "suppress the output header line");

    CLI::App* c_fit = app.add_subcommand("fit", "two-parameter maximum likelihood fit");
    c_fit->add_option("--structure", structure, "structure skeleton (root theta0, rest theta1)")
        ->required();
    c_fit->add_option("--data", data_path, "CSV of observations")->required();
    c_fit->add_option("--init", init_text, "starting point as theta0,theta1")->required();

    CLI::App* c_grid = app.add_subcommand("grid", "dense scan of the likelihood surface");
    c_grid->add_option("--structure", structure, "structure skeleton (root theta0, rest theta1)")
        ->required();
    c_grid->add_option("--data", data_path, "CSV of observations")->required();
    c_grid->add_option("--theta0-grid", grid0_text, "root axis as lo:hi:steps")->required();
    c_grid->add_option("--theta1-grid", grid1_text, "nested axis as lo:hi:steps")->required();
    c_grid->add_option("--threads", threads, "worker threads for the scan");
    c_grid->add_flag("--no-header", no_header, "suppress the output header line");

    CLI::App* c_selftest =
        app.add_subcommand("selftest", "run the library's curated cross-checks");

    CLI11_PARSE(app, argc, argv);

    if (app.got_subcommand(c_logpdf)) return cmd_logpdf(structure, data_path, no_header);
    if (app.got_subcommand(c_sample)) return cmd_sample(structure, n, seed, no_header);
    if (app.got_subcommand(c_fit)) return cmd_fit(structure, data_path, init_text);
    if (app.got_subcommand(c_grid))
        return cmd_grid(structure, data_path, parse_axis(grid0_text, "--theta0-grid"),
                        parse_axis(grid1_text, "--theta1-grid"), threads, no_header);
    if (app.got_subcommand(c_selftest)) return nacd_selftest(0) == 0 ? 0 : 1;
    return 1;
}
