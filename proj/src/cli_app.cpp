#include "subnyq/cli_app.hpp"

#include <exception>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "subnyq/config_io.hpp"
#include "subnyq/evaluation.hpp"
#include "subnyq/result_io.hpp"

namespace subnyq {

namespace {

bool write_file(const std::string& path, const std::string& contents, std::ostream& err) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        err << "error: cannot open '" << path << "' for writing\n";
        return false;
    }
    f << contents;
    f.close();
    if (!f) {
        err << "error: failed writing '" << path << "'\n";
        return false;
    }
    return true;
}

}  // namespace

int run_command(const RunOptions& opt, std::ostream& out, std::ostream& err) {
    ExperimentConfig cfg;
    try {
        cfg = load_experiment_config(opt.config_path);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    if (opt.seed) cfg.master_seed = *opt.seed;
    if (opt.trials) cfg.trials = *opt.trials;

    std::vector<CellResult> cells;
    try {
        const int workers = opt.workers.value_or(0);
        cells = run_sweep(cfg, workers);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }

    const std::string csv = render_csv(rows_from_sweep(cfg, cells));
    if (!write_file(opt.out_path, csv, err)) return 1;
    out << opt.out_path << " (" << cells.size() << " cells)\n";
    return 0;
}

int plot_command(const PlotOptions& opt, std::ostream& out, std::ostream& err) {
    std::ifstream f(opt.csv_path, std::ios::binary);
    if (!f) {
        err << "error: cannot read '" << opt.csv_path << "'\n";
        return 1;
    }
    std::ostringstream buf;
    buf << f.rdbuf();

    std::vector<ResultRow> rows;
    std::string svg;
    try {
        rows = parse_csv(buf.str());
        svg = render_plot_svg(rows, opt.metric);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }

    if (!write_file(opt.out_path, svg, err)) return 1;
    out << opt.out_path << "\n";
    return 0;
}

}  // namespace subnyq
