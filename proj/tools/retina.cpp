// retina: batch driver for the vessel, optic disc and exudate pipelines.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "retina/cli/batch.hpp"
#include "retina/cli/config.hpp"
#include "retina/cli/dataset.hpp"
#include "retina/cli/image_io.hpp"
#include "retina/dcnn.hpp"

namespace fs = std::filesystem;
using namespace retina;

namespace {

struct PipelineArgs {
    std::string input;
    std::string layout = "flat";
    std::string out;
    std::string config;
    std::vector<std::string> overrides;
    int jobs = 1;
    bool print_config = false;
    bool no_fov = false;
    bool csv_timing = false;
};

void add_pipeline_options(CLI::App* sub, PipelineArgs& a, const std::string& layouts) {
    sub->add_option("--input", a.input, "Dataset directory or a single image")->required();
    sub->add_option("--layout", a.layout, "Directory layout: " + layouts)->default_val("flat");
    sub->add_option("--out", a.out, "Output directory")->required();
    sub->add_option("--config", a.config, "Config file of key = value lines");
    sub->add_option("--set", a.overrides, "Override a config key (key=value), repeatable");
    sub->add_option("--jobs", a.jobs, "Images processed concurrently")->check(CLI::PositiveNumber);
    sub->add_flag("--print-config", a.print_config, "Print the effective configuration before running");
    sub->add_flag("--csv-timing", a.csv_timing, "Write measured seconds into metrics.csv");
}

int run_pipeline(cli::Command cmd, const PipelineArgs& a) {
    PipelineConfig cfg;
    if (!a.config.empty()) cfg = cli::load_config(a.config);
    cli::apply_overrides(cfg, a.overrides);
    if (a.print_config) std::cout << cli::format_config(cfg) << std::flush;

    const auto loaded = cli::load_dataset(a.input, cli::parse_layout(a.layout));
    for (const auto& w : loaded.warnings) std::cerr << "warning: " << w << '\n';

    cli::RunOptions options;
    options.jobs = a.jobs;
    options.use_fov = !a.no_fov;
    options.csv_timing = a.csv_timing;
    const auto manifest = cli::run_batch(cmd, loaded.items, cfg, a.out, options);

    for (const auto& r : manifest.items)
        if (!r.ok) std::cerr << "error: " << r.id << ": " << r.error << '\n';
    const auto& m = manifest.aggregate.mean;
    std::cout << cli::command_name(cmd) << ": " << manifest.items.size() - manifest.failures() << "/"
              << manifest.items.size() << " images processed";
    if (m.accuracy)
        std::cout << "; mean accuracy " << *m.accuracy << "%, specificity " << m.specificity.value_or(0.0)
                  << "%, sensitivity " << m.sensitivity.value_or(0.0) << "%, dice " << m.dice.value_or(0.0);
    if (manifest.od_evaluated > 0)
        std::cout << "; optic disc hits " << manifest.od_hits << "/" << manifest.od_evaluated;
    std::cout << '\n';
    return manifest.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Retinal fundus analysis: vessels, optic disc, exudates"};
    app.require_subcommand(1);

    PipelineArgs vessels, disc, exudates;
    auto* vs = app.add_subcommand("vessels", "Segment blood vessels");
    add_pipeline_options(vs, vessels, "drive|flat");
    vs->add_flag("--no-fov", vessels.no_fov, "Score over all pixels even when FOV masks are present");
    auto* od = app.add_subcommand("optic-disc", "Locate the optic disc");
    add_pipeline_options(od, disc, "idrid-seg|flat");
    auto* ex = app.add_subcommand("exudates", "Detect hard exudates");
    add_pipeline_options(ex, exudates, "idrid-seg|flat");

    std::string pred, gt, fov, csv;
    auto* ev = app.add_subcommand("eval", "Score predicted masks against ground truth");
    ev->add_option("--pred", pred, "Directory of predicted masks")->required();
    ev->add_option("--gt", gt, "Directory of ground-truth masks")->required();
    ev->add_option("--fov", fov, "Directory of field-of-view masks");
    ev->add_option("--out", csv, "Metrics CSV to write")->required();

    std::string shape = "300x300x3", arch;
    auto* ds = app.add_subcommand("dcnn-shapes", "Trace layer output shapes of a CNN description");
    ds->add_option("--input", shape, "Input shape HxWxC")->default_val("300x300x3");
    ds->add_option("--arch", arch, "Layer list file (defaults to the built-in grading network)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*vs) return run_pipeline(cli::Command::vessels, vessels);
        if (*od) return run_pipeline(cli::Command::optic_disc, disc);
        if (*ex) return run_pipeline(cli::Command::exudates, exudates);
        if (*ev) {
            const auto m = cli::evaluate_directory(pred, gt, fov.empty() ? std::nullopt : std::optional<fs::path>(fov));
            cli::write_metrics_csv(m, csv);
            for (const auto& r : m.items)
                if (!r.ok) std::cerr << "error: " << r.id << ": " << r.error << '\n';
            std::cout << "eval: " << m.items.size() - m.failures() << "/" << m.items.size() << " masks scored -> "
                      << csv << '\n';
            return m.exit_code();
        }
        if (*ds) {
            std::vector<dcnn::LayerSpec> layers;
            if (arch.empty()) {
                layers = dcnn::reference_architecture();
            } else {
                std::ifstream in(arch);
                if (!in) throw cli::IoError("cannot open architecture file " + arch);
                layers = dcnn::parse_architecture(in);
            }
            const auto trace = dcnn::trace_shapes(dcnn::parse_shape(shape), layers);
            dcnn::print_trace(std::cout, trace);
            const auto problems = dcnn::check_reference_layout(trace);
            if (problems.empty()) {
                std::cout << "layout: matches the 14-conv / FC-1024 / sigmoid reference\n";
            } else {
                for (const auto& p : problems) std::cout << "layout: " << p << '\n';
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "fatal: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
