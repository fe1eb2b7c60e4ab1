#include "commands.hpp"

#include "ctrlgauge/control.hpp"
#include "ctrlgauge/error.hpp"
#include "ctrlgauge/io.hpp"
#include "ctrlgauge/oracle.hpp"
#include "ctrlgauge/region.hpp"
#include "ctrlgauge/zonotope.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace ctrlgauge::cli {

namespace fs = std::filesystem;

namespace {

struct Options {
    std::string model;
    std::string modelB;
    std::string mode = "rated";
    std::string steps = "10";
    std::string kind;
    std::vector<std::string> project;
    std::string format = "json";
    std::string x0;
    int maxSteps = kDefaultMaxSteps;
    std::uint64_t seed = 1;
    std::string level = "quick";
    std::string outDir = ".";
    std::string fault;
};

// Collects what a run read and wrote for the manifest.
class Run {
public:
    Run(std::string command, const Options& opt) : command_(std::move(command)), dir_(opt.outDir)
    {
        fs::create_directories(dir_);
    }

    void input(const std::string& path) { inputs_.push_back(path); }
    void parameter(const std::string& key, const nlohmann::json& value) { params_[key] = value; }

    fs::path write(const std::string& name, const std::string& content)
    {
        const fs::path path = dir_ / name;
        io::write_atomic(path, content);
        outputs_.push_back(path.string());
        spdlog::debug("wrote {}", path.string());
        return path;
    }

    void finish()
    {
        const auto now = std::chrono::system_clock::now();
        const std::time_t t = std::chrono::system_clock::to_time_t(now);
        std::tm utc{};
        gmtime_r(&t, &utc);
        std::ostringstream stamp;
        stamp << std::put_time(&utc, "%Y-%m-%dT%H:%M:%SZ");
        nlohmann::json j = {{"command", command_},
                            {"inputs", inputs_},
                            {"parameters", params_},
                            {"outputs", outputs_},
                            {"toolVersion", CTRLGAUGE_VERSION},
                            {"timestamp", stamp.str()}};
        io::write_atomic(dir_ / "manifest.json", j.dump(2) + "\n");
    }

private:
    std::string command_;
    fs::path dir_;
    std::vector<std::string> inputs_;
    nlohmann::json params_ = nlohmann::json::object();
    std::vector<std::string> outputs_;
};

std::vector<int> parse_ints(const std::string& text)
{
    std::vector<int> out;
    for (double v : io::parse_vector(text)) {
        if (v != std::floor(v) || v < -1e9 || v > 1e9) {
            throw Error(ErrorCode::InvalidArgument, "expected integers, got '" + text + "'");
        }
        out.push_back(static_cast<int>(v));
    }
    return out;
}

void print_matrix(std::ostream& out, const std::string& label, const Matrix& m)
{
    out << label << " =\n";
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        out << "  [";
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            out << ' ' << std::setw(10) << format4(m(i, j));
        }
        out << " ]\n";
    }
}

std::string format_vector(const Vector& v)
{
    std::string s = "[";
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        s += (i ? ", " : "") + format4(v[i]);
    }
    return s + "]";
}

RegionKind kind_or(const Options& opt, RegionKind fallback)
{
    return opt.kind.empty() ? fallback : parse_region_kind(opt.kind);
}

std::string polygon_json(const Polygon& poly)
{
    nlohmann::json verts = nlohmann::json::array();
    for (const auto& v : poly.vertices) {
        verts.push_back({v.x(), v.y()});
    }
    return nlohmann::json({{"vertices", verts}, {"degenerate", poly.degenerate}}).dump(2) + "\n";
}

int cmd_normalize(const Options& opt, std::ostream& out)
{
    Run run("normalize", opt);
    run.input(opt.model);
    run.parameter("mode", opt.mode);
    if (opt.mode != "rated" && opt.mode != "target") {
        throw Error(ErrorCode::InvalidArgument, "mode must be rated or target");
    }
    const bool useTarget = opt.mode == "target";
    const io::ModelFile model = io::load_model(opt.model);
    const io::ModelFile norm = io::normalize_model(model, useTarget);
    out << norm.system.name() << "\n";
    print_matrix(out, "A'", norm.system.A());
    print_matrix(out, "B'", norm.system.B());
    run.write("normalized_" + opt.mode + ".json", io::model_json(norm));
    run.finish();
    return kOk;
}

int cmd_region(const Options& opt, std::ostream& out)
{
    Run run("region", opt);
    run.input(opt.model);
    const RegionKind kind = kind_or(opt, RegionKind::Reach);
    std::vector<int> steps = parse_ints(opt.steps);
    std::sort(steps.begin(), steps.end());
    if (steps.front() < 1) {
        throw Error(ErrorCode::BadRange, "steps must be at least 1");
    }
    if (opt.format != "json" && opt.format != "csv" && opt.format != "svg") {
        throw Error(ErrorCode::InvalidArgument, "format must be json, csv or svg");
    }
    run.parameter("steps", steps);
    run.parameter("kind", std::string(to_string(kind)));
    run.parameter("format", opt.format);
    run.parameter("project", opt.project);

    const io::ModelFile model = io::load_model(opt.model);
    const RegionFamily family = build_region(model.system, kind, steps.back());
    const ShapeReport shape = shape_report(family.stage(steps.back()));
    out << "region " << to_string(kind) << " of " << model.system.name() << ", N = " << steps.back() << "\n";
    out << "  rank            " << shape.rank << "\n";
    out << "  volume          " << format4(shape.volume) << "\n";
    out << "  shape factor    " << format4(shape.overallShapeFactor) << "\n";
    for (const auto& [axes, f] : shape.planarShapeFactors) {
        out << "  planar factor " << axes.first + 1 << "," << axes.second + 1 << " " << format4(f) << "\n";
    }
    out << "  half sides      " << format_vector(shape.sideLengths) << "\n";
    out << "  vertices        " << vertices(family.stage(steps.back())).size() << "\n";
    run.write("region_" + std::string(to_string(kind)) + "_N" + std::to_string(steps.back()) + ".json",
              io::region_summary_json(family));

    for (const std::string& pair : opt.project) {
        const std::vector<int> axes = parse_ints(pair);
        if (axes.size() != 2) {
            throw Error(ErrorCode::BadAxes, "--project takes two 1-based axes, got '" + pair + "'");
        }
        const int i = axes[0] - 1;
        const int j = axes[1] - 1;
        const std::string tag = "x" + std::to_string(axes[0]) + "x" + std::to_string(axes[1]);
        std::vector<SvgLayer> layers;
        for (int k : steps) {
            const Polygon poly = project_2d(family.stage(k), i, j);
            if (poly.degenerate) {
                out << "  projection " << axes[0] << "," << axes[1] << " at N = " << k
                    << " is degenerate (" << poly.vertices.size() << " vertices)\n";
            }
            const std::string base = "region_" + std::string(to_string(kind)) + "_N" + std::to_string(k) + "_" + tag;
            if (opt.format == "csv") {
                run.write(base + ".csv", polygon_csv(poly));
            } else if (opt.format == "json") {
                run.write(base + ".json", polygon_json(poly));
            }
            layers.push_back({poly, "N=" + std::to_string(k)});
        }
        if (opt.format == "svg") {
            run.write("region_" + std::string(to_string(kind)) + "_" + tag + ".svg", polygon_svg(layers));
        }
    }
    run.finish();
    return kOk;
}

int cmd_compare(const Options& opt, std::ostream& out)
{
    Run run("compare", opt);
    run.input(opt.model);
    run.input(opt.modelB);
    const RegionKind kind = kind_or(opt, RegionKind::Reach);
    const std::vector<int> steps = parse_ints(opt.steps);
    if (steps.size() != 1 || steps[0] < 1) {
        throw Error(ErrorCode::BadRange, "compare takes a single step count >= 1");
    }
    run.parameter("steps", steps[0]);
    run.parameter("kind", std::string(to_string(kind)));
    const io::ModelFile a = io::load_model(opt.model);
    const io::ModelFile b = io::load_model(opt.modelB);
    const AbilityVerdict v = compare_ability(a.system, b.system, steps[0], kind);

    const std::string stronger = v.stronger == StrongerSystem::First ? a.system.name()
        : v.stronger == StrongerSystem::Second                      ? b.system.name()
                                                                    : "neither";
    out << "relation: " << to_string(v.relation) << " (stronger: " << stronger << ")"
        << (v.exact ? "" : " [sampled]") << "\n";
    auto row = [&](const std::string& label, double x, double y) {
        out << "  " << std::left << std::setw(20) << label << std::right << std::setw(14) << format4(x)
            << std::setw(14) << format4(y) << "\n";
    };
    out << "  " << std::left << std::setw(20) << "N = " + std::to_string(steps[0]) << std::right << std::setw(14)
        << a.system.name() << std::setw(14) << b.system.name() << "\n";
    row("volume", v.metricsFirst.volume, v.metricsSecond.volume);
    row("shape factor", v.metricsFirst.overallShapeFactor, v.metricsSecond.overallShapeFactor);
    for (const auto& [axes, f] : v.metricsFirst.planarShapeFactors) {
        row("planar factor " + std::to_string(axes.first + 1) + "," + std::to_string(axes.second + 1), f,
            v.metricsSecond.planarShapeFactors.at(axes));
    }
    for (Eigen::Index i = 0; i < v.metricsFirst.sideLengths.size(); ++i) {
        row("half side " + std::to_string(i + 1), v.metricsFirst.sideLengths[i], v.metricsSecond.sideLengths[i]);
    }
    row("rank", v.metricsFirst.rank, v.metricsSecond.rank);
    run.write("compare.json", io::comparison_json(a.system, b.system, kind, v));
    run.finish();
    return kOk;
}

int cmd_mintime(const Options& opt, std::ostream& out)
{
    Run run("mintime", opt);
    run.input(opt.model);
    const RegionKind kind = kind_or(opt, RegionKind::Recover);
    run.parameter("x0", opt.x0);
    run.parameter("kind", std::string(to_string(kind)));
    run.parameter("maxSteps", opt.maxSteps);
    const io::ModelFile model = io::load_model(opt.model);
    const Vector x0 = io::parse_vector(opt.x0);
    if (x0.size() != model.system.n()) {
        throw Error(ErrorCode::DimensionMismatch, "x0 has " + std::to_string(x0.size()) + " entries, the model has n = "
                                                      + std::to_string(model.system.n()));
    }
    try {
        const ControlSolution sol = min_time(model.system, x0, kind, opt.maxSteps);
        out << "N* = " << sol.minSteps << "\n";
        for (std::size_t k = 0; k < sol.inputs.size(); ++k) {
            out << "  u" << k << " = " << format_vector(sol.inputs[k]) << "\n";
        }
        out << "boundary status: " << to_string(sol.boundaryStatus) << " (margin " << format4(sol.margin) << ")\n";
        out << "strategy-space dimension at N = " << sol.horizon << ": " << sol.strategyDim << "\n";
        run.write("mintime.json", io::control_solution_json(model.system, sol));
        run.finish();
        return kOk;
    } catch (const NotReachableError& e) {
        out << "not reachable within " << e.horizon() << " steps\n";
        if (e.certificate()) {
            out << "certificate d = " << format_vector(*e.certificate()) << ", d'x0 - h(d) = " << format4(e.violation())
                << "\n";
        }
        run.write("mintime.json", io::not_reachable_json(model.system, x0, kind, e));
        run.finish();
        return kNotReachable;
    }
}

int cmd_verify(const Options& opt, std::ostream& out)
{
    Run run("verify", opt);
    run.parameter("seed", opt.seed);
    run.parameter("level", opt.level);
    const oracle::VerificationReport rep = oracle::run_verification(opt.seed, oracle::parse_level(opt.level), opt.fault);
    for (const oracle::CheckResult& c : rep.checks) {
        out << (c.passed ? "pass " : "FAIL ") << std::left << std::setw(14) << c.name << std::right << " cases "
            << std::setw(4) << c.cases << "  discrepancy " << format4(c.discrepancy);
        if (!c.detail.empty()) {
            out << "  " << c.detail;
        }
        out << "\n";
    }
    run.write("verify.json", io::verification_json(rep));
    run.finish();
    return rep.passed() ? kOk : kOracleDisagreement;
}

int exit_code_for(ErrorCode code)
{
    switch (code) {
    case ErrorCode::MissingTarget: return kMissingTarget;
    case ErrorCode::SingularA: return kSingular;
    case ErrorCode::UnstableGrowth: return kUnstable;
    case ErrorCode::NotReachable: return kNotReachable;
    case ErrorCode::SchemaViolation:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::NonFinite:
    case ErrorCode::NonPositiveBound:
    case ErrorCode::InvalidArgument:
    case ErrorCode::BadAxes:
    case ErrorCode::BadRange: return kUsage;
    default: return kFailure;
    }
}

void configure_logging()
{
    auto logger = spdlog::get("ctrlgauge");
    if (!logger) {
        logger = spdlog::stderr_color_mt("ctrlgauge");
    }
    spdlog::set_default_logger(logger);
    const char* env = std::getenv("CTRLGAUGE_LOG");
    spdlog::set_level(env ? spdlog::level::from_str(env) : spdlog::level::warn);
}

} // namespace

std::string format4(double value)
{
    if (value == 0.0) {
        return "0";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", value);
    return buf;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    configure_logging();
    Options opt;
    CLI::App app{"Controllability-region analysis for linear discrete-time systems", "ctrlgauge"};
    app.set_version_flag("--version", CTRLGAUGE_VERSION);
    app.require_subcommand(1);

    auto add_out = [&](CLI::App* sub) {
        sub->add_option("--out-dir", opt.outDir, "Directory for output files")->capture_default_str();
    };
    auto* normalize = app.add_subcommand("normalize", "Normalize a model by its rated or target bounds");
    normalize->add_option("--model", opt.model, "Model JSON file")->required();
    normalize->add_option("--mode", opt.mode, "rated or target")->capture_default_str();
    add_out(normalize);

    auto* region = app.add_subcommand("region", "Controllability region summary and projections");
    region->add_option("--model", opt.model, "Model JSON file")->required();
    region->add_option("--steps", opt.steps, "Step count N, or N1,N2 for nested overlays")->capture_default_str();
    region->add_option("--kind", opt.kind, "reach or recover (default reach)");
    region->add_option("--project", opt.project, "1-based axis pair i,j; repeatable");
    region->add_option("--format", opt.format, "json, csv or svg for projections")->capture_default_str();
    add_out(region);

    auto* compare = app.add_subcommand("compare", "Compare the control ability of two models");
    compare->add_option("--model", opt.model, "First model JSON file")->required();
    compare->add_option("--model-b", opt.modelB, "Second model JSON file")->required();
    compare->add_option("--steps", opt.steps, "Step count N")->capture_default_str();
    compare->add_option("--kind", opt.kind, "reach or recover (default reach)");
    add_out(compare);

    auto* mintime = app.add_subcommand("mintime", "Minimum-time steering of one state");
    mintime->add_option("--model", opt.model, "Model JSON file")->required();
    mintime->add_option("--x0", opt.x0, "Comma-separated state")->required()->allow_extra_args(false);
    mintime->add_option("--kind", opt.kind, "reach or recover (default recover)");
    mintime->add_option("--max-steps", opt.maxSteps, "Largest horizon to try")->capture_default_str();
    add_out(mintime);

    auto* verify = app.add_subcommand("verify", "Cross-check against the brute-force oracles");
    verify->add_option("--seed", opt.seed, "Random seed")->capture_default_str();
    verify->add_option("--level", opt.level, "quick or full")->capture_default_str();
    verify->add_option("--inject-fault", opt.fault)->group("");
    add_out(verify);

    std::vector<const char*> argv{"ctrlgauge"};
    for (const std::string& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kOk : kUsage;
    }

    try {
        if (normalize->parsed()) {
            return cmd_normalize(opt, out);
        }
        if (region->parsed()) {
            return cmd_region(opt, out);
        }
        if (compare->parsed()) {
            return cmd_compare(opt, out);
        }
        if (mintime->parsed()) {
            return cmd_mintime(opt, out);
        }
        return cmd_verify(opt, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        spdlog::debug("exit on {}", to_string(e.code()));
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kFailure;
    }
}

} // namespace ctrlgauge::cli
