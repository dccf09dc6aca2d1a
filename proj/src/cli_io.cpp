#include "dante/cli_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <future>
#include <iostream>
#include <memory>
#include <sstream>
#include <thread>
#include <variant>

#include "dante/closed_form.hpp"
#include "dante/errors.hpp"
#include "dante/flow.hpp"
#include "dante/geometry.hpp"
#include "dante/shape_space.hpp"

namespace dante::cli {

using json = nlohmann::ordered_json;

std::string format_number(double value) {
    if (!std::isfinite(value)) throw NonFiniteOutput("non-finite value in output");
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return {buf, res.ptr};
}

namespace {

json num(double value) {
    if (!std::isfinite(value)) throw NonFiniteOutput("non-finite value in output");
    return value;
}

using Cell = std::variant<double, long long, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

void write_csv(std::ostream& os, const Table& table) {
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        os << (i ? "," : "") << table.columns[i];
    }
    os << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << ',';
            std::visit(
                [&os](const auto& v) {
                    using T = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<T, double>) {
                        os << format_number(v);
                    } else {
                        os << v;
                    }
                },
                row[i]);
        }
        os << '\n';
    }
}

json table_json(const Table& table) {
    json rows = json::array();
    for (const auto& row : table.rows) {
        json r = json::array();
        for (const auto& cell : row) {
            std::visit(
                [&r](const auto& v) {
                    using T = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<T, double>) {
                        r.push_back(num(v));
                    } else {
                        r.push_back(v);
                    }
                },
                cell);
        }
        rows.push_back(std::move(r));
    }
    return {{"columns", table.columns}, {"rows", std::move(rows)}};
}

void write_json(std::ostream& os, const json& doc) { os << doc.dump(2) << '\n'; }

// Output routing for one run.
class Sinks {
public:
    Sinks(const RunConfig& config, std::ostream& out) : out_(out) {
        if (config.output_path) primary_file_ = open(*config.output_path);
        if (config.summary_path) summary_file_ = open(*config.summary_path);
    }

    std::ostream& primary() { return primary_file_ ? *primary_file_ : out_; }

    /// Null when the summary has nowhere to go.
    std::ostream* summary() {
        if (summary_file_) return summary_file_.get();
        if (primary_file_) return &out_;
        return nullptr;
    }

private:
    static std::unique_ptr<std::ofstream> open(const std::string& path) {
        auto f = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
        if (!*f) throw UsageError("cannot open output file: " + path);
        return f;
    }

    std::ostream& out_;
    std::unique_ptr<std::ofstream> primary_file_;
    std::unique_ptr<std::ofstream> summary_file_;
};

void emit_table(const RunConfig& config, std::ostream& out, const Table& table,
                const json& summary) {
    Sinks sinks(config, out);
    if (config.format.value_or(OutputFormat::Csv) == OutputFormat::Json) {
        json doc = table_json(table);
        doc["summary"] = summary;
        write_json(sinks.primary(), doc);
        if (config.summary_path) write_json(*sinks.summary(), summary);
        return;
    }
    write_csv(sinks.primary(), table);
    if (auto* s = sinks.summary()) write_json(*s, summary);
}

void emit_object(const RunConfig& config, std::ostream& out, const json& object) {
    Sinks sinks(config, out);
    if (config.format.value_or(OutputFormat::Json) == OutputFormat::Json) {
        write_json(sinks.primary(), object);
        return;
    }
    Table table;
    std::vector<Cell> row;
    for (const auto& [key, value] : object.items()) {
        if (value.is_array()) {
            for (std::size_t i = 0; i < value.size(); ++i) {
                table.columns.push_back(key + std::to_string(i + 1));
                row.emplace_back(value[i].get<long long>());
            }
        } else if (value.is_string()) {
            table.columns.push_back(key);
            row.emplace_back(value.get<std::string>());
        } else if (value.is_number_integer()) {
            table.columns.push_back(key);
            row.emplace_back(value.get<long long>());
        } else {
            table.columns.push_back(key);
            row.emplace_back(value.get<double>());
        }
    }
    table.rows.push_back(std::move(row));
    write_csv(sinks.primary(), table);
}

StretchFactors factors_of(const RunConfig& config) {
    if (!config.a || !config.b || !config.c) throw UsageError("--a, --b and --c are required");
    return {*config.a, *config.b, *config.c, config.r_squared};
}

FlowParams flow_params_of(const RunConfig& config) {
    FlowParams p;
    p.r_squared = config.r_squared;
    if (config.rel_tol) p.rel_tol = *config.rel_tol;
    if (config.abs_tol) p.abs_tol = *config.abs_tol;
    if (config.collapse_eps) p.collapse_eps = *config.collapse_eps;
    return p;
}

long long sign_value(Sign s) { return static_cast<long long>(s); }

void run_curvature(const RunConfig& config, std::ostream& out) {
    const auto f = factors_of(config);
    const auto k = curvature_summary(f);
    const auto conn = connection_coefficients(f);
    json obj = json::object();
    obj["a"] = num(f.a());
    obj["b"] = num(f.b());
    obj["c"] = num(f.c());
    obj["r_squared"] = num(f.r_squared());
    obj["kappa1"] = num(k.kappa1);
    obj["kappa2"] = num(k.kappa2);
    obj["kappa3"] = num(k.kappa3);
    obj["ricci11"] = num(k.ricci11);
    obj["ricci22"] = num(k.ricci22);
    obj["ricci33"] = num(k.ricci33);
    obj["scalar"] = num(k.scalar);
    obj["connection1"] = num(conn[0]);
    obj["connection2"] = num(conn[1]);
    obj["connection3"] = num(conn[2]);
    emit_object(config, out, obj);
}

void run_classify(const RunConfig& config, std::ostream& out) {
    const auto f = factors_of(config);
    const auto cls = classify(f, config.eq_tol.value_or(kDefaultEqTol));
    const auto p = to_xy(f.sorted());
    const auto rt = to_rho_tau(p);
    json obj = json::object();
    obj["shape"] = to_string(cls.shape);
    obj["curvature_signs"] = {sign_value(cls.curvature_signs[0]),
                              sign_value(cls.curvature_signs[1]),
                              sign_value(cls.curvature_signs[2])};
    obj["ricci_signs"] = {sign_value(cls.ricci_signs[0]), sign_value(cls.ricci_signs[1]),
                          sign_value(cls.ricci_signs[2])};
    obj["scalar_sign"] = sign_value(cls.scalar_sign);
    obj["x"] = num(p.x);
    obj["y"] = num(p.y);
    obj["rho"] = num(rt.rho);
    obj["tau"] = num(rt.tau);
    emit_object(config, out, obj);
}

StretchFactors simulate_start(const RunConfig& config) {
    if (config.a || config.b || config.c) {
        if (config.x || config.y) throw UsageError("give either --a/--b/--c or --x/--y");
        const auto f = factors_of(config);
        return StretchFactors::ordered(f.a(), f.b(), f.c(), f.r_squared());
    }
    if (config.x && config.y) return from_xy({*config.x, *config.y}, 1.0, config.r_squared);
    throw UsageError("simulate needs --a/--b/--c or --x/--y");
}

void run_simulate(const RunConfig& config, std::ostream& out) {
    const auto f = simulate_start(config);
    auto p = flow_params_of(config);
    p.grid_points = config.grid.value_or(kDefaultTimeGrid);
    const auto m0 = metric_coeffs(f);
    const auto traj = integrate(m0, p);

    Table table{{"t", "u", "v", "w", "a", "b", "c", "x", "y", "kappa1", "kappa2", "kappa3",
                 "ricci11", "ricci22", "ricci33", "scalar"},
                {}};
    table.rows.reserve(traj.samples.size());
    for (const auto& s : traj.samples) {
        const auto g = stretch_from_metric(s.m, p.r_squared);
        const auto xy = to_xy(s.m);
        const auto k = curvature_summary(g);
        table.rows.push_back({s.t, s.m.u(), s.m.v(), s.m.w(), g.a(), g.b(), g.c(), xy.x, xy.y,
                              k.kappa1, k.kappa2, k.kappa3, k.ricci11, k.ricci22, k.ricci33,
                              k.scalar});
    }

    json summary = json::object();
    summary["a"] = num(f.a());
    summary["b"] = num(f.b());
    summary["c"] = num(f.c());
    summary["r_squared"] = num(p.r_squared);
    summary["u0"] = num(m0.u());
    summary["v0"] = num(m0.v());
    summary["w0"] = num(m0.w());
    summary["collapse_time"] = traj.collapse_time ? num(*traj.collapse_time) : json(nullptr);
    summary["terminated"] = to_string(traj.terminated);
    summary["samples"] = traj.samples.size();
    emit_table(config, out, table, summary);
}

std::size_t parameter_grid(const RunConfig& config) {
    const auto n = config.grid.value_or(kDefaultTimeGrid);
    if (n < 2) throw UsageError("--grid must be at least 2");
    return n;
}

void run_snake(const RunConfig& config, std::ostream& out) {
    if (!config.W || !config.alpha) throw UsageError("snake needs --W and --alpha");
    const SnakeSolution s(*config.W, *config.alpha, config.r_squared);
    const auto n = parameter_grid(config);

    Table table{{"lambda", "t", "w", "v"}, {}};
    for (std::size_t k = 0; k < n; ++k) {
        const double lambda = 1.0 - static_cast<double>(k) / static_cast<double>(n);
        const auto prof = snake_profile(s, lambda);
        table.rows.push_back({lambda, snake_time_of_lambda(s, lambda), prof.w, prof.v});
    }

    json summary = json::object();
    summary["W"] = num(s.W());
    summary["alpha"] = num(s.alpha());
    summary["V"] = num(s.V());
    summary["r_squared"] = num(s.r_squared());
    summary["collapse_time"] = num(s.collapse_time());
    if (config.check) {
        const auto traj = integrate(s.initial_metric(), flow_params_of(config));
        double max_dev = 0.0;
        for (const auto& sample : traj.samples) {
            const double lambda = std::clamp(sample.m.w() / s.W(), 0.0, 1.0);
            max_dev = std::max(max_dev, std::abs(snake_time_of_lambda(s, lambda) - sample.t));
        }
        summary["numeric_collapse_time"] =
            traj.collapse_time ? num(*traj.collapse_time) : json(nullptr);
        summary["collapse_time_deviation"] =
            traj.collapse_time ? num(std::abs(*traj.collapse_time - s.collapse_time()))
                               : json(nullptr);
        summary["max_time_deviation"] = num(max_dev);
    }
    emit_table(config, out, table, summary);
}

void run_turtle(const RunConfig& config, std::ostream& out) {
    if (!config.U || !config.beta) throw UsageError("turtle needs --U and --beta");
    const TurtleSolution s(*config.U, *config.beta, config.r_squared);
    const auto n = parameter_grid(config);

    Table table{{"mu", "t", "u", "v"}, {}};
    for (std::size_t k = 0; k < n; ++k) {
        const double mu = 1.0 - static_cast<double>(k) / static_cast<double>(n);
        const auto prof = turtle_profile(s, mu);
        table.rows.push_back({mu, turtle_time_of_mu(s, mu), prof.u, prof.v});
    }

    json summary = json::object();
    summary["U"] = num(s.U());
    summary["beta"] = num(s.beta());
    summary["V"] = num(s.V());
    summary["r_squared"] = num(s.r_squared());
    summary["collapse_time"] = num(s.collapse_time());
    if (config.check) {
        const auto traj = integrate(s.initial_metric(), flow_params_of(config));
        double max_dev = 0.0;
        for (const auto& sample : traj.samples) {
            const double mu = std::clamp(sample.m.u() / s.U(), 0.0, 1.0);
            max_dev = std::max(max_dev, std::abs(turtle_time_of_mu(s, mu) - sample.t));
        }
        summary["numeric_collapse_time"] =
            traj.collapse_time ? num(*traj.collapse_time) : json(nullptr);
        summary["collapse_time_deviation"] =
            traj.collapse_time ? num(std::abs(*traj.collapse_time - s.collapse_time()))
                               : json(nullptr);
        summary["max_time_deviation"] = num(max_dev);
    }
    emit_table(config, out, table, summary);
}

std::vector<ShapePoint> read_starts(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open starts file: " + path);
    std::vector<ShapePoint> starts;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto comma = line.find(',');
        double x = 0.0;
        double y = 0.0;
        const char* begin = line.data() + first;
        const char* end = line.data() + line.size();
        auto rx = std::from_chars(begin, end, x);
        if (rx.ec != std::errc{}) {
            if (starts.empty() && line_no == 1) continue;  // header
            throw UsageError("bad start on line " + std::to_string(line_no));
        }
        if (comma == std::string::npos) {
            throw UsageError("bad start on line " + std::to_string(line_no));
        }
        const char* ybegin = line.data() + comma + 1;
        while (ybegin < end && (*ybegin == ' ' || *ybegin == '\t')) ++ybegin;
        if (std::from_chars(ybegin, end, y).ec != std::errc{}) {
            throw UsageError("bad start on line " + std::to_string(line_no));
        }
        starts.push_back({x, y});
    }
    if (starts.empty()) throw UsageError("starts file has no points: " + path);
    return starts;
}

std::vector<ShapePoint> lattice_starts(std::size_t n) {
    if (n < 1) throw UsageError("--grid must be at least 1");
    std::vector<ShapePoint> starts;
    const auto d = static_cast<double>(n + 1);
    for (std::size_t i = 1; i <= n; ++i) {
        const double x = 2.0 * static_cast<double>(i) / d;
        for (std::size_t j = 1; j <= n; ++j) {
            starts.push_back({x, std::min(x, 2.0 - x) * static_cast<double>(j) / d});
        }
    }
    return starts;
}

void run_flowlines(const RunConfig& config, std::ostream& out) {
    const auto starts = config.starts_path
                            ? read_starts(*config.starts_path)
                            : lattice_starts(config.grid.value_or(kDefaultStartLattice));
    const auto p = flow_params_of(config);
    TraceOptions opts;
    opts.backward = config.backward;

    // Trace concurrently; collect in start order.
    const std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
    std::vector<FlowLine> lines(starts.size());
    for (std::size_t base = 0; base < starts.size(); base += workers) {
        std::vector<std::future<FlowLine>> batch;
        for (std::size_t i = base; i < std::min(starts.size(), base + workers); ++i) {
            batch.push_back(std::async(std::launch::async, [&, i] {
                return trace_flowline(starts[i], config.lift_scale, p, opts);
            }));
        }
        for (std::size_t k = 0; k < batch.size(); ++k) lines[base + k] = batch[k].get();
    }

    Table table{{"line_id", "x", "y", "t"}, {}};
    json summary_lines = json::array();
    for (std::size_t id = 0; id < lines.size(); ++id) {
        const auto& line = lines[id];
        for (std::size_t k = 0; k < line.points.size(); ++k) {
            table.rows.push_back({static_cast<long long>(id), line.points[k].x,
                                  line.points[k].y, line.times[k]});
        }
        const auto& end = line.points.back();
        json entry = json::object();
        entry["line_id"] = id;
        entry["start_x"] = num(starts[id].x);
        entry["start_y"] = num(starts[id].y);
        entry["apex_x"] = num(line.apex.x);
        entry["apex_y"] = num(line.apex.y);
        entry["apex_radius"] = num(std::hypot(line.apex.x, line.apex.y));
        entry["apex_bracketed"] = line.apex_bracketed;
        entry["end_x"] = num(end.x);
        entry["end_y"] = num(end.y);
        entry["points"] = line.points.size();
        summary_lines.push_back(std::move(entry));
    }
    emit_table(config, out, table, json{{"lines", std::move(summary_lines)}});
}

void run_regions(const RunConfig& config, std::ostream& out) {
    const auto boundaries = region_boundaries(config.resolution);
    Table table{{"boundary", "x", "y"}, {}};
    json summary = json::object();
    for (const auto& b : boundaries) {
        for (const auto& pt : b.points) table.rows.push_back({b.label, pt.x, pt.y});
        const auto& foot = b.points.front();
        summary[b.label] = {{"foot_x", num(foot.x)}, {"foot_y", num(foot.y)},
                            {"points", b.points.size()}};
    }
    emit_table(config, out, table, summary);
}

double parse_env_r2(const char* text) {
    double value = 0.0;
    const char* end = text + std::char_traits<char>::length(text);
    const auto res = std::from_chars(text, end, value);
    if (res.ec != std::errc{} || res.ptr != end || !std::isfinite(value) || value <= 0.0) {
        throw UsageError(std::string("DANTE_FLOW_R2 must be a positive number, got '") + text +
                         "'");
    }
    return value;
}

void write_error(std::ostream& err, const char* kind, const std::string& message) {
    err << json{{"error", kind}, {"message", message}}.dump() << '\n';
}

}  // namespace

std::optional<RunConfig> parse_command_line(const std::vector<std::string>& args,
                                            std::ostream& out, const EnvLookup& env) {
    RunConfig config;
    std::optional<double> r2;
    std::string format;
    std::optional<std::size_t> resolution;

    CLI::App app{"Ricci flow on homogeneously deformed 3-spheres", "dante_flow"};
    app.require_subcommand(1);

    auto common = [&](CLI::App* sub) {
        sub->add_option("--r2", r2, "Squared radius R^2 of the base sphere (default 4)");
        sub->add_option("--format", format, "Output format")
            ->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--output", config.output_path, "Primary artifact file");
        sub->add_option("--summary", config.summary_path, "Summary JSON file");
    };
    auto abc = [&](CLI::App* sub) {
        sub->add_option("--a", config.a, "Stretch factor a");
        sub->add_option("--b", config.b, "Stretch factor b");
        sub->add_option("--c", config.c, "Stretch factor c");
    };
    auto tolerances = [&](CLI::App* sub) {
        sub->add_option("--rel-tol", config.rel_tol, "Integrator relative tolerance");
        sub->add_option("--abs-tol", config.abs_tol, "Integrator absolute tolerance");
        sub->add_option("--collapse-eps", config.collapse_eps, "Collapse threshold on min(u,v,w)");
    };

    auto* curvature = app.add_subcommand("curvature", "Curvatures of a deformed sphere");
    abc(curvature);
    common(curvature);

    auto* classify_cmd = app.add_subcommand("classify", "Shape kind and curvature signs");
    abc(classify_cmd);
    classify_cmd->add_option("--eq-tol", config.eq_tol, "Relative equality tolerance");
    common(classify_cmd);

    auto* simulate = app.add_subcommand("simulate", "Integrate the flow to collapse");
    abc(simulate);
    simulate->add_option("--x", config.x, "Shape coordinate x (lifted with c = 1)");
    simulate->add_option("--y", config.y, "Shape coordinate y");
    simulate->add_option("--grid", config.grid, "Uniform time samples (default 200)");
    tolerances(simulate);
    common(simulate);

    auto* snake = app.add_subcommand("snake", "Closed-form snake (a = b) solution");
    snake->add_option("--W", config.W, "Initial w")->required();
    snake->add_option("--alpha", config.alpha, "Non-sphericity, alpha^2 = W/V - 1")->required();
    snake->add_option("--grid", config.grid, "Samples of lambda (default 200)");
    snake->add_flag("--check", config.check, "Also integrate numerically and compare");
    tolerances(snake);
    common(snake);

    auto* turtle = app.add_subcommand("turtle", "Closed-form turtle (b = c) solution");
    turtle->add_option("--U", config.U, "Initial u")->required();
    turtle->add_option("--beta", config.beta, "Non-sphericity, beta^2 = 1 - U/V")->required();
    turtle->add_option("--grid", config.grid, "Samples of mu (default 200)");
    turtle->add_flag("--check", config.check, "Also integrate numerically and compare");
    tolerances(turtle);
    common(turtle);

    auto* flowlines = app.add_subcommand("flowlines", "Trace flow lines in the shape triangle");
    auto* starts_opt =
        flowlines->add_option("--starts", config.starts_path, "CSV file of x,y starts");
    flowlines->add_option("--grid", config.grid, "N for an N x N lattice of starts (default 5)")
        ->excludes(starts_opt);
    flowlines->add_option("--c0", config.lift_scale, "Lift scale c for the starts");
    flowlines->add_flag("--backward", config.backward, "Also trace backward in time");
    tolerances(flowlines);
    common(flowlines);

    auto* regions = app.add_subcommand("regions", "CE, CF and CD boundary loci");
    regions->add_option("--resolution", resolution, "Vertical segments per boundary (>= 16)");
    common(regions);

    std::vector<const char*> argv{"dante_flow"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return std::nullopt;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return std::nullopt;
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    if (curvature->parsed()) config.command = Command::Curvature;
    if (classify_cmd->parsed()) config.command = Command::Classify;
    if (simulate->parsed()) config.command = Command::Simulate;
    if (snake->parsed()) config.command = Command::Snake;
    if (turtle->parsed()) config.command = Command::Turtle;
    if (flowlines->parsed()) config.command = Command::Flowlines;
    if (regions->parsed()) config.command = Command::Regions;

    if (r2) {
        config.r_squared = *r2;
    } else if (const char* text = env ? env("DANTE_FLOW_R2") : nullptr) {
        config.r_squared = parse_env_r2(text);
    }
    if (format == "csv") config.format = OutputFormat::Csv;
    if (format == "json") config.format = OutputFormat::Json;
    if (resolution) config.resolution = *resolution;

    switch (config.command) {
        case Command::Curvature:
        case Command::Classify:
            if (!config.a || !config.b || !config.c) {
                throw UsageError("--a, --b and --c are required");
            }
            break;
        case Command::Simulate: {
            const bool has_abc = config.a && config.b && config.c;
            const bool has_xy = config.x && config.y;
            const bool any_abc = config.a || config.b || config.c;
            const bool any_xy = config.x || config.y;
            if (!((has_abc && !any_xy) || (has_xy && !any_abc))) {
                throw UsageError("simulate needs exactly one of --a/--b/--c or --x/--y");
            }
            break;
        }
        default: break;
    }
    return config;
}

void run(const RunConfig& config, std::ostream& out) {
    switch (config.command) {
        case Command::Curvature: return run_curvature(config, out);
        case Command::Classify: return run_classify(config, out);
        case Command::Simulate: return run_simulate(config, out);
        case Command::Snake: return run_snake(config, out);
        case Command::Turtle: return run_turtle(config, out);
        case Command::Flowlines: return run_flowlines(config, out);
        case Command::Regions: return run_regions(config, out);
    }
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
               const EnvLookup& env) {
    try {
        const auto config = parse_command_line(args, out, env);
        if (!config) return kExitOk;
        run(*config, out);
        return kExitOk;
    } catch (const UsageError& e) {
        write_error(err, "usage_error", e.what());
        return kExitUsage;
    } catch (const DomainError& e) {
        write_error(err, "domain_error", e.what());
        return kExitDomain;
    } catch (const IntegrationError& e) {
        write_error(err, "integration_failure", e.what());
        return kExitIntegration;
    } catch (const NonFiniteOutput& e) {
        write_error(err, "integration_failure", e.what());
        return kExitIntegration;
    }
}

}  // namespace dante::cli
