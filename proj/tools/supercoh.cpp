// supercoh: cohomology of Lie superalgebras of generating functions.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <supercoh/supercoh.hpp>

using namespace supercoh;

namespace {

enum ExitCode : int {
    exit_ok = 0,
    exit_generic = 1,
    exit_parse = 2,
    exit_resource_cap = 3,
    exit_consistency = 4,
    exit_deserialization = 5,
    exit_spec_mismatch = 6,
    exit_io = 7,
};

constexpr const char* cache_env = "SUPERCOH_CACHE_DIR";

struct Range {
    int lo = 0;
    int hi = 0;
};

Range parse_range(const std::string& text, const char* what)
{
    static const std::regex pattern(R"(^\s*(-?\d+)\s*(?:\.\.\s*(-?\d+)\s*)?$)");
    std::smatch m;
    if (!std::regex_match(text, m, pattern)) {
        throw ParseError(std::string("bad ") + what + " range '" + text + "' (expected a..b)");
    }
    Range r;
    r.lo = std::stoi(m[1].str());
    r.hi = m[2].matched ? std::stoi(m[2].str()) : r.lo;
    if (r.lo > r.hi) {
        throw ParseError(std::string("empty ") + what + " range '" + text + "'");
    }
    return r;
}

struct RunConfig {
    std::string algebra;
    std::string module = "trivial";
    std::string degrees = "0..4";
    std::string grades = "0..0";
    std::string format = "text";
    std::string out;
    std::string cache_dir;
    bool no_cache = false;
    unsigned jobs = 1;
    std::size_t max_cell = default_max_cell;
    std::string dump_dir;
};

void write_output(const RunConfig& cfg, const std::string& text)
{
    if (cfg.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(cfg.out);
    if (!out || !(out << text)) {
        throw IoError("cannot write " + cfg.out);
    }
}

std::unique_ptr<DiskCache> open_cache(const RunConfig& cfg)
{
    if (cfg.no_cache) {
        return nullptr;
    }
    std::string dir = cfg.cache_dir;
    if (dir.empty()) {
        if (const char* env = std::getenv(cache_env)) {
            dir = env;
        }
    }
    if (dir.empty()) {
        return nullptr;
    }
    try {
        return std::make_unique<DiskCache>(dir);
    } catch (const std::filesystem::filesystem_error& e) {
        throw IoError(std::string("cannot open cache directory: ") + e.what());
    }
}

Algebra algebra_for(const AlgebraSpec& spec, int degree, int grade)
{
    return spec.finite_dimensional() ? Algebra::whole(spec) : Algebra::for_cells(spec, degree + 1, grade);
}

nlohmann::json read_json(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot read " + path);
    }
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded()) {
        throw DeserializationError(path + " is not valid JSON");
    }
    return j;
}

AlgebraSpec spec_of_files(const std::vector<nlohmann::json>& docs, const std::string& requested)
{
    std::optional<AlgebraSpec> spec;
    if (!requested.empty()) {
        spec = parse_algebra_spec(requested);
    }
    for (const auto& d : docs) {
        if (!d.is_object() || !d.contains("algebra") || !d["algebra"].is_string()) {
            throw DeserializationError("cochain record has no algebra field");
        }
        const AlgebraSpec s = parse_algebra_spec(d["algebra"].get<std::string>());
        if (spec && !(s == *spec)) {
            throw SpecMismatchError("cochain over " + to_string(s) + " where " + to_string(*spec) + " was expected");
        }
        spec = s;
    }
    return *spec;
}

int cmd_table(const RunConfig& cfg)
{
    const AlgebraSpec spec = parse_algebra_spec(cfg.algebra);
    const Module module = parse_module(cfg.module);
    const Range k = parse_range(cfg.degrees, "degree");
    const Range g = parse_range(cfg.grades, "grade");
    if (k.lo < 0) {
        throw ParseError("degrees must be non-negative");
    }
    auto cache = open_cache(cfg);
    TableOptions options;
    options.jobs = cfg.jobs;
    options.max_cell = cfg.max_cell;
    options.cache = cache.get();
    if (!cfg.dump_dir.empty()) {
        options.dump_dir = cfg.dump_dir;
    }
    const CohomologyReport report = compute_table(spec, module, k.lo, k.hi, g.lo, g.hi, options);
    if (cfg.format == "json") {
        write_output(cfg, report_to_json(report).dump(2) + "\n");
    } else {
        std::string text = render_table(report);
        for (const auto& c : report.cells) {
            if (c.capped) {
                text += "capped (" + std::to_string(c.degree) + ", " + std::to_string(c.grade) + "): " + c.message + "\n";
            }
        }
        write_output(cfg, text);
    }
    if (report.any_capped()) {
        std::cerr << "error[resource-cap]: some cells exceeded --max-cell " << cfg.max_cell
                  << "; narrow the degree/grade range or raise the cap\n";
        return exit_resource_cap;
    }
    return exit_ok;
}

int cmd_cocycles(const RunConfig& cfg, int degree, int grade, const std::string& save_dir)
{
    const AlgebraSpec spec = parse_algebra_spec(cfg.algebra);
    const Module module = parse_module(cfg.module);
    if (degree < 0) {
        throw ParseError("degree must be non-negative");
    }
    const Algebra alg = algebra_for(spec, degree, grade);
    CellOptions options;
    options.max_cell = cfg.max_cell;
    if (!cfg.dump_dir.empty()) {
        options.dump_dir = cfg.dump_dir;
    }
    const CellRecord rec = compute_cell(alg, module, degree, grade, options);
    for (const auto& c : rec.representatives) {
        if (!verify_cocycle(alg, c, cfg.max_cell)) {
            throw ConsistencyError("representative failed the cocycle check");
        }
    }
    if (!save_dir.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(save_dir, ec);
        for (std::size_t i = 0; i < rec.representatives.size(); ++i) {
            const auto path = std::filesystem::path(save_dir) / ("cocycle_k" + std::to_string(degree) + "_g" +
                                                                 std::to_string(grade) + "_" + std::to_string(i) + ".json");
            std::ofstream out(path);
            if (!out || !(out << cochain_to_json(alg, rec.representatives[i]).dump(2) << "\n")) {
                throw IoError("cannot write " + path.string());
            }
        }
    }
    if (cfg.format == "json") {
        write_output(cfg, cell_to_json(alg, rec).dump(2) + "\n");
        return exit_ok;
    }
    std::ostringstream text;
    text << "H^" << degree << "_" << grade << "(" << to_string(spec) << "), " << to_string(module)
         << ": dim C = " << rec.dim_C << ", rank Z = " << rec.rank_Z << ", rank b = " << rec.rank_b
         << ", dim H = " << rec.dim_H << "\n";
    if (rec.representatives.empty()) {
        text << "0\n";
    }
    for (std::size_t i = 0; i < rec.representatives.size(); ++i) {
        text << "[" << i << "] " << cochain_pretty(alg, rec.representatives[i]) << "\n";
    }
    write_output(cfg, text.str());
    return exit_ok;
}

int cmd_cup(const RunConfig& cfg, const std::string& file1, const std::string& file2)
{
    const std::vector<nlohmann::json> docs{read_json(file1), read_json(file2)};
    const AlgebraSpec spec = spec_of_files(docs, cfg.algebra);
    const int degree = docs[0].value("degree", 0) + docs[1].value("degree", 0);
    const int grade = docs[0].value("weight", 0) + docs[1].value("weight", 0);
    const Algebra alg = algebra_for(spec, degree, std::max({grade, docs[0].value("weight", 0), docs[1].value("weight", 0)}));
    const Cochain c1 = cochain_from_json(alg, docs[0]);
    const Cochain c2 = cochain_from_json(alg, docs[1]);
    const Cochain product = cup_product(alg, c1, c2);
    const bool cocycle = verify_cocycle(alg, product, cfg.max_cell);
    const bool coboundary = cocycle && is_coboundary(alg, product, cfg.max_cell).has_value();
    if (cfg.format == "json") {
        nlohmann::json j{{"product", cochain_to_json(alg, product)}, {"cocycle", cocycle}, {"coboundary", coboundary}};
        write_output(cfg, j.dump(2) + "\n");
    } else {
        if (!cfg.out.empty()) {
            write_output(cfg, cochain_to_json(alg, product).dump(2) + "\n");
        } else {
            std::cout << cochain_pretty(alg, product) << "\n";
        }
        std::cout << "cocycle: " << (cocycle ? "yes" : "no") << "\n";
        std::cout << "coboundary: " << (coboundary ? "yes" : "no") << "\n";
    }
    return exit_ok;
}

int cmd_compare(const RunConfig& cfg, const std::string& file1, const std::string& file2)
{
    const std::vector<nlohmann::json> docs{read_json(file1), read_json(file2)};
    const AlgebraSpec spec = spec_of_files(docs, cfg.algebra);
    const Algebra alg = algebra_for(spec, docs[0].value("degree", 0), docs[0].value("weight", 0));
    const Cochain c1 = cochain_from_json(alg, docs[0]);
    const Cochain c2 = cochain_from_json(alg, docs[1]);
    const ClassComparison cmp = equal_mod_coboundaries(alg, c1, c2, cfg.max_cell);
    if (cfg.format == "json") {
        nlohmann::json j{{"equal", cmp.equal},
                         {"first_is_coboundary", cmp.first_is_coboundary},
                         {"second_is_coboundary", cmp.second_is_coboundary}};
        if (cmp.lambda) {
            j["lambda"] = to_string(*cmp.lambda);
        }
        write_output(cfg, j.dump(2) + "\n");
        return exit_ok;
    }
    std::ostringstream text;
    text << "equal: " << (cmp.equal ? "yes" : "no");
    if (cmp.lambda) {
        text << ", lambda = " << to_string(*cmp.lambda);
    }
    text << "\n";
    if (cmp.first_is_coboundary) {
        text << "first is a coboundary\n";
    }
    if (cmp.second_is_coboundary) {
        text << "second is a coboundary\n";
    }
    write_output(cfg, text.str());
    return exit_ok;
}

int cmd_check(const RunConfig& cfg, const std::vector<std::string>& suites)
{
    bool all = true;
    std::ostringstream text;
    const auto results = standard_checks(suites, [&](const CheckResult& r) {
        std::cerr << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << r.checked << ")\n";
    }, cfg.max_cell);
    nlohmann::json j = nlohmann::json::array();
    for (const auto& r : results) {
        all = all && r.passed;
        text << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << r.checked << " checked)";
        if (!r.passed) {
            text << ": " << r.detail;
        }
        text << "\n";
        j.push_back({{"name", r.name}, {"passed", r.passed}, {"checked", r.checked}, {"detail", r.detail}});
    }
    write_output(cfg, cfg.format == "json" ? j.dump(2) + "\n" : text.str());
    return all ? exit_ok : exit_consistency;
}

int fail(int code, const char* kind, const std::string& message)
{
    std::string line = message;
    for (auto& ch : line) {
        if (ch == '\n') {
            ch = ' ';
        }
    }
    std::cerr << "error[" << kind << "]: " << line << "\n";
    return code;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Cohomology of Lie superalgebras of generating functions"};
    app.set_version_flag("--version", std::string(tool_version));
    app.require_subcommand(1);

    RunConfig cfg;
    auto add_common = [&](CLI::App* sub, bool needs_algebra) {
        auto* opt = sub->add_option("--algebra", cfg.algebra, "algebra spec, e.g. \"SH(0|4)\"");
        if (needs_algebra) {
            opt->required();
        }
        sub->add_option("--module", cfg.module, "coefficients")->check(CLI::IsMember({"trivial", "adjoint"}));
        sub->add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"text", "json"}));
        sub->add_option("--out", cfg.out, "write output to this file");
        sub->add_option("--max-cell", cfg.max_cell, "largest cochain basis per cell")->check(CLI::PositiveNumber);
    };

    auto* table = app.add_subcommand("table", "dimensions (and representatives) over a degree x grade grid");
    add_common(table, true);
    table->add_option("--degrees", cfg.degrees, "degree range a..b");
    table->add_option("--grades", cfg.grades, "grade range a..b");
    table->add_option("--cache-dir", cfg.cache_dir, std::string("cell cache directory (default $") + cache_env + ")");
    table->add_flag("--no-cache", cfg.no_cache, "ignore the cache");
    table->add_option("--jobs", cfg.jobs, "worker threads")->check(CLI::PositiveNumber);
    table->add_option("--dump-matrices", cfg.dump_dir, "write every differential matrix to this directory");

    int degree = 0;
    int grade = 0;
    std::string save_dir;
    auto* cocycles = app.add_subcommand("cocycles", "representative cocycles of one cell");
    add_common(cocycles, true);
    cocycles->add_option("--degree", degree, "cochain degree")->required();
    cocycles->add_option("--grade", grade, "grade")->required();
    cocycles->add_option("--save", save_dir, "write each representative as JSON into this directory");
    cocycles->add_option("--dump-matrices", cfg.dump_dir, "write the cell's differential matrices here");

    std::string file1;
    std::string file2;
    auto* cup = app.add_subcommand("cup", "cup product of two serialized cochains");
    add_common(cup, false);
    cup->add_option("first", file1, "cochain JSON")->required();
    cup->add_option("second", file2, "cochain JSON")->required();

    auto* compare = app.add_subcommand("compare", "compare two cocycles modulo coboundaries");
    add_common(compare, false);
    compare->add_option("first", file1, "cochain JSON")->required();
    compare->add_option("second", file2, "cochain JSON")->required();

    std::vector<std::string> suites;
    auto* check = app.add_subcommand("check", "run the invariant suites");
    check->add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"text", "json"}));
    check->add_option("--out", cfg.out, "write output to this file");
    check->add_option("--max-cell", cfg.max_cell, "largest cochain basis per cell")->check(CLI::PositiveNumber);
    check->add_option("--suite", suites, "jacobi, d2, euler, leibniz, dims, vanishing (default: all)")
        ->check(CLI::IsMember({"jacobi", "d2", "euler", "leibniz", "dims", "vanishing"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail(exit_parse, "parse", e.what());
    }

    try {
        if (*table) {
            return cmd_table(cfg);
        }
        if (*cocycles) {
            return cmd_cocycles(cfg, degree, grade, save_dir);
        }
        if (*cup) {
            return cmd_cup(cfg, file1, file2);
        }
        if (*compare) {
            return cmd_compare(cfg, file1, file2);
        }
        if (*check) {
            return cmd_check(cfg, suites);
        }
    } catch (const ParseError& e) {
        return fail(exit_parse, "parse", e.what());
    } catch (const ResourceCapError& e) {
        return fail(exit_resource_cap, "resource-cap", e.what());
    } catch (const ConsistencyError& e) {
        return fail(exit_consistency, "consistency", e.what());
    } catch (const DeserializationError& e) {
        return fail(exit_deserialization, "deserialization", e.what());
    } catch (const SpecMismatchError& e) {
        return fail(exit_spec_mismatch, "spec-mismatch", e.what());
    } catch (const IoError& e) {
        return fail(exit_io, "io", e.what());
    } catch (const std::filesystem::filesystem_error& e) {
        return fail(exit_io, "io", e.what());
    } catch (const std::exception& e) {
        return fail(exit_generic, "error", e.what());
    }
    return exit_generic;
}
