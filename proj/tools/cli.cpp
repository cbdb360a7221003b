#include "cli.hpp"

#include "satfarey/distribution.hpp"
#include "satfarey/format.hpp"
#include "satfarey/gap_geometry.hpp"
#include "satfarey/saturated_set.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace satfarey::cli {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Config {
    std::string command;
    Int q = 0;
    Int from = 0;
    Int to = 0;
    Int q_max = 300;
    Int oracle_max = 300;
    Int q1 = 0;
    Int q2 = 0;
    std::string method = "filter";
    std::vector<double> betas{0.25, 0.5, 0.75, 1.0};
    std::vector<std::string> boxes;
    std::string boxes_file;
    std::string out_path;
    double tol = 1e-8;
    unsigned threads = 0;
    bool list = false;
};

unsigned resolve_threads(unsigned flag)
{
    if (flag > 0)
        return flag;
    if (const char* env = std::getenv("SATFAREY_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0 && v <= 1024)
            return static_cast<unsigned>(v);
        throw UsageError("SATFAREY_THREADS must be a positive integer");
    }
    return 1;
}

void emit(const Config& cfg, const std::string& text, std::ostream& out)
{
    if (cfg.out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(cfg.out_path, std::ios::binary | std::ios::trunc);
    if (!f)
        throw UsageError("cannot write to " + cfg.out_path);
    f << text;
    if (!f.flush())
        throw UsageError("cannot write to " + cfg.out_path);
}

SaturatedLevel build_level(const Config& cfg, Int Q)
{
    if (cfg.method == "incremental")
        return build_incremental(Q);
    return build_filter(Q, resolve_threads(cfg.threads));
}

std::vector<BoxRegion> default_density_boxes()
{
    std::vector<BoxRegion> out;
    for (const char* s : {"0.6,0.7,0.45,0.55", "0.75,0.85,0.7,0.75", "0.2,0.3,0.4,0.6", "0.1,0.2,0.5,0.7",
                          "0.3,0.4,0.45,0.55", "0.35,0.45,0.1,0.2", "0.5,0.6,0.2,0.3", "0.3,0.4,0.25,0.3"})
        out.push_back(BoxRegion::parse(s));
    return out;
}

std::vector<BoxRegion> default_farey_boxes()
{
    std::vector<BoxRegion> out;
    for (const char* s : {"0.6,0.8,0.5,0.7", "0.3,0.5,0.7,0.9", "0.8,1,0.2,0.4", "0.5,0.7,0.8,1"})
        out.push_back(BoxRegion::parse(s));
    return out;
}

std::vector<BoxRegion> collect_boxes(const Config& cfg, std::vector<BoxRegion> (*fallback)())
{
    std::vector<BoxRegion> out;
    if (!cfg.boxes_file.empty()) {
        std::ifstream f(cfg.boxes_file);
        if (!f)
            throw UsageError("cannot read " + cfg.boxes_file);
        std::stringstream ss;
        ss << f.rdbuf();
        out = boxes_from_json(ss.str());
    }
    for (const std::string& b : cfg.boxes)
        out.push_back(BoxRegion::parse(b));
    return out.empty() ? fallback() : out;
}

int cmd_generate(const Config& cfg, std::ostream& out, std::ostream& err)
{
    SaturatedLevel level;
    if (cfg.method == "both") {
        level = build_filter(cfg.q, resolve_threads(cfg.threads));
        const SaturatedLevel other = build_incremental(cfg.q);
        if (other.elements != level.elements) {
            err << "filter and incremental constructions disagree at Q = " << cfg.q << "\n";
            return kVerificationFailed;
        }
    } else {
        level = build_level(cfg, cfg.q);
    }
    std::ostringstream os;
    os << "Q,idx,a,q,inv,h\n";
    for (std::size_t i = 0; i < level.elements.size(); ++i) {
        const HeightedFraction& e = level.elements[i];
        os << cfg.q << ',' << i + 1 << ',' << e.frac.num() << ',' << e.frac.den() << ',' << e.inv << ','
           << e.height << '\n';
    }
    emit(cfg, os.str(), out);
    return kOk;
}

int cmd_pairs(const Config& cfg, std::ostream& out)
{
    if (cfg.q < 4)
        throw PreconditionError("pairs needs Q >= 4");
    const SaturatedLevel level = build_level(cfg, cfg.q);
    std::ostringstream os;
    os << "Q,q1,q2,r,mediant_pos,cell,wcell\n";
    GapScanner scanner;
    for (std::size_t i = 0; i + 1 < level.elements.size(); ++i) {
        const Fraction l = level.elements[i].frac;
        const Fraction r = level.elements[i + 1].frac;
        const GapView g = scanner.scan(l.num(), l.den(), r.num(), r.den(), cfg.q);
        os << cfg.q << ',' << l.den() << ',' << r.den() << ',' << g.r << ',' << g.mediant_pos << ','
           << region_of(l.den(), r.den(), cfg.q).cell() << ',' << wcell_of(g).label << '\n';
    }
    emit(cfg, os.str(), out);
    return kOk;
}

int cmd_phi(const Config& cfg, std::ostream& out)
{
    std::ostringstream os;
    os << "Q,phi,S\n";
    for (const PhiEntry& e : phi_range(cfg.from, cfg.to))
        os << e.Q << ',' << e.phi << ',' << e.S << '\n';
    emit(cfg, os.str(), out);
    return kOk;
}

std::pair<Int, Int> level_range(const Config& cfg)
{
    if (cfg.q > 0)
        return {cfg.q, cfg.q};
    if (cfg.from > 0 && cfg.to > 0)
        return {cfg.from, cfg.to};
    throw UsageError("give --q or both --from and --to");
}

int cmd_index_sum(const Config& cfg, std::ostream& out)
{
    const auto [lo, hi] = level_range(cfg);
    if (lo > hi)
        throw UsageError("empty level range");
    std::ostringstream os;
    os << "Q,S,index_sum,expected,ok\n";
    bool ok = true;
    for (Int Q = lo; Q <= hi; ++Q) {
        const SaturatedLevel level = build_level(cfg, Q);
        const Int s = static_cast<Int>(level.size());
        const Int sum = index_sum(level);
        ok = ok && sum == 3 * s - 1;
        os << Q << ',' << s << ',' << sum << ',' << 3 * s - 1 << ',' << (sum == 3 * s - 1 ? "true" : "false")
           << '\n';
    }
    emit(cfg, os.str(), out);
    return ok ? kOk : kVerificationFailed;
}

int cmd_delta(const Config& cfg, std::ostream& out)
{
    const auto [lo, hi] = level_range(cfg);
    if (lo < 4 || lo > hi || hi > kMaxLevel)
        throw UsageError("delta needs 4 <= Q (or 4 <= from <= to)");
    std::ostringstream os;
    os << "Q,kind,a,q\n";
    IncrementalBuilder builder;
    while (builder.level() < lo - 1)
        builder.advance_count();
    while (builder.level() < hi) {
        const LevelDelta d = builder.advance();
        for (std::size_t i = 0; i < d.inserted.size(); ++i) {
            const Fraction m = d.inserted[i];
            const Fraction l = d.vanished_pairs[i].left();
            const Fraction r = d.vanished_pairs[i].right();
            os << d.Q << ",inserted," << m.num() << ',' << m.den() << '\n';
            os << d.Q << ",vanished_left," << l.num() << ',' << l.den() << '\n';
            os << d.Q << ",vanished_right," << r.num() << ',' << r.den() << '\n';
        }
    }
    emit(cfg, os.str(), out);
    return kOk;
}

int cmd_count(const Config& cfg, std::ostream& out)
{
    const SaturatedLevel level = build_level(cfg, cfg.q);
    std::ostringstream os;
    os << "Q,beta,count,predicted,rel_error\n";
    for (double beta : cfg.betas) {
        const Int c = count_interval(level, beta);
        const double p = predicted_count(cfg.q, beta);
        const double rel = p > 0.0 ? (static_cast<double>(c) - p) / p : 0.0;
        os << cfg.q << ',' << fmt12(beta) << ',' << c << ',' << fmt12(p) << ',' << fmt12(rel) << '\n';
    }
    emit(cfg, os.str(), out);
    return kOk;
}

int cmd_density(const Config& cfg, std::ostream& out)
{
    QuadratureOptions opts;
    opts.abs_tol = cfg.tol;
    const DensityReport report =
        density_report(cfg.q, collect_boxes(cfg, default_density_boxes), opts, resolve_threads(cfg.threads));
    emit(cfg, to_json(report), out);
    return kOk;
}

std::string yes_no(bool b) { return b ? "1" : "0"; }

int cmd_regions(const Config& cfg, std::ostream& out)
{
    std::ostringstream os;
    if (cfg.list) {
        os << "name,constraints\n";
        for (const Polygon& p : regions::all()) {
            os << p.name << ',';
            for (std::size_t i = 0; i < p.constraints.size(); ++i) {
                const HalfPlane& h = p.constraints[i];
                os << (i ? ";" : "") << h.cx << "x" << (h.cy < 0 ? "" : "+") << h.cy << "y"
                   << (h.c0 < 0 ? "" : "+") << h.c0 << ">=0";
            }
            os << '\n';
        }
    } else if (cfg.q1 > 0 || cfg.q2 > 0) {
        const RegionLabel r = region_of(cfg.q1, cfg.q2, cfg.q);
        os << "q1,q2,Q,in_v,V1,V2,V3,cell\n"
           << cfg.q1 << ',' << cfg.q2 << ',' << cfg.q << ',' << yes_no(r.in_v) << ',' << yes_no(r.in_v1) << ','
           << yes_no(r.in_v2) << ',' << yes_no(r.in_v3) << ',' << r.cell() << '\n';
    } else {
        if (cfg.q < 4)
            throw PreconditionError("regions needs Q >= 4");
        const SaturatedLevel level = build_level(cfg, cfg.q);
        std::map<std::string, Int> cells;
        for (const auto& [a, b] : denominator_pairs(level))
            ++cells[region_of(a, b, cfg.q).cell()];
        const double total = static_cast<double>(level.size() - 1);
        os << "Q,cell,pairs,fraction\n";
        for (const auto& [name, n] : cells)
            os << cfg.q << ',' << name << ',' << n << ',' << fmt12(static_cast<double>(n) / total) << '\n';
    }
    emit(cfg, os.str(), out);
    return kOk;
}

int cmd_farey_baseline(const Config& cfg, std::ostream& out)
{
    const std::vector<BoxRegion> boxes = collect_boxes(cfg, default_farey_boxes);
    const auto pairs = farey_denominator_pairs(cfg.q);
    std::vector<double> fractions, areas;
    double num = 0.0, den = 0.0;
    for (const BoxRegion& b : boxes) {
        const auto hits = std::count_if(pairs.begin(), pairs.end(),
                                        [&](const auto& p) { return b.contains(p.first, p.second, cfg.q); });
        fractions.push_back(static_cast<double>(hits) / static_cast<double>(pairs.size()));
        areas.push_back(b.area());
        num += fractions.back() * areas.back();
        den += areas.back() * areas.back();
    }
    std::ostringstream os;
    os << "Q,box,fraction,area,ratio\n";
    for (std::size_t i = 0; i < boxes.size(); ++i)
        os << cfg.q << ",\"" << boxes[i].str() << "\"," << fmt12(fractions[i]) << ',' << fmt12(areas[i]) << ','
           << fmt12(areas[i] > 0.0 ? fractions[i] / areas[i] : 0.0) << '\n';
    os << "# fitted_constant," << fmt12(den > 0.0 ? num / den : 0.0) << '\n';
    emit(cfg, os.str(), out);
    return kOk;
}

int cmd_verify(const Config& cfg, std::ostream& out)
{
    if (cfg.q_max < 4 || cfg.q_max > kMaxLevel)
        throw UsageError("--q-max must lie in [4, " + std::to_string(kMaxLevel) + "]");
    std::ostringstream os;
    bool all_ok = true;
    auto report = [&](const std::string& name, bool ok, const std::string& detail) {
        all_ok = all_ok && ok;
        os << (ok ? "ok   " : "FAIL ") << name << ": " << detail << '\n';
    };

    Int oracle_bad = 0, partition_bad = 0, index_bad = 0;
    IncrementalBuilder builder;
    for (Int Q = 3; Q <= cfg.q_max; ++Q) {
        while (builder.level() < Q)
            builder.advance_count();
        const SaturatedLevel level = builder.snapshot();
        if (Q <= cfg.oracle_max && build_filter(Q, resolve_threads(cfg.threads)).elements != level.elements)
            ++oracle_bad;
        if (!verify_modular_partition(level).ok)
            ++partition_bad;
        try {
            if (index_sum(level) != 3 * static_cast<Int>(level.size()) - 1)
                ++index_bad;
        } catch (const InvariantError&) {
            ++index_bad;
        }
    }
    const std::string range = "3 <= Q <= " + std::to_string(cfg.q_max);
    report("filter/incremental agreement", oracle_bad == 0,
           "3 <= Q <= " + std::to_string(std::min(cfg.oracle_max, cfg.q_max)) + ", mismatches " +
               std::to_string(oracle_bad));
    report("modular partition", partition_bad == 0, range + ", failing levels " + std::to_string(partition_bad));
    report("index sum 3S-1", index_bad == 0, range + ", failing levels " + std::to_string(index_bad));

    const GapAudit audit = audit_range(4, cfg.q_max);
    const std::string gaps = std::to_string(audit.gaps) + " gaps";
    report("region inclusion", audit.inclusion_violations == 0,
           gaps + ", violations " + std::to_string(audit.inclusion_violations));
    report("unit continuant", audit.continuant_violations == 0,
           gaps + ", violations " + std::to_string(audit.continuant_violations));
    report("unique mediant position", audit.mediant_violations == 0,
           gaps + ", violations " + std::to_string(audit.mediant_violations));
    report("integral K and nu", audit.k_nu_violations == 0,
           gaps + ", violations " + std::to_string(audit.k_nu_violations));
    report("admissible signatures", audit.signature_violations == 0,
           gaps + ", violations " + std::to_string(audit.signature_violations));
    report("W-cell membership", audit.wcell_violations == 0,
           gaps + ", violations " + std::to_string(audit.wcell_violations));
    for (const std::string& d : audit.diagnostics)
        os << "  " << d << '\n';
    emit(cfg, os.str(), out);
    return all_ok ? kOk : kVerificationFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    Config cfg;
    CLI::App app{"Saturated Farey sets: construction, gap geometry and limiting densities", "satfarey"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for every subcommand");

    auto add_q = [&](CLI::App* sub, bool required) {
        auto* o = sub->add_option("--q", cfg.q, "Level Q")->check(CLI::Range(Int{3}, kMaxLevel));
        if (required)
            o->required();
    };
    auto add_out = [&](CLI::App* sub) { sub->add_option("--out", cfg.out_path, "Output file (default stdout)"); };
    auto add_threads = [&](CLI::App* sub) {
        sub->add_option("--threads", cfg.threads, "Worker threads (default $SATFAREY_THREADS or 1)");
    };
    auto add_method = [&](CLI::App* sub, std::vector<std::string> choices) {
        sub->add_option("--method", cfg.method, "Construction")->check(CLI::IsMember(choices));
    };
    auto add_boxes = [&](CLI::App* sub) {
        sub->add_option("--box", cfg.boxes, "Box x0,x1,y0,y1 (repeatable)")->take_all();
        sub->add_option("--boxes", cfg.boxes_file, "JSON file with a list of boxes");
    };

    auto* generate = app.add_subcommand("generate", "Write the fractions of one level as CSV");
    add_q(generate, true);
    add_method(generate, {"filter", "incremental", "both"});
    add_out(generate);
    add_threads(generate);

    auto* pairs = app.add_subcommand("pairs", "Consecutive denominator pairs with gap data");
    add_q(pairs, true);
    add_method(pairs, {"filter", "incremental"});
    add_out(pairs);
    add_threads(pairs);

    auto* phi = app.add_subcommand("phi", "Number of insertions per level");
    phi->add_option("--from", cfg.from, "First level")->required()->check(CLI::Range(Int{3}, kMaxLevel));
    phi->add_option("--to", cfg.to, "Last level")->required()->check(CLI::Range(Int{3}, kMaxLevel));
    add_out(phi);

    auto* isum = app.add_subcommand("index-sum", "Sum of indices against 3S - 1");
    add_q(isum, false);
    isum->add_option("--from", cfg.from)->check(CLI::Range(Int{3}, kMaxLevel));
    isum->add_option("--to", cfg.to)->check(CLI::Range(Int{3}, kMaxLevel));
    add_method(isum, {"filter", "incremental"});
    add_out(isum);
    add_threads(isum);

    auto* delta = app.add_subcommand("delta", "Fractions inserted at a level and the pairs they split");
    add_q(delta, false);
    delta->add_option("--from", cfg.from)->check(CLI::Range(Int{4}, kMaxLevel));
    delta->add_option("--to", cfg.to)->check(CLI::Range(Int{4}, kMaxLevel));
    add_out(delta);

    auto* count = app.add_subcommand("count", "Elements up to beta against the asymptotic count");
    add_q(count, true);
    count->add_option("--beta", cfg.betas, "Comma-separated list in [0,1]")->delimiter(',');
    add_method(count, {"filter", "incremental"});
    add_out(count);
    add_threads(count);

    auto* density = app.add_subcommand("density", "Empirical box fractions against integrated densities (JSON)");
    add_q(density, true);
    add_boxes(density);
    density->add_option("--tol", cfg.tol, "Absolute quadrature tolerance")->check(CLI::PositiveNumber);
    add_out(density);
    add_threads(density);

    auto* regions_cmd = app.add_subcommand("regions", "Classify a point or tabulate pairs per cell");
    add_q(regions_cmd, false);
    regions_cmd->add_option("--q1", cfg.q1)->check(CLI::PositiveNumber);
    regions_cmd->add_option("--q2", cfg.q2)->check(CLI::PositiveNumber);
    regions_cmd->add_flag("--list", cfg.list, "Print the polygon table");
    add_out(regions_cmd);
    add_threads(regions_cmd);

    auto* baseline = app.add_subcommand("farey-baseline", "Ordinary Farey pairs against area");
    baseline->add_option("--q", cfg.q, "Order")->required()->check(CLI::Range(Int{1}, kMaxLevel));
    add_boxes(baseline);
    add_out(baseline);

    auto* verify = app.add_subcommand("verify", "Run the invariant suite");
    verify->add_option("--q-max", cfg.q_max, "Largest level checked");
    verify->add_option("--oracle-max", cfg.oracle_max, "Largest level rebuilt by filtering");
    add_out(verify);
    add_threads(verify);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty())
        reversed.pop_back();  // program name
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "satfarey: " << e.what() << "\n";
        return kUsage;
    }

    const CLI::App* sub = app.get_subcommands().front();
    try {
        const std::string name = sub->get_name();
        if (!cfg.out_path.empty() && cfg.out_path.back() == '/')
            throw UsageError("output path names a directory");
        if (name == "generate")
            return cmd_generate(cfg, out, err);
        if (name == "pairs")
            return cmd_pairs(cfg, out);
        if (name == "phi")
            return cmd_phi(cfg, out);
        if (name == "index-sum")
            return cmd_index_sum(cfg, out);
        if (name == "delta")
            return cmd_delta(cfg, out);
        if (name == "count")
            return cmd_count(cfg, out);
        if (name == "density")
            return cmd_density(cfg, out);
        if (name == "regions")
            return cmd_regions(cfg, out);
        if (name == "farey-baseline")
            return cmd_farey_baseline(cfg, out);
        if (name == "verify")
            return cmd_verify(cfg, out);
        throw UsageError("unknown subcommand " + name);
    } catch (const UsageError& e) {
        err << "satfarey: " << e.what() << "\n";
        return kUsage;
    } catch (const PreconditionError& e) {
        err << "satfarey: " << e.what() << "\n";
        return kUsage;
    } catch (const InvariantError& e) {
        err << "satfarey: invariant violated: " << e.what() << "\n";
        return kVerificationFailed;
    } catch (const QuadratureError& e) {
        err << "satfarey: " << e.what() << "\n";
        return kVerificationFailed;
    }
}

}  // namespace satfarey::cli
